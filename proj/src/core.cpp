#include "mlspeed/core.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <thread>

namespace mlspeed {

size_t BinaryMask::count() const {
    return static_cast<size_t>(std::count_if(data.begin(), data.end(),
                                             [](uint8_t v) { return v != 0; }));
}

void FrameSequence::validate() const {
    if (frames.empty())
        throw std::invalid_argument("FrameSequence: needs at least one frame");
    if (sample_time <= 0.0)
        throw std::invalid_argument("FrameSequence: sample_time must be positive");
    for (const auto& f : frames)
        if (!f.same_dims(frames.front()))
            throw std::invalid_argument("FrameSequence: frame dimensions differ");
}

RngSeed derive_seed(RngSeed base, uint64_t stream) {
    // splitmix64 finalizer over the combined value
    uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PixelIndex wrap(long p1, long p2, int m1_dim, int m2_dim) {
    if (m1_dim <= 0 || m2_dim <= 0)
        throw std::invalid_argument("wrap: dimensions must be positive");
    long r1 = p1 % m1_dim;
    long r2 = p2 % m2_dim;
    if (r1 < 0) r1 += m1_dim;
    if (r2 < 0) r2 += m2_dim;
    return {static_cast<int>(r1), static_cast<int>(r2)};
}

FrameStats frame_stats(const Frame& f) {
    FrameStats s;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    const double* p = f.data();
    const size_t n = f.size();
    for (size_t i = 0; i < n; ++i) {
        sum += p[i];
        s.min = std::min(s.min, p[i]);
        s.max = std::max(s.max, p[i]);
    }
    s.mean = sum / static_cast<double>(n);
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = p[i] - s.mean;
        acc += d * d;
    }
    s.variance = acc / static_cast<double>(n);
    return s;
}

namespace {
std::atomic<int> g_max_threads{0};  // 0 = not set yet
}

int max_threads() {
    int n = g_max_threads.load(std::memory_order_relaxed);
    if (n <= 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0)
            n = 1;
    }
    return n;
}

void set_max_threads(int n) {
    g_max_threads.store(n > 0 ? n : 1, std::memory_order_relaxed);
}

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
    const int count = end - begin;
    const int workers = std::min(max_threads(), count);
    if (workers <= 1 || count < 4) {
        for (int i = begin; i < end; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::atomic<int> next{begin};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < end; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& t : pool)
        t.join();
}

}  // namespace mlspeed
