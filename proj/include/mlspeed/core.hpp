#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace mlspeed {

// Pixel position (m1, m2): m1 indexes rows (height), m2 columns (width).
struct PixelIndex {
    int m1 = 0;
    int m2 = 0;
    bool operator==(const PixelIndex&) const = default;
};

// One grayscale frame, row-major, intensities nominally in [0,1].
class Frame {
public:
    Frame() = default;
    Frame(int height, int width, double fill = 0.0)
        : height_(height), width_(width), pixels_(checked_size(height, width), fill) {}

    int height() const { return height_; }
    int width() const { return width_; }
    size_t size() const { return pixels_.size(); }

    double& at(int m1, int m2) { return pixels_[static_cast<size_t>(m1) * width_ + m2]; }
    double at(int m1, int m2) const { return pixels_[static_cast<size_t>(m1) * width_ + m2]; }

    double* data() { return pixels_.data(); }
    const double* data() const { return pixels_.data(); }

    bool same_dims(const Frame& o) const { return height_ == o.height_ && width_ == o.width_; }
    bool operator==(const Frame&) const = default;

private:
    static size_t checked_size(int height, int width) {
        if (height <= 0 || width <= 0)
            throw std::invalid_argument("Frame: dimensions must be positive");
        return static_cast<size_t>(height) * width;
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<double> pixels_;
};

// Binary mask with frame dimensions; nonzero = set.
struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int h, int w, uint8_t fill = 0)
        : height(h), width(w), data(static_cast<size_t>(h) * w, fill) {}

    uint8_t at(int m1, int m2) const { return data[static_cast<size_t>(m1) * width + m2]; }
    uint8_t& at(int m1, int m2) { return data[static_cast<size_t>(m1) * width + m2]; }
    size_t count() const;
};

// Ordered frames sampled at interval sample_time (seconds).
struct FrameSequence {
    std::vector<Frame> frames;
    double sample_time = 1.0;

    double frame_rate() const { return 1.0 / sample_time; }
    void validate() const;
};

// Speed in pixel/frame; (v1, v2) = (vertical, horizontal).
struct SpeedVector {
    double v1 = 0.0;
    double v2 = 0.0;
    bool operator==(const SpeedVector&) const = default;
};

using RngSeed = uint64_t;
using Rng = std::mt19937_64;

// Stateless mix producing independent substreams, e.g. per-frame noise.
RngSeed derive_seed(RngSeed base, uint64_t stream);

// Mathematical modulo wrap of a signed position onto the frame torus.
PixelIndex wrap(long p1, long p2, int m1_dim, int m2_dim);

struct FrameStats {
    double mean = 0.0;
    double variance = 0.0;  // population variance
    double min = 0.0;
    double max = 0.0;
};

FrameStats frame_stats(const Frame& f);

// Estimation-level failures (empty foreground, too-short windows); the
// CLI maps these to their own exit code.
struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Worker cap for data-parallel loops; defaults to hardware concurrency.
int max_threads();
void set_max_threads(int n);

// Chunked index-parallel loop; fn must write disjoint state per index.
// Runs inline when the range is small or the cap is 1.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace mlspeed
