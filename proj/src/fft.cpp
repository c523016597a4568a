#include "mlspeed/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace mlspeed::fft {

namespace {
constexpr size_t kMaxDirectRadix = 61;

std::vector<size_t> factorize(size_t n) {
    std::vector<size_t> f;
    for (size_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            f.push_back(p);
            n /= p;
        }
    }
    if (n > 1)
        f.push_back(n);
    return f;
}

size_t next_pow2(size_t n) {
    size_t m = 1;
    while (m < n)
        m <<= 1;
    return m;
}
}  // namespace

struct Plan::BluesteinState {
    size_t m = 0;                     // pow2 convolution length >= 2n-1
    std::unique_ptr<Plan> conv_plan;  // length m
    std::vector<cplx> chirp;          // e^{-i*pi*j^2/n}
    std::vector<cplx> filter_fft;     // FFT_m of conj-chirp filter
};

Plan::Plan(size_t n) : n_(n) {
    if (n == 0)
        throw std::invalid_argument("fft::Plan: length must be positive");
    factors_ = factorize(n);

    roots_.resize(n);
    for (size_t j = 0; j < n; ++j) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        roots_[j] = {std::cos(ang), std::sin(ang)};
    }

    if (!factors_.empty() && factors_.back() > kMaxDirectRadix) {
        factors_.clear();
        blue_ = std::make_unique<BluesteinState>();
        blue_->m = next_pow2(2 * n - 1);
        blue_->conv_plan = std::make_unique<Plan>(blue_->m);
        blue_->chirp.resize(n);
        for (size_t j = 0; j < n; ++j) {
            // j^2 reduced mod 2n keeps the phase argument small
            const size_t jsq = (j * j) % (2 * n);
            const double ang = -std::numbers::pi * static_cast<double>(jsq) / static_cast<double>(n);
            blue_->chirp[j] = {std::cos(ang), std::sin(ang)};
        }
        std::vector<cplx> filt(blue_->m, cplx{0.0, 0.0});
        filt[0] = std::conj(blue_->chirp[0]);
        for (size_t j = 1; j < n; ++j) {
            filt[j] = std::conj(blue_->chirp[j]);
            filt[blue_->m - j] = filt[j];
        }
        std::vector<cplx> scratch;
        blue_->conv_plan->forward(filt.data(), scratch);
        blue_->filter_fft = std::move(filt);
    }
}

Plan::~Plan() = default;

void Plan::forward(cplx* data, std::vector<cplx>& scratch) const {
    transform(data, false, scratch);
}

void Plan::inverse(cplx* data, std::vector<cplx>& scratch) const {
    transform(data, true, scratch);
}

void Plan::transform(cplx* data, bool inv, std::vector<cplx>& scratch) const {
    if (n_ == 1)
        return;
    if (blue_) {
        bluestein(data, inv, scratch);
        return;
    }
    if (scratch.size() < n_)
        scratch.resize(n_);
    recurse(data, scratch.data(), n_, 1, 0, inv);
    std::copy(scratch.begin(), scratch.begin() + static_cast<long>(n_), data);
}

void Plan::recurse(const cplx* in, cplx* out, size_t n, size_t stride,
                   size_t factor_idx, bool inv) const {
    if (n == 1) {
        out[0] = in[0];
        return;
    }
    const size_t r = factors_[factor_idx];
    const size_t m = n / r;
    for (size_t q = 0; q < r; ++q)
        recurse(in + q * stride, out + q * m, m, stride * r, factor_idx + 1, inv);

    const size_t step_n = n_ / n;  // stride into roots_ for w_n
    const size_t step_r = n_ / r;  // stride into roots_ for w_r
    cplx t[kMaxDirectRadix + 1];
    for (size_t k = 0; k < m; ++k) {
        size_t tw = 0;  // (q*k) mod n
        for (size_t q = 0; q < r; ++q) {
            cplx w = roots_[tw * step_n];
            if (inv)
                w = std::conj(w);
            t[q] = out[q * m + k] * w;
            tw += k;
            if (tw >= n)
                tw -= n;
        }
        for (size_t p = 0; p < r; ++p) {
            cplx acc = t[0];
            size_t idx = 0;  // (p*q) mod r
            for (size_t q = 1; q < r; ++q) {
                idx += p;
                if (idx >= r)
                    idx -= r;
                cplx w = roots_[idx * step_r];
                if (inv)
                    w = std::conj(w);
                acc += t[q] * w;
            }
            out[p * m + k] = acc;
        }
    }
}

void Plan::bluestein(cplx* data, bool inv, std::vector<cplx>& scratch) const {
    const size_t m = blue_->m;
    std::vector<cplx> work(m, cplx{0.0, 0.0});
    for (size_t j = 0; j < n_; ++j) {
        const cplx x = inv ? std::conj(data[j]) : data[j];
        work[j] = x * blue_->chirp[j];
    }
    blue_->conv_plan->forward(work.data(), scratch);
    for (size_t j = 0; j < m; ++j)
        work[j] *= blue_->filter_fft[j];
    blue_->conv_plan->inverse(work.data(), scratch);
    const double scale = 1.0 / static_cast<double>(m);
    for (size_t j = 0; j < n_; ++j) {
        const cplx y = work[j] * scale * blue_->chirp[j];
        data[j] = inv ? std::conj(y) : y;
    }
}

const Plan& plan_for(size_t n) {
    static std::mutex mtx;
    static std::map<size_t, std::unique_ptr<Plan>> cache;
    std::lock_guard lock(mtx);
    auto& slot = cache[n];
    if (!slot)
        slot = std::make_unique<Plan>(n);
    return *slot;
}

}  // namespace mlspeed::fft
