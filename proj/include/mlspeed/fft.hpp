#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace mlspeed::fft {

using cplx = std::complex<double>;

// Complex FFT plan for one transform length. Arbitrary lengths are
// supported: small prime factors via mixed-radix Cooley-Tukey, lengths
// with a large prime factor via the Bluestein chirp-z algorithm.
class Plan {
public:
    explicit Plan(size_t n);
    ~Plan();

    size_t length() const { return n_; }

    // In-place, unnormalized. scratch is resized as needed and may be
    // reused across calls; distinct scratch objects allow concurrent use
    // of one plan from several threads.
    void forward(cplx* data, std::vector<cplx>& scratch) const;
    void inverse(cplx* data, std::vector<cplx>& scratch) const;  // no 1/N

private:
    void transform(cplx* data, bool inv, std::vector<cplx>& scratch) const;
    void recurse(const cplx* in, cplx* out, size_t n, size_t stride,
                 size_t factor_idx, bool inv) const;
    void bluestein(cplx* data, bool inv, std::vector<cplx>& scratch) const;

    size_t n_;
    std::vector<size_t> factors_;     // empty when using Bluestein
    std::vector<cplx> roots_;         // e^{-2*pi*i*j/n}, j = 0..n-1

    // Bluestein state
    struct BluesteinState;
    std::unique_ptr<BluesteinState> blue_;
};

// Process-wide plan cache.
const Plan& plan_for(size_t n);

}  // namespace mlspeed::fft
