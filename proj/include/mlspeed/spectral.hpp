#pragma once

#include <complex>
#include <vector>

#include "mlspeed/core.hpp"

namespace mlspeed {

using cplx = std::complex<double>;

// 2-D DFT grid indexed by k = (k1, k2), row-major like Frame.
struct Spectrum {
    int height = 0;
    int width = 0;
    std::vector<cplx> values;

    Spectrum() = default;
    Spectrum(int h, int w)
        : height(h), width(w), values(static_cast<size_t>(h) * w) {}

    cplx& at(int k1, int k2) { return values[static_cast<size_t>(k1) * width + k2]; }
    cplx at(int k1, int k2) const { return values[static_cast<size_t>(k1) * width + k2]; }
    size_t size() const { return values.size(); }
    bool same_dims(const Spectrum& o) const { return height == o.height && width == o.width; }
};

struct SpatialFrequency {
    double u1 = 0.0;
    double u2 = 0.0;
};

inline SpatialFrequency spatial_frequency(int k1, int k2, int m1_dim, int m2_dim) {
    return {static_cast<double>(k1) / m1_dim, static_cast<double>(k2) / m2_dim};
}

// Forward 2-D DFT, unnormalized: X[k] = sum_m x[m] e^{-j2pi u_k.m}.
Spectrum dft2(const Frame& f);
Spectrum dft2(const Spectrum& grid);  // complex input

// Inverse 2-D DFT with 1/(M1*M2); returns a complex grid.
Spectrum idft2(const Spectrum& s);

// Inverse without the 1/(M1*M2) factor.
Spectrum idft2_unnormalized(const Spectrum& s);

Frame real_part(const Spectrum& grid);

// Shift theorem: multiply bin k by e^{-j2pi u_k.d}.
Spectrum phase_shift(const Spectrum& s, int d1, int d2);

// Circular cross-correlation c[p] = sum_m a[m] * t[(m - p) mod dims].
Frame cross_correlation_map(const Frame& a, const Frame& t);

}  // namespace mlspeed
