#include "mlspeed/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mlspeed/fft.hpp"
#include "mlspeed/simd.hpp"

namespace mlspeed {

namespace {

// Row pass then column pass over a row-major complex grid, in place.
void transform2d(Spectrum& g, bool inverse) {
    const int h = g.height, w = g.width;
    const auto& row_plan = fft::plan_for(static_cast<size_t>(w));
    const auto& col_plan = fft::plan_for(static_cast<size_t>(h));

    parallel_for(0, h, [&](int r) {
        thread_local std::vector<cplx> scratch;
        cplx* row = g.values.data() + static_cast<size_t>(r) * w;
        if (inverse)
            row_plan.inverse(row, scratch);
        else
            row_plan.forward(row, scratch);
    });
    parallel_for(0, w, [&](int c) {
        thread_local std::vector<cplx> scratch;
        thread_local std::vector<cplx> col;
        col.resize(static_cast<size_t>(h));
        for (int r = 0; r < h; ++r)
            col[static_cast<size_t>(r)] = g.at(r, c);
        if (inverse)
            col_plan.inverse(col.data(), scratch);
        else
            col_plan.forward(col.data(), scratch);
        for (int r = 0; r < h; ++r)
            g.at(r, c) = col[static_cast<size_t>(r)];
    });
}

}  // namespace

Spectrum dft2(const Frame& f) {
    Spectrum s(f.height(), f.width());
    const double* p = f.data();
    for (size_t i = 0; i < f.size(); ++i)
        s.values[i] = cplx{p[i], 0.0};
    transform2d(s, false);
    return s;
}

Spectrum dft2(const Spectrum& grid) {
    Spectrum s = grid;
    transform2d(s, false);
    return s;
}

Spectrum idft2_unnormalized(const Spectrum& s) {
    Spectrum g = s;
    transform2d(g, true);
    return g;
}

Spectrum idft2(const Spectrum& s) {
    Spectrum g = idft2_unnormalized(s);
    const double scale = 1.0 / (static_cast<double>(s.height) * s.width);
    for (auto& v : g.values)
        v *= scale;
    return g;
}

Frame real_part(const Spectrum& grid) {
    Frame f(grid.height, grid.width);
    double* p = f.data();
    for (size_t i = 0; i < grid.size(); ++i)
        p[i] = grid.values[i].real();
    return f;
}

Spectrum phase_shift(const Spectrum& s, int d1, int d2) {
    Spectrum out(s.height, s.width);
    // Separable: e^{-j2pi(k1 d1/M1 + k2 d2/M2)}
    std::vector<cplx> ph1(static_cast<size_t>(s.height)), ph2(static_cast<size_t>(s.width));
    for (int k1 = 0; k1 < s.height; ++k1) {
        const double a = -2.0 * std::numbers::pi * static_cast<double>(k1) * d1 / s.height;
        ph1[static_cast<size_t>(k1)] = {std::cos(a), std::sin(a)};
    }
    for (int k2 = 0; k2 < s.width; ++k2) {
        const double a = -2.0 * std::numbers::pi * static_cast<double>(k2) * d2 / s.width;
        ph2[static_cast<size_t>(k2)] = {std::cos(a), std::sin(a)};
    }
    for (int k1 = 0; k1 < s.height; ++k1)
        for (int k2 = 0; k2 < s.width; ++k2)
            out.at(k1, k2) = s.at(k1, k2) * ph1[static_cast<size_t>(k1)] * ph2[static_cast<size_t>(k2)];
    return out;
}

Frame cross_correlation_map(const Frame& a, const Frame& t) {
    if (!a.same_dims(t))
        throw std::invalid_argument("cross_correlation_map: dimension mismatch");
    Spectrum fa = dft2(a);
    Spectrum ft = dft2(t);
    Spectrum prod(a.height(), a.width());
    kernels::active().mul_conj(fa.values.data(), ft.values.data(), prod.values.data(),
                               prod.size());
    return real_part(idft2(prod));
}

}  // namespace mlspeed
