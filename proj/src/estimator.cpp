#include "mlspeed/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mlspeed/simd.hpp"

namespace mlspeed {

std::vector<std::pair<int, int>> SpeedGrid::hypotheses() const {
    if (v_max < 0)
        throw std::invalid_argument("SpeedGrid: v_max must be non-negative");
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<size_t>(2 * v_max + 1) * (2 * v_max + 1));
    for (int v1 = -v_max; v1 <= v_max; ++v1)
        for (int v2 = -v_max; v2 <= v_max; ++v2)
            out.emplace_back(v1, v2);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        const long na = long(a.first) * a.first + long(a.second) * a.second;
        const long nb = long(b.first) * b.first + long(b.second) * b.second;
        if (na != nb)
            return na < nb;
        return a < b;
    });
    return out;
}

double ObjectiveSurface::score_at(int v1, int v2) const {
    for (size_t i = 0; i < speeds.size(); ++i)
        if (speeds[i] == std::pair{v1, v2})
            return scores[i];
    throw std::out_of_range("ObjectiveSurface: speed not on grid");
}

EstimatorContext build_context(const FrameSequence& seq, const std::optional<Frame>& b,
                               const Template& t) {
    seq.validate();
    const Frame& first = seq.frames.front();
    if (t.image.height() != first.height() || t.image.width() != first.width())
        throw std::invalid_argument("build_context: template dimensions mismatch");
    if (b && !b->same_dims(first))
        throw std::invalid_argument("build_context: background dimensions mismatch");

    EstimatorContext ctx;
    ctx.height = first.height();
    ctx.width = first.width();
    ctx.sample_time = seq.sample_time;
    ctx.frame_count = static_cast<int>(seq.frames.size());
    ctx.template_spectrum = t.spectrum;

    ctx.spectra.reserve(seq.frames.size());
    for (const auto& f : seq.frames)
        ctx.spectra.push_back(dft2(f));

    ctx.background_spectrum = b ? dft2(*b) : Spectrum(ctx.height, ctx.width);

    ctx.temporal_mean = Spectrum(ctx.height, ctx.width);
    for (const auto& s : ctx.spectra)
        for (size_t i = 0; i < s.size(); ++i)
            ctx.temporal_mean.values[i] += s.values[i];
    const double inv_n = 1.0 / ctx.frame_count;
    for (auto& v : ctx.temporal_mean.values)
        v *= inv_n;
    return ctx;
}

double objective_direct(const EstimatorContext& ctx, double v1, double v2) {
    const int h = ctx.height, w = ctx.width, n_frames = ctx.frame_count;
    double total = 0.0;
    // summation order: k-major, then n
    for (int k1 = 0; k1 < h; ++k1) {
        for (int k2 = 0; k2 < w; ++k2) {
            const size_t idx = static_cast<size_t>(k1) * w + k2;
            const cplx s_conj = std::conj(ctx.template_spectrum.values[idx]);
            const cplx bkg = ctx.background_spectrum.values[idx];
            // phase ramp e^{+j 2 pi u_k . v n}, advanced incrementally in n
            const double ang = 2.0 * std::numbers::pi *
                (double(k1) / h * v1 + double(k2) / w * v2);
            const cplx step{std::cos(ang), std::sin(ang)};
            cplx phase{1.0, 0.0};
            double acc = 0.0;
            for (int n = 0; n < n_frames; ++n) {
                const cplx term = (ctx.spectra[static_cast<size_t>(n)].values[idx] - bkg) *
                                  s_conj * phase;
                acc += term.real();
                phase *= step;
            }
            total += acc;
        }
    }
    return total;
}

ObjectiveSurface objective_surface_fast(const EstimatorContext& ctx, const SpeedGrid& grid) {
    const int h = ctx.height, w = ctx.width;
    ObjectiveSurface surface;
    surface.v_max = grid.v_max;
    surface.speeds = grid.hypotheses();
    surface.scores.assign(surface.speeds.size(), 0.0);

    Spectrum prod(h, w);
    const auto& ops = kernels::active();
    for (int n = 0; n < ctx.frame_count; ++n) {
        // (X[k,n] - B[k]) * conj(S[k]), then an unnormalized inverse
        // transform gives sum_k (...) e^{+j2pi u_k . p} at every pixel p.
        ops.sub_mul_conj(ctx.spectra[static_cast<size_t>(n)].values.data(),
                         ctx.background_spectrum.values.data(),
                         ctx.template_spectrum.values.data(), prod.values.data(),
                         prod.size());
        Spectrum corr = idft2_unnormalized(prod);
        for (size_t i = 0; i < surface.speeds.size(); ++i) {
            const auto [v1, v2] = surface.speeds[i];
            const auto p = wrap(long(v1) * n, long(v2) * n, h, w);
            surface.scores[i] += corr.at(p.m1, p.m2).real();
        }
    }
    return surface;
}

EstimationResult estimate_speed(const EstimatorContext& ctx, const SpeedGrid& grid) {
    if (ctx.frame_count < 2)
        throw std::invalid_argument("estimate_speed: needs at least 2 frames (N >= 2)");
    auto surface = objective_surface_fast(ctx, grid);
    if (surface.speeds.empty())
        throw std::invalid_argument("estimate_speed: empty speed grid");

    // hypotheses are pre-sorted by (|v|, v1, v2); strict improvement
    // implements the tie-break
    size_t best = 0;
    double max_score = surface.scores[0], min_score = surface.scores[0];
    for (size_t i = 1; i < surface.scores.size(); ++i) {
        if (surface.scores[i] > max_score) {
            max_score = surface.scores[i];
            best = i;
        }
        min_score = std::min(min_score, surface.scores[i]);
    }

    EstimationResult res;
    res.speed = {double(surface.speeds[best].first), double(surface.speeds[best].second)};
    res.score = max_score;
    res.degenerate_flat = (max_score - min_score) <= 1e-12 * std::abs(max_score);
    res.surface = std::move(surface);
    return res;
}

double included_constant_term(const EstimatorContext& ctx) {
    double total = 0.0;
    for (size_t i = 0; i < ctx.temporal_mean.size(); ++i)
        total += (ctx.temporal_mean.values[i] *
                  std::conj(ctx.background_spectrum.values[i])).real();
    return ctx.frame_count * total;
}

Frame apply_border_taper(const Frame& f, double border_fraction) {
    const int h = f.height(), w = f.width();
    auto window = [border_fraction](int i, int n) {
        const double edge = border_fraction * n;
        if (edge <= 0.0)
            return 1.0;
        const double d = std::min<double>(i, n - 1 - i);
        if (d >= edge)
            return 1.0;
        return 0.5 * (1.0 - std::cos(std::numbers::pi * d / edge));
    };
    Frame out(h, w);
    for (int m1 = 0; m1 < h; ++m1)
        for (int m2 = 0; m2 < w; ++m2)
            out.at(m1, m2) = f.at(m1, m2) * window(m1, h) * window(m2, w);
    return out;
}

}  // namespace mlspeed
