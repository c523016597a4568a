#pragma once

#include <optional>

#include "mlspeed/background.hpp"
#include "mlspeed/core.hpp"
#include "mlspeed/spectral.hpp"

namespace mlspeed {

enum class BackgroundMode { included, omitted };

// Frozen per-window state shared by every objective evaluation.
struct EstimatorContext {
    std::vector<Spectrum> spectra;   // X[k,n], n = 0..N-1
    Spectrum background_spectrum;    // B[k]; all-zeros in omitted mode
    Spectrum template_spectrum;      // S[k]
    Spectrum temporal_mean;          // (1/N) sum_n X[k,n]
    double sample_time = 1.0;
    int frame_count = 0;
    int height = 0;
    int width = 0;
};

struct SpeedGrid {
    int v_max = 8;

    // All integer pairs |vi| <= v_max, ordered for argmax tie-breaking:
    // ascending |v|_2, then lexicographic (v1, v2).
    std::vector<std::pair<int, int>> hypotheses() const;
};

struct ObjectiveSurface {
    int v_max = 0;
    std::vector<std::pair<int, int>> speeds;
    std::vector<double> scores;

    double score_at(int v1, int v2) const;
};

struct EstimationResult {
    SpeedVector speed;
    double score = 0.0;
    BackgroundMode mode = BackgroundMode::omitted;
    bool degenerate_flat = false;
    ObjectiveSurface surface;
};

// b absent means omitted background (B[k] = 0).
EstimatorContext build_context(const FrameSequence& seq, const std::optional<Frame>& b,
                               const Template& t);

// Brute-force triple sum of the v-dependent objective term; defined for
// real-valued v. Serves as the oracle for the fast path.
double objective_direct(const EstimatorContext& ctx, double v1, double v2);

// Correlation-stack evaluation of the whole integer grid:
// one background-subtracted cross-correlation map per frame, sampled
// along the trajectory (v*n).
ObjectiveSurface objective_surface_fast(const EstimatorContext& ctx, const SpeedGrid& grid);

EstimationResult estimate_speed(const EstimatorContext& ctx, const SpeedGrid& grid);

// The v-independent additive constant sum_k Re{N * Xbar[k] * conj(B[k])}.
double included_constant_term(const EstimatorContext& ctx);

// Raised-cosine (Tukey) border taper applied identically to frames and
// template when the taper option is on.
Frame apply_border_taper(const Frame& f, double border_fraction = 0.1);

}  // namespace mlspeed
