#pragma once

#include "mlspeed/core.hpp"
#include "mlspeed/spectral.hpp"

namespace mlspeed {

using ForegroundMask = BinaryMask;

struct GmmComponent {
    double weight = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

struct GmmParams {
    int k = 5;
    double initial_variance = 0.0025;
    double alpha = 0.05;
    double background_threshold = 0.7;
    double match_sigma = 2.5;
    double variance_floor = 1e-6;
    // Replacement-rate form for matched components: alpha/weight clamped
    // to [alpha, 1] when false, density-proportional when true.
    bool density_rho = false;
};

// Per-pixel adaptive mixture model of the static background.
class GmmModel {
public:
    GmmModel(int height, int width, const GmmParams& params);

    // Absorbs one frame; returns the foreground mask for it.
    ForegroundMask update(const Frame& f);

    // Per pixel, the mean of the highest-ranked (weight/sigma) component.
    Frame estimate_background() const;

    int height() const { return height_; }
    int width() const { return width_; }
    const GmmParams& params() const { return params_; }

    // Components of one pixel, sorted by weight/sigma descending.
    const GmmComponent* components(int m1, int m2) const {
        return comps_.data() + (static_cast<size_t>(m1) * width_ + m2) * params_.k;
    }

private:
    int height_;
    int width_;
    GmmParams params_;
    std::vector<GmmComponent> comps_;  // K per pixel, ranked
};

// Object template s[m]: frame values on the support mask, zero elsewhere.
struct Template {
    Frame image;
    ForegroundMask support;
    Spectrum spectrum;  // dft2(image)
};

Template extract_template(const Frame& f, const ForegroundMask& mask, int min_area = 9);

// Per-pixel temporal median; needs at least 3 frames.
Frame median_background(const FrameSequence& seq);

// Keeps the largest 8-connected component at least min_area pixels big.
ForegroundMask largest_component(const ForegroundMask& mask, int min_area);

}  // namespace mlspeed
