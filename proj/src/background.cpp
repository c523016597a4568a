#include "mlspeed/background.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mlspeed {

GmmModel::GmmModel(int height, int width, const GmmParams& params)
    : height_(height), width_(width), params_(params) {
    if (height <= 0 || width <= 0)
        throw std::invalid_argument("GmmModel: dimensions must be positive");
    if (params.k < 1)
        throw std::invalid_argument("GmmModel: k must be >= 1");
    if (params.initial_variance <= 0.0)
        throw std::invalid_argument("GmmModel: initial_variance must be positive");
    if (params.alpha <= 0.0 || params.alpha > 1.0)
        throw std::invalid_argument("GmmModel: alpha must be in (0,1]");
    if (params.background_threshold <= 0.0 || params.background_threshold >= 1.0)
        throw std::invalid_argument("GmmModel: background_threshold must be in (0,1)");
    if (params.match_sigma <= 0.0)
        throw std::invalid_argument("GmmModel: match_sigma must be positive");

    comps_.assign(static_cast<size_t>(height) * width * params.k, GmmComponent{});
    for (size_t px = 0; px < static_cast<size_t>(height) * width; ++px) {
        GmmComponent& first = comps_[px * params.k];
        first.weight = 1.0;
        first.mean = 0.5;
        first.variance = params.initial_variance;
    }
}

namespace {

double rank_of(const GmmComponent& c) {
    return c.variance > 0.0 ? c.weight / std::sqrt(c.variance) : 0.0;
}

}  // namespace

ForegroundMask GmmModel::update(const Frame& f) {
    if (f.height() != height_ || f.width() != width_)
        throw std::invalid_argument("GmmModel::update: dimension mismatch");

    ForegroundMask mask(height_, width_);
    const int k = params_.k;
    const double alpha = params_.alpha;

    for (size_t px = 0; px < static_cast<size_t>(height_) * width_; ++px) {
        GmmComponent* c = comps_.data() + px * k;
        const double x = f.data()[px];

        int matched = -1;
        for (int i = 0; i < k; ++i) {
            if (c[i].weight <= 0.0)
                continue;
            const double sigma = std::sqrt(c[i].variance);
            if (std::abs(x - c[i].mean) <= params_.match_sigma * sigma) {
                matched = i;
                break;
            }
        }

        if (matched >= 0) {
            for (int i = 0; i < k; ++i)
                c[i].weight = (1.0 - alpha) * c[i].weight + (i == matched ? alpha : 0.0);
            double rho;
            if (params_.density_rho) {
                const double var = c[matched].variance;
                const double d = x - c[matched].mean;
                rho = alpha / std::sqrt(2.0 * std::numbers::pi * var) *
                      std::exp(-0.5 * d * d / var);
                rho = std::clamp(rho, 0.0, 1.0);
            } else {
                rho = std::clamp(alpha / c[matched].weight, alpha, 1.0);
            }
            c[matched].mean = (1.0 - rho) * c[matched].mean + rho * x;
            const double d = x - c[matched].mean;
            c[matched].variance = (1.0 - rho) * c[matched].variance + rho * d * d;
            c[matched].variance = std::max(c[matched].variance, params_.variance_floor);
        } else {
            // replace the weakest slot with a fresh component at x
            int weakest = 0;
            for (int i = 1; i < k; ++i)
                if (c[i].weight < c[weakest].weight)
                    weakest = i;
            c[weakest] = {alpha, x, params_.initial_variance};
        }

        double wsum = 0.0;
        for (int i = 0; i < k; ++i)
            wsum += c[i].weight;
        for (int i = 0; i < k; ++i)
            c[i].weight /= wsum;

        std::stable_sort(c, c + k, [](const GmmComponent& a, const GmmComponent& b) {
            return rank_of(a) > rank_of(b);
        });

        // Background components: the minimal ranked prefix whose
        // cumulative weight exceeds the threshold.
        bool foreground = true;
        if (matched >= 0) {
            // find the matched component again after the resort
            double cum = 0.0;
            for (int i = 0; i < k; ++i) {
                const bool in_background = cum <= params_.background_threshold;
                const double sigma = std::sqrt(c[i].variance);
                if (c[i].weight > 0.0 && std::abs(x - c[i].mean) <= params_.match_sigma * sigma) {
                    foreground = !in_background;
                    break;
                }
                cum += c[i].weight;
            }
        }
        mask.data[px] = foreground ? 1 : 0;
    }
    return mask;
}

Frame GmmModel::estimate_background() const {
    Frame bg(height_, width_);
    for (size_t px = 0; px < static_cast<size_t>(height_) * width_; ++px)
        bg.data()[px] = comps_[px * params_.k].mean;  // components kept ranked
    return bg;
}

ForegroundMask largest_component(const ForegroundMask& mask, int min_area) {
    const int h = mask.height, w = mask.width;
    std::vector<int> label(static_cast<size_t>(h) * w, -1);
    std::vector<size_t> area;
    std::vector<size_t> stack;

    for (size_t start = 0; start < label.size(); ++start) {
        if (!mask.data[start] || label[start] >= 0)
            continue;
        const int id = static_cast<int>(area.size());
        area.push_back(0);
        stack.push_back(start);
        label[start] = id;
        while (!stack.empty()) {
            const size_t px = stack.back();
            stack.pop_back();
            ++area[static_cast<size_t>(id)];
            const int m1 = static_cast<int>(px) / w, m2 = static_cast<int>(px) % w;
            for (int d1 = -1; d1 <= 1; ++d1)
                for (int d2 = -1; d2 <= 1; ++d2) {
                    const int n1 = m1 + d1, n2 = m2 + d2;
                    if (n1 < 0 || n1 >= h || n2 < 0 || n2 >= w)
                        continue;
                    const size_t np = static_cast<size_t>(n1) * w + n2;
                    if (mask.data[np] && label[np] < 0) {
                        label[np] = id;
                        stack.push_back(np);
                    }
                }
        }
    }

    int best = -1;
    size_t best_area = 0;
    for (size_t id = 0; id < area.size(); ++id)
        if (area[id] >= static_cast<size_t>(min_area) && area[id] > best_area) {
            best = static_cast<int>(id);
            best_area = area[id];
        }

    ForegroundMask out(h, w);
    if (best >= 0)
        for (size_t px = 0; px < label.size(); ++px)
            out.data[px] = label[px] == best ? 1 : 0;
    return out;
}

Template extract_template(const Frame& f, const ForegroundMask& mask, int min_area) {
    if (f.height() != mask.height || f.width() != mask.width)
        throw std::invalid_argument("extract_template: dimension mismatch");
    if (mask.count() == 0)
        throw EstimationError("extract_template: empty foreground mask");

    ForegroundMask support = largest_component(mask, min_area);
    if (support.count() == 0)
        throw EstimationError("extract_template: no foreground component of sufficient area");

    Template t;
    t.image = Frame(f.height(), f.width());
    for (size_t i = 0; i < f.size(); ++i)
        t.image.data()[i] = support.data[i] ? f.data()[i] : 0.0;
    t.support = std::move(support);
    t.spectrum = dft2(t.image);
    return t;
}

Frame median_background(const FrameSequence& seq) {
    if (seq.frames.size() < 3)
        throw std::invalid_argument("median_background: needs at least 3 frames");
    const Frame& first = seq.frames.front();
    Frame bg(first.height(), first.width());
    std::vector<double> vals(seq.frames.size());
    for (size_t px = 0; px < first.size(); ++px) {
        for (size_t n = 0; n < seq.frames.size(); ++n)
            vals[n] = seq.frames[n].data()[px];
        auto mid = vals.begin() + static_cast<long>(vals.size() / 2);
        std::nth_element(vals.begin(), mid, vals.end());
        if (vals.size() % 2 == 1) {
            bg.data()[px] = *mid;
        } else {
            const double hi = *mid;
            const double lo = *std::max_element(vals.begin(), mid);
            bg.data()[px] = 0.5 * (lo + hi);
        }
    }
    return bg;
}

}  // namespace mlspeed
