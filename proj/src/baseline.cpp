#include "mlspeed/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlspeed/simd.hpp"

namespace mlspeed {

namespace {

double block_sad(const Frame& a, int a1, int a2, const Frame& b, int b1, int b2, int size) {
    const auto& ops = kernels::active();
    double acc = 0.0;
    for (int r = 0; r < size; ++r)
        acc += ops.sum_abs_diff(a.data() + static_cast<size_t>(a1 + r) * a.width() + a2,
                                b.data() + static_cast<size_t>(b1 + r) * b.width() + b2,
                                static_cast<size_t>(size));
    return acc;
}

std::vector<std::pair<int, int>> candidate_order(int range) {
    std::vector<std::pair<int, int>> c;
    for (int d1 = -range; d1 <= range; ++d1)
        for (int d2 = -range; d2 <= range; ++d2)
            c.emplace_back(d1, d2);
    std::stable_sort(c.begin(), c.end(), [](const auto& a, const auto& b) {
        const long na = long(a.first) * a.first + long(a.second) * a.second;
        const long nb = long(b.first) * b.first + long(b.second) * b.second;
        if (na != nb)
            return na < nb;
        return a < b;
    });
    return c;
}

}  // namespace

MotionField block_match_pair(const Frame& f_prev, const Frame& f_next,
                             const BlockMatchConfig& cfg) {
    if (!f_prev.same_dims(f_next))
        throw std::invalid_argument("block_match_pair: dimension mismatch");
    if (cfg.block_size <= 0 || cfg.block_size > std::min(f_prev.height(), f_prev.width()))
        throw std::invalid_argument("block_match_pair: block_size exceeds frame");
    if (cfg.search_range < 1)
        throw std::invalid_argument("block_match_pair: search_range must be >= 1");

    const int h = f_prev.height(), w = f_prev.width(), bs = cfg.block_size;
    const auto candidates = candidate_order(cfg.search_range);

    MotionField field;
    field.block_size = bs;
    for (int b1 = 0; b1 + bs <= h; b1 += bs) {
        for (int b2 = 0; b2 + bs <= w; b2 += bs) {
            BlockVector best{b1, b2, 0, 0, std::numeric_limits<double>::infinity()};
            for (const auto& [d1, d2] : candidates) {
                const int t1 = b1 + d1, t2 = b2 + d2;
                if (t1 < 0 || t2 < 0 || t1 + bs > h || t2 + bs > w)
                    continue;
                const double sad = block_sad(f_prev, b1, b2, f_next, t1, t2, bs);
                if (sad < best.sad) {
                    best.d1 = d1;
                    best.d2 = d2;
                    best.sad = sad;
                }
            }
            field.blocks.push_back(best);
        }
    }
    return field;
}

namespace {

bool overlaps_mask(const BlockVector& b, int size, const ForegroundMask& mask) {
    for (int r = b.block_m1; r < b.block_m1 + size; ++r)
        for (int c = b.block_m2; c < b.block_m2 + size; ++c)
            if (mask.at(r, c))
                return true;
    return false;
}

double median_of(std::vector<double> v) {
    auto mid = v.begin() + static_cast<long>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1)
        return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

}  // namespace

SpeedVector aggregate_speed(const std::vector<MotionField>& fields,
                            const std::vector<ForegroundMask>* masks) {
    if (fields.empty())
        throw std::invalid_argument("aggregate_speed: no motion fields");
    if (masks && masks->size() != fields.size())
        throw std::invalid_argument("aggregate_speed: mask count mismatch");

    std::vector<double> all_d1, all_d2;
    for (size_t i = 0; i < fields.size(); ++i) {
        const auto& field = fields[i];
        std::vector<const BlockVector*> kept;
        for (const auto& b : field.blocks) {
            if (masks && !overlaps_mask(b, field.block_size, (*masks)[i]))
                continue;
            kept.push_back(&b);
        }
        if (kept.empty())
            continue;
        std::vector<double> sads;
        sads.reserve(kept.size());
        for (const auto* b : kept)
            sads.push_back(b->sad);
        const double cutoff = median_of(sads);
        for (const auto* b : kept)
            if (b->sad <= cutoff) {
                all_d1.push_back(b->d1);
                all_d2.push_back(b->d2);
            }
    }
    if (all_d1.empty())
        throw EstimationError("aggregate_speed: no qualifying blocks");
    return {static_cast<double>(std::lround(median_of(all_d1))),
            static_cast<double>(std::lround(median_of(all_d2)))};
}

}  // namespace mlspeed
