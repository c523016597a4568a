#pragma once

#include <optional>

#include "mlspeed/background.hpp"
#include "mlspeed/core.hpp"

namespace mlspeed {

struct BlockMatchConfig {
    int block_size = 35;
    int search_range = 8;
};

struct BlockVector {
    int block_m1 = 0;  // block origin in f_prev
    int block_m2 = 0;
    int d1 = 0;
    int d2 = 0;
    double sad = 0.0;
};

struct MotionField {
    int block_size = 0;
    std::vector<BlockVector> blocks;
};

// Exhaustive SAD search per full block; candidate windows falling outside
// the frame are skipped. Ties go to the smallest |d|, then lexicographic.
MotionField block_match_pair(const Frame& f_prev, const Frame& f_next,
                             const BlockMatchConfig& cfg);

// Robust aggregation of block vectors into one global speed: per pair,
// keep mask-overlapping blocks with SAD at or below the median of the
// kept set, then take the component-wise median across all pairs.
SpeedVector aggregate_speed(const std::vector<MotionField>& fields,
                            const std::vector<ForegroundMask>* masks = nullptr);

}  // namespace mlspeed
