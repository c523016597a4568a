#pragma once

#include <filesystem>

#include "mlspeed/background.hpp"
#include "mlspeed/core.hpp"

namespace mlspeed {

enum class WrapMode { circular, clipped };

// Ground-truth synthetic sequence: static background + sprite translating
// at constant integer speed + optional AWGN.
struct SynthConfig {
    Frame background;
    Frame sprite;
    BinaryMask sprite_mask;
    PixelIndex start_position;
    SpeedVector v_true;             // integer components
    int total_frames = 30;
    int background_frames = 10;
    double sigma2 = 0.0;
    bool clip = true;
    WrapMode wrap_mode = WrapMode::circular;
    RngSeed seed = 0;
    double frame_rate = 15.0;
};

struct GroundTruth {
    SpeedVector v_true;
    std::vector<PixelIndex> positions;  // per observation frame, n = 0..
    std::vector<Frame> clean_frames;    // pre-noise, full sequence
    Template template_at_origin;        // exact s and mask at n = 0
};

// Background overwritten by the sprite at start + v*n; n indexes the
// observation window (n = 0 is the first frame after the background run).
Frame render_clean_frame(const SynthConfig& cfg, int n);

std::pair<FrameSequence, GroundTruth> generate(const SynthConfig& cfg);

// Full-scale preset: 361x616, 85 frames of which 40 background, 15 Hz.
// Sprite and background supplied by caller.
SynthConfig fullscale_preset();

// Small fast preset with a built-in textured background and 12x12 sprite.
SynthConfig desk_preset();

// Deterministic textured content for the desk preset.
Frame desk_background(int height = 64, int width = 64);
std::pair<Frame, BinaryMask> desk_sprite(int size = 12);

// Writes PGM frames + manifest + ground-truth sidecar + exact template.
void write_sequence(const std::filesystem::path& dir, const FrameSequence& seq,
                    const SynthConfig& cfg, const GroundTruth& truth);

// Reads the sidecar written by write_sequence.
struct GroundTruthSidecar {
    SpeedVector v_true;
    PixelIndex start;
    WrapMode wrap_mode = WrapMode::circular;
    double sigma2 = 0.0;
    RngSeed seed = 0;
};
GroundTruthSidecar read_sidecar(const std::filesystem::path& dir);

}  // namespace mlspeed
