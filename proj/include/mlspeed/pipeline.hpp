#pragma once

#include <optional>

#include "mlspeed/baseline.hpp"
#include "mlspeed/estimator.hpp"
#include "mlspeed/synth.hpp"

namespace mlspeed {

enum class TemplateSource { known, gmm };

struct PipelineOptions {
    BackgroundMode mode = BackgroundMode::omitted;
    TemplateSource template_source = TemplateSource::gmm;
    std::optional<Template> known_template;
    GmmParams gmm;
    int template_min_area = 9;
    int v_max = 8;
    bool taper = false;
    BlockMatchConfig block;
};

struct StageTimes {
    double gmm_ms = 0.0;
    double fft_ms = 0.0;
    double search_ms = 0.0;
};

struct PipelineResult {
    EstimationResult estimate;
    Frame background;                    // all zeros when no background frames
    std::vector<ForegroundMask> masks;   // per observation frame; empty without GMM
    StageTimes times;
};

// Full ML pipeline: GMM over the leading background frames, template
// extraction at the first observation frame, then the grid-search
// estimator. In omitted mode the observation frames are reduced to their
// GMM foreground (background pixels zeroed) and B[k] = 0; in included
// mode raw frames are used with the estimated background spectrum.
PipelineResult run_ml_pipeline(const FrameSequence& seq, int background_frame_count,
                               const PipelineOptions& opts);

// Block-matching comparator over the observation window.
SpeedVector run_block_matching(const FrameSequence& seq, int background_frame_count,
                               const PipelineOptions& opts);

}  // namespace mlspeed
