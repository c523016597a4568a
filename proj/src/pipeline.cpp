#include "mlspeed/pipeline.hpp"

#include <chrono>
#include <stdexcept>

namespace mlspeed {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

FrameSequence observation_window(const FrameSequence& seq, int background_frame_count) {
    if (background_frame_count < 0 ||
        background_frame_count >= static_cast<int>(seq.frames.size()))
        throw std::invalid_argument("pipeline: background frame count out of range");
    FrameSequence obs;
    obs.sample_time = seq.sample_time;
    obs.frames.assign(seq.frames.begin() + background_frame_count, seq.frames.end());
    return obs;
}

}  // namespace

PipelineResult run_ml_pipeline(const FrameSequence& seq, int background_frame_count,
                               const PipelineOptions& opts) {
    seq.validate();
    PipelineResult result;
    FrameSequence obs = observation_window(seq, background_frame_count);
    if (obs.frames.size() < 2)
        throw EstimationError("pipeline: observation window needs N >= 2 frames (degenerate flat objective)");

    const Frame& first = seq.frames.front();
    result.background = Frame(first.height(), first.width());

    const bool have_gmm = background_frame_count > 0;
    if (have_gmm) {
        auto t0 = clock_type::now();
        GmmModel model(first.height(), first.width(), opts.gmm);
        for (int i = 0; i < background_frame_count; ++i)
            model.update(seq.frames[static_cast<size_t>(i)]);
        result.background = model.estimate_background();
        for (const auto& f : obs.frames)
            result.masks.push_back(model.update(f));
        result.times.gmm_ms = ms_since(t0);
    }

    Template tmpl;
    if (opts.template_source == TemplateSource::known) {
        if (!opts.known_template)
            throw std::invalid_argument("pipeline: known template requested but not provided");
        tmpl = *opts.known_template;
    } else {
        if (!have_gmm)
            throw EstimationError("pipeline: gmm template needs background frames");
        tmpl = extract_template(obs.frames.front(), result.masks.front(),
                                opts.template_min_area);
    }

    // Omitted background: zero everything the GMM calls background, then
    // estimate with B[k] = 0. Included: raw frames with B[k] from the GMM.
    std::optional<Frame> bg_for_context;
    FrameSequence frames_for_context = obs;
    if (opts.mode == BackgroundMode::included) {
        if (have_gmm)
            bg_for_context = result.background;
    } else if (have_gmm) {
        for (size_t n = 0; n < frames_for_context.frames.size(); ++n) {
            Frame& f = frames_for_context.frames[n];
            const auto& mask = result.masks[n];
            for (size_t i = 0; i < f.size(); ++i)
                if (!mask.data[i])
                    f.data()[i] = 0.0;
        }
    }

    if (opts.taper) {
        for (auto& f : frames_for_context.frames)
            f = apply_border_taper(f);
        tmpl.image = apply_border_taper(tmpl.image);
        tmpl.spectrum = dft2(tmpl.image);
    }

    auto t_fft = clock_type::now();
    EstimatorContext ctx = build_context(frames_for_context, bg_for_context, tmpl);
    result.times.fft_ms = ms_since(t_fft);

    auto t_search = clock_type::now();
    result.estimate = estimate_speed(ctx, SpeedGrid{opts.v_max});
    result.estimate.mode = opts.mode;
    result.times.search_ms = ms_since(t_search);
    return result;
}

SpeedVector run_block_matching(const FrameSequence& seq, int background_frame_count,
                               const PipelineOptions& opts) {
    seq.validate();
    FrameSequence obs = observation_window(seq, background_frame_count);
    if (obs.frames.size() < 2)
        throw EstimationError("pipeline: block matching needs at least one frame pair");

    std::vector<ForegroundMask> masks;
    if (background_frame_count > 0) {
        GmmModel model(seq.frames.front().height(), seq.frames.front().width(), opts.gmm);
        for (int i = 0; i < background_frame_count; ++i)
            model.update(seq.frames[static_cast<size_t>(i)]);
        for (const auto& f : obs.frames)
            masks.push_back(model.update(f));
    }

    std::vector<MotionField> fields;
    std::vector<ForegroundMask> pair_masks;
    for (size_t n = 0; n + 1 < obs.frames.size(); ++n) {
        fields.push_back(block_match_pair(obs.frames[n], obs.frames[n + 1], opts.block));
        if (!masks.empty())
            pair_masks.push_back(masks[n]);
    }
    return aggregate_speed(fields, pair_masks.empty() ? nullptr : &pair_masks);
}

}  // namespace mlspeed
