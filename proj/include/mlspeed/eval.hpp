#pragma once

#include <filesystem>
#include <string>

#include "mlspeed/pipeline.hpp"

namespace mlspeed {

enum class Method { ml_included, ml_omitted, block_matching };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct TrialRecord {
    int video = 0;
    int trial = 0;
    Method method = Method::ml_omitted;
    double sigma2 = 0.0;
    RngSeed seed = 0;
    SpeedVector estimate;
    SpeedVector v_true;
    double normalized_error = 0.0;
    bool failed = false;
    std::string failure_reason;
};

struct SweepCell {
    Method method;
    double sigma2 = 0.0;
    double mean_rmse = 0.0;
    int n_trials = 0;
    int n_failed = 0;
};

struct SweepReport {
    std::vector<TrialRecord> trials;
    std::vector<SweepCell> summary;  // per (method, sigma2)
};

struct RmseResult {
    double value = 0.0;
    bool absolute_fallback = false;  // truth was (0,0)
};

// sqrt(mean over trials and components of ((vhat_i - v_i)/d_i)^2) with
// d_i = |v_i|, or |v_true|_2 for a zero component. Truth (0,0) falls back
// to absolute RMSE, flagged.
RmseResult normalized_rmse(const std::vector<SpeedVector>& estimates,
                           const SpeedVector& truth);

// Full Monte-Carlo protocol: per (video, sigma2, trial, method) regenerate
// the noise with a per-trial seed, run the pipeline, aggregate.
SweepReport noise_sweep(const std::vector<SynthConfig>& videos,
                        const std::vector<double>& sigma2_grid, int trials_per_point,
                        const std::vector<Method>& methods, const PipelineOptions& base_opts,
                        RngSeed seed_base);

void write_trials_csv(const std::filesystem::path& path, const SweepReport& report);
void write_summary_csv(const std::filesystem::path& path, const SweepReport& report);
void write_gnuplot_script(const std::filesystem::path& path,
                          const std::filesystem::path& summary_csv);

struct TimingReport {
    StageTimes pipeline;          // one reference ML run
    double direct_ms = 0.0;       // full-grid direct evaluation
    double fast_ms = 0.0;         // correlation-stack surface
    double speedup = 0.0;
};

// Measures direct vs fast objective evaluation on one reference instance.
TimingReport timing_report(const SynthConfig& cfg, const PipelineOptions& opts);

}  // namespace mlspeed
