#include "mlspeed/eval.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>
#include <stdexcept>

#include "mlspeed/ingest.hpp"

namespace mlspeed {

std::string method_name(Method m) {
    switch (m) {
        case Method::ml_included: return "ml_included";
        case Method::ml_omitted: return "ml_omitted";
        case Method::block_matching: return "block_matching";
    }
    throw std::logic_error("method_name: bad enum");
}

Method method_from_name(const std::string& name) {
    if (name == "ml_included") return Method::ml_included;
    if (name == "ml_omitted") return Method::ml_omitted;
    if (name == "block_matching") return Method::block_matching;
    throw std::invalid_argument("unknown method: " + name);
}

RmseResult normalized_rmse(const std::vector<SpeedVector>& estimates,
                           const SpeedVector& truth) {
    if (estimates.empty())
        throw std::invalid_argument("normalized_rmse: no estimates");
    RmseResult res;
    const double truth_norm = std::hypot(truth.v1, truth.v2);
    res.absolute_fallback = truth.v1 == 0.0 && truth.v2 == 0.0;

    double acc = 0.0;
    for (const auto& est : estimates) {
        const double e1 = est.v1 - truth.v1;
        const double e2 = est.v2 - truth.v2;
        if (res.absolute_fallback) {
            acc += e1 * e1 + e2 * e2;
        } else {
            const double d1 = truth.v1 != 0.0 ? std::abs(truth.v1) : truth_norm;
            const double d2 = truth.v2 != 0.0 ? std::abs(truth.v2) : truth_norm;
            acc += (e1 / d1) * (e1 / d1) + (e2 / d2) * (e2 / d2);
        }
    }
    res.value = std::sqrt(acc / (2.0 * static_cast<double>(estimates.size())));
    return res;
}

SweepReport noise_sweep(const std::vector<SynthConfig>& videos,
                        const std::vector<double>& sigma2_grid, int trials_per_point,
                        const std::vector<Method>& methods, const PipelineOptions& base_opts,
                        RngSeed seed_base) {
    if (trials_per_point < 1)
        throw std::invalid_argument("noise_sweep: trials_per_point must be >= 1");

    SweepReport report;
    for (size_t vid = 0; vid < videos.size(); ++vid) {
        for (double sigma2 : sigma2_grid) {
            for (int trial = 0; trial < trials_per_point; ++trial) {
                SynthConfig cfg = videos[vid];
                cfg.sigma2 = sigma2;
                cfg.seed = seed_base + static_cast<RngSeed>(trial);
                auto [seq, truth] = generate(cfg);

                for (Method method : methods) {
                    TrialRecord rec;
                    rec.video = static_cast<int>(vid);
                    rec.trial = trial;
                    rec.method = method;
                    rec.sigma2 = sigma2;
                    rec.seed = cfg.seed;
                    rec.v_true = truth.v_true;
                    try {
                        PipelineOptions opts = base_opts;
                        if (method == Method::block_matching) {
                            rec.estimate =
                                run_block_matching(seq, cfg.background_frames, opts);
                        } else {
                            opts.mode = method == Method::ml_included
                                            ? BackgroundMode::included
                                            : BackgroundMode::omitted;
                            if (opts.template_source == TemplateSource::known)
                                opts.known_template = truth.template_at_origin;
                            rec.estimate =
                                run_ml_pipeline(seq, cfg.background_frames, opts)
                                    .estimate.speed;
                        }
                        rec.normalized_error =
                            normalized_rmse({rec.estimate}, rec.v_true).value;
                    } catch (const std::exception& e) {
                        rec.failed = true;
                        rec.failure_reason = e.what();
                    }
                    report.trials.push_back(std::move(rec));
                }
            }
        }
    }

    // per (method, sigma2, video): RMSE over the noise realizations;
    // then arithmetic mean across videos
    std::map<std::tuple<std::string, double, int>,
             std::pair<std::vector<SpeedVector>, SpeedVector>> per_video;
    std::map<std::pair<std::string, double>, SweepCell> cells;
    for (const auto& rec : report.trials) {
        auto& cell = cells[{method_name(rec.method), rec.sigma2}];
        cell.method = rec.method;
        cell.sigma2 = rec.sigma2;
        if (rec.failed) {
            ++cell.n_failed;
        } else {
            ++cell.n_trials;
            auto& bucket = per_video[{method_name(rec.method), rec.sigma2, rec.video}];
            bucket.first.push_back(rec.estimate);
            bucket.second = rec.v_true;
        }
    }
    std::map<std::pair<std::string, double>, std::pair<double, int>> sums;
    for (const auto& [key, bucket] : per_video) {
        auto& s = sums[{std::get<0>(key), std::get<1>(key)}];
        s.first += normalized_rmse(bucket.first, bucket.second).value;
        ++s.second;
    }
    for (auto& [key, cell] : cells) {
        if (auto it = sums.find(key); it != sums.end() && it->second.second > 0)
            cell.mean_rmse = it->second.first / it->second.second;
        report.summary.push_back(cell);
    }
    return report;
}

void write_trials_csv(const std::filesystem::path& path, const SweepReport& report) {
    std::vector<CsvRow> rows;
    for (const auto& r : report.trials)
        rows.push_back({method_name(r.method), r.sigma2, (long long)r.video,
                        (long long)r.trial, r.estimate.v1, r.estimate.v2, r.v_true.v1,
                        r.v_true.v2, r.normalized_error, (long long)(r.failed ? 1 : 0)});
    write_csv(path,
              {"method", "sigma2", "video", "trial", "v1_hat", "v2_hat", "v1_true",
               "v2_true", "norm_err", "failed"},
              rows);
}

void write_summary_csv(const std::filesystem::path& path, const SweepReport& report) {
    std::vector<CsvRow> rows;
    for (const auto& c : report.summary)
        rows.push_back({method_name(c.method), c.sigma2, c.mean_rmse,
                        (long long)c.n_trials, (long long)c.n_failed});
    write_csv(path, {"method", "sigma2", "mean_rmse", "n_trials", "n_failed"}, rows);
}

void write_gnuplot_script(const std::filesystem::path& path,
                          const std::filesystem::path& summary_csv) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error(path.string() + ": cannot write");
    out << "set datafile separator ','\n";
    out << "set xlabel 'noise variance'\n";
    out << "set ylabel 'mean normalized RMSE'\n";
    out << "set key top left\n";
    out << "plot ";
    const char* methods[] = {"ml_included", "ml_omitted", "block_matching"};
    for (int i = 0; i < 3; ++i) {
        if (i)
            out << ", \\\n     ";
        out << "'< grep " << methods[i] << " " << summary_csv.string()
            << "' using 2:3 with linespoints title '" << methods[i] << "'";
    }
    out << "\n";
}

TimingReport timing_report(const SynthConfig& cfg, const PipelineOptions& opts) {
    using clock_type = std::chrono::steady_clock;
    TimingReport rep;

    auto [seq, truth] = generate(cfg);
    PipelineOptions ml_opts = opts;
    ml_opts.template_source = TemplateSource::known;
    ml_opts.known_template = truth.template_at_origin;
    auto pipeline_run = run_ml_pipeline(seq, cfg.background_frames, ml_opts);
    rep.pipeline = pipeline_run.times;

    FrameSequence obs;
    obs.sample_time = seq.sample_time;
    obs.frames.assign(seq.frames.begin() + cfg.background_frames, seq.frames.end());
    EstimatorContext ctx = build_context(obs, std::nullopt, truth.template_at_origin);
    SpeedGrid grid{opts.v_max};

    auto t0 = clock_type::now();
    double direct_sum = 0.0;
    for (const auto& [v1, v2] : grid.hypotheses())
        direct_sum += objective_direct(ctx, v1, v2);
    rep.direct_ms = std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();

    t0 = clock_type::now();
    auto surface = objective_surface_fast(ctx, grid);
    rep.fast_ms = std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
    // keep the results alive so neither loop can be optimized out
    if (!std::isfinite(direct_sum + surface.scores.front()))
        throw std::runtime_error("timing_report: non-finite objective");

    rep.speedup = rep.fast_ms > 0.0 ? rep.direct_ms / rep.fast_ms : 0.0;
    return rep;
}

}  // namespace mlspeed
