// Command-line front end: synth | estimate | bgmodel | bench | compare.
// Exit codes: 0 ok, 1 config error, 2 I/O error, 3 estimation failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>

#include "mlspeed/config.hpp"
#include "mlspeed/eval.hpp"
#include "mlspeed/ingest.hpp"
#include "mlspeed/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mlspeed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitEstimation = 3;

struct CommonFlags {
    std::string config_path;
    RngSeed seed = 1;
    int threads = 0;
    std::string template_source = "gmm";
    std::string mode;
    std::map<std::string, std::string> overrides;
};

Config make_config(const CommonFlags& flags) {
    Config cfg;
    if (!flags.config_path.empty())
        cfg.load_file(flags.config_path);
    for (const auto& [key, value] : flags.overrides)
        cfg.set(key, value);
    if (!flags.mode.empty())
        cfg.set("estimator.mode", flags.mode);
    if (flags.threads > 0)
        set_max_threads(flags.threads);
    return cfg;
}

GmmParams gmm_params(const Config& cfg) {
    GmmParams p;
    p.k = cfg.get_int("gmm.k");
    p.alpha = cfg.get_double("gmm.alpha");
    p.background_threshold = cfg.get_double("gmm.t");
    p.match_sigma = cfg.get_double("gmm.match_sigma");
    p.initial_variance = cfg.get_double("gmm.initial_variance");
    p.variance_floor = cfg.get_double("gmm.variance_floor");
    return p;
}

PipelineOptions pipeline_options(const Config& cfg, const CommonFlags& flags) {
    PipelineOptions opts;
    const std::string mode = cfg.get("estimator.mode");
    if (mode == "included")
        opts.mode = BackgroundMode::included;
    else if (mode == "omitted")
        opts.mode = BackgroundMode::omitted;
    else
        throw std::invalid_argument("estimator.mode must be included or omitted");
    if (flags.template_source == "known")
        opts.template_source = TemplateSource::known;
    else if (flags.template_source == "gmm")
        opts.template_source = TemplateSource::gmm;
    else
        throw std::invalid_argument("--template must be known or gmm");
    opts.gmm = gmm_params(cfg);
    opts.template_min_area = cfg.get_int("template.min_area");
    opts.v_max = cfg.get_int("estimator.v_max");
    opts.taper = cfg.get_bool("estimator.taper");
    opts.block.block_size = cfg.get_int("baseline.block_size");
    opts.block.search_range = cfg.get_int("baseline.search_range");
    return opts;
}

SynthConfig synth_config(const Config& cfg, const CommonFlags& flags) {
    const std::string preset = cfg.get("synth.preset");
    SynthConfig sc;
    if (preset == "desk") {
        sc = desk_preset();
    } else if (preset == "fullscale") {
        sc = fullscale_preset();
        sc.background = desk_background(361, 616);
        auto [sprite, mask] = desk_sprite(35);
        sc.sprite = std::move(sprite);
        sc.sprite_mask = std::move(mask);
    } else {
        throw std::invalid_argument("synth.preset must be desk or fullscale");
    }
    sc.v_true = {cfg.get_double("synth.v1"), cfg.get_double("synth.v2")};
    sc.sigma2 = cfg.get_double("synth.sigma2");
    sc.clip = cfg.get_bool("synth.clip");
    const std::string wrap_mode = cfg.get("synth.wrap");
    if (wrap_mode == "circular")
        sc.wrap_mode = WrapMode::circular;
    else if (wrap_mode == "clipped")
        sc.wrap_mode = WrapMode::clipped;
    else
        throw std::invalid_argument("synth.wrap must be circular or clipped");
    if (cfg.get_int("synth.start1") >= 0)
        sc.start_position.m1 = cfg.get_int("synth.start1");
    if (cfg.get_int("synth.start2") >= 0)
        sc.start_position.m2 = cfg.get_int("synth.start2");
    sc.seed = flags.seed;
    return sc;
}

// Desk-suite videos for bench: same scene, different true speeds.
std::vector<SynthConfig> desk_suite(int count, RngSeed seed) {
    static const std::pair<int, int> speeds[] = {{2, 1},  {-1, 2}, {1, 1},
                                                 {3, -2}, {-2, -1}, {0, 2}};
    std::vector<SynthConfig> videos;
    for (int i = 0; i < count; ++i) {
        SynthConfig sc = desk_preset();
        const auto& [v1, v2] = speeds[i % std::size(speeds)];
        sc.v_true = {double(v1), double(v2)};
        sc.seed = seed;
        videos.push_back(std::move(sc));
    }
    return videos;
}

Template load_known_template(const fs::path& dir) {
    Frame image = load_frame(dir / "template.pgm");
    Frame mask_frame = load_frame(dir / "template_mask.pgm");
    Template t;
    t.image = std::move(image);
    t.support = ForegroundMask(t.image.height(), t.image.width());
    for (size_t i = 0; i < t.image.size(); ++i) {
        t.support.data[i] = mask_frame.data()[i] > 0.5 ? 1 : 0;
        if (!t.support.data[i])
            t.image.data()[i] = 0.0;
    }
    t.spectrum = dft2(t.image);
    return t;
}

void print_estimate(const EstimationResult& res) {
    std::cout << "estimated speed: v1 = " << res.speed.v1 << ", v2 = " << res.speed.v2
              << " pixel/frame\n";
    std::cout << "objective score: " << res.score << "\n";
    std::cout << "background mode: "
              << (res.mode == BackgroundMode::included ? "included" : "omitted") << "\n";
    if (res.degenerate_flat)
        std::cout << "warning: objective surface is degenerate (flat); the estimate is a tie-break\n";
    std::cout << "RESULT v1_hat=" << std::lround(res.speed.v1)
              << " v2_hat=" << std::lround(res.speed.v2) << " score=" << res.score
              << " mode=" << (res.mode == BackgroundMode::included ? "included" : "omitted")
              << " degenerate_flat=" << (res.degenerate_flat ? 1 : 0) << "\n";
}

int cmd_synth(const CommonFlags& flags, const std::string& output_dir) {
    Config cfg = make_config(flags);
    SynthConfig sc = synth_config(cfg, flags);
    auto [seq, truth] = generate(sc);
    write_sequence(output_dir, seq, sc, truth);
    std::cout << "wrote " << seq.frames.size() << " frames to " << output_dir << "\n";
    std::cout << "RESULT frames=" << seq.frames.size()
              << " background_frames=" << sc.background_frames
              << " v1_true=" << std::lround(sc.v_true.v1)
              << " v2_true=" << std::lround(sc.v_true.v2) << "\n";
    return kExitOk;
}

int cmd_estimate(const CommonFlags& flags, const std::string& sequence_dir) {
    Config cfg = make_config(flags);
    PipelineOptions opts = pipeline_options(cfg, flags);
    SequenceManifest manifest = read_manifest(fs::path(sequence_dir) / "sequence.manifest");
    FrameSequence seq = load_sequence(manifest);
    if (opts.template_source == TemplateSource::known)
        opts.known_template = load_known_template(sequence_dir);

    PipelineResult res = run_ml_pipeline(seq, manifest.background_frame_count, opts);
    print_estimate(res.estimate);

    if (cfg.get_bool("estimator.keep_surface")) {
        std::vector<CsvRow> rows;
        for (size_t i = 0; i < res.estimate.surface.speeds.size(); ++i)
            rows.push_back({(long long)res.estimate.surface.speeds[i].first,
                            (long long)res.estimate.surface.speeds[i].second,
                            res.estimate.surface.scores[i]});
        write_csv(fs::path(sequence_dir) / "surface.csv", {"v1", "v2", "score"}, rows);
    }
    return kExitOk;
}

int cmd_bgmodel(const CommonFlags& flags, const std::string& sequence_dir,
                const std::string& output_dir) {
    Config cfg = make_config(flags);
    SequenceManifest manifest = read_manifest(fs::path(sequence_dir) / "sequence.manifest");
    FrameSequence seq = load_sequence(manifest);
    if (manifest.background_frame_count < 1)
        throw std::invalid_argument("bgmodel: manifest has no background frames");

    GmmModel model(seq.frames.front().height(), seq.frames.front().width(),
                   gmm_params(cfg));
    for (int i = 0; i < manifest.background_frame_count; ++i)
        model.update(seq.frames[static_cast<size_t>(i)]);

    fs::create_directories(output_dir);
    save_frame(model.estimate_background(), fs::path(output_dir) / "background.pgm");
    char name[32];
    for (size_t i = static_cast<size_t>(manifest.background_frame_count);
         i < seq.frames.size(); ++i) {
        auto mask = model.update(seq.frames[i]);
        Frame mf(mask.height, mask.width);
        for (size_t px = 0; px < mf.size(); ++px)
            mf.data()[px] = mask.data[px] ? 1.0 : 0.0;
        std::snprintf(name, sizeof(name), "mask_%04zu.pgm",
                      i - static_cast<size_t>(manifest.background_frame_count));
        save_frame(mf, fs::path(output_dir) / name);
    }
    std::cout << "RESULT background=" << (fs::path(output_dir) / "background.pgm").string()
              << " masks=" << seq.frames.size() - static_cast<size_t>(manifest.background_frame_count)
              << "\n";
    return kExitOk;
}

int cmd_bench(const CommonFlags& flags, const std::string& output_dir) {
    Config cfg = make_config(flags);
    PipelineOptions opts = pipeline_options(cfg, flags);

    std::vector<Method> methods;
    for (const auto& name : cfg.get_list("bench.methods"))
        methods.push_back(method_from_name(name));
    const auto grid = cfg.get_double_list("bench.sigma2_grid");
    const int trials = cfg.get_int("bench.trials");
    auto videos = desk_suite(cfg.get_int("bench.videos"), flags.seed);

    SweepReport report = noise_sweep(videos, grid, trials, methods, opts, flags.seed);

    fs::create_directories(output_dir);
    write_trials_csv(fs::path(output_dir) / "trials.csv", report);
    write_summary_csv(fs::path(output_dir) / "summary.csv", report);
    write_gnuplot_script(fs::path(output_dir) / "plot.gp",
                         fs::path(output_dir) / "summary.csv");

    TimingReport timing = timing_report(videos.front(), opts);
    write_csv(fs::path(output_dir) / "timing.csv",
              {"stage", "milliseconds"},
              {{std::string("gmm"), timing.pipeline.gmm_ms},
               {std::string("fft"), timing.pipeline.fft_ms},
               {std::string("search"), timing.pipeline.search_ms},
               {std::string("direct_grid"), timing.direct_ms},
               {std::string("fast_grid"), timing.fast_ms},
               {std::string("speedup_ratio"), timing.speedup}});

    for (const auto& cell : report.summary)
        std::cout << "RESULT method=" << method_name(cell.method)
                  << " sigma2=" << cell.sigma2 << " mean_rmse=" << cell.mean_rmse
                  << " n_trials=" << cell.n_trials << " n_failed=" << cell.n_failed << "\n";
    return kExitOk;
}

int cmd_compare(const CommonFlags& flags, const std::string& sequence_dir) {
    Config cfg = make_config(flags);
    PipelineOptions opts = pipeline_options(cfg, flags);
    SequenceManifest manifest = read_manifest(fs::path(sequence_dir) / "sequence.manifest");
    FrameSequence seq = load_sequence(manifest);
    if (opts.template_source == TemplateSource::known)
        opts.known_template = load_known_template(sequence_dir);

    PipelineResult ml = run_ml_pipeline(seq, manifest.background_frame_count, opts);
    std::cout << "ML estimator:\n";
    print_estimate(ml.estimate);

    SpeedVector bm = run_block_matching(seq, manifest.background_frame_count, opts);
    std::cout << "block matching:\n";
    std::cout << "RESULT method=block_matching v1_hat=" << std::lround(bm.v1)
              << " v2_hat=" << std::lround(bm.v2) << "\n";
    return kExitOk;
}

std::string config_help() {
    std::string help = "\nConfig keys (config file or --KEY VALUE overrides):\n";
    for (const auto& k : Config::registry()) {
        help += "  " + k.key + " (default " + k.default_value + "): " + k.description + "\n";
    }
    return help;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-domain maximum-likelihood speed estimation of a foreground "
                 "object in video frame sequences"};
    app.footer(config_help());
    app.require_subcommand(1);

    CommonFlags flags;
    app.add_option("--config", flags.config_path, "plain-text key = value config file");
    app.add_option("--seed", flags.seed, "base RNG seed");
    app.add_option("--threads", flags.threads, "worker thread cap");
    app.add_option("--template", flags.template_source,
                   "template source: known (ground-truth sidecar) or gmm (extracted)");
    app.add_option("--mode", flags.mode, "background mode: included or omitted");
    for (const auto& k : Config::registry())
        app.add_option_function<std::string>(
            "--" + k.key,
            [&flags, key = k.key](const std::string& v) { flags.overrides[key] = v; },
            k.description);

    std::string output_dir, sequence_dir;
    auto* synth_cmd = app.add_subcommand("synth", "generate a ground-truth synthetic sequence");
    synth_cmd->add_option("output_dir", output_dir, "destination directory")->required();
    auto* estimate_cmd = app.add_subcommand("estimate", "estimate the speed of one sequence");
    estimate_cmd->add_option("sequence_dir", sequence_dir, "sequence directory")->required();
    auto* bgmodel_cmd = app.add_subcommand("bgmodel", "dump estimated background and masks");
    bgmodel_cmd->add_option("sequence_dir", sequence_dir, "sequence directory")->required();
    bgmodel_cmd->add_option("output_dir", output_dir, "destination directory")->required();
    auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo noise sweep with CSV reports");
    bench_cmd->add_option("output_dir", output_dir, "destination directory")->required();
    auto* compare_cmd = app.add_subcommand("compare", "ML vs block matching on one sequence");
    compare_cmd->add_option("sequence_dir", sequence_dir, "sequence directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (synth_cmd->parsed())
            return cmd_synth(flags, output_dir);
        if (estimate_cmd->parsed())
            return cmd_estimate(flags, sequence_dir);
        if (bgmodel_cmd->parsed())
            return cmd_bgmodel(flags, sequence_dir, output_dir);
        if (bench_cmd->parsed())
            return cmd_bench(flags, output_dir);
        if (compare_cmd->parsed())
            return cmd_compare(flags, sequence_dir);
    } catch (const EstimationError& e) {
        std::cerr << "estimation failure: " << e.what() << "\n";
        return kExitEstimation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitConfig;
}
