#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlspeed/eval.hpp"

using namespace mlspeed;
namespace fs = std::filesystem;

TEST_CASE("method names round-trip") {
    for (Method m : {Method::ml_included, Method::ml_omitted, Method::block_matching})
        CHECK(method_from_name(method_name(m)) == m);
    CHECK_THROWS_AS(method_from_name("nope"), std::invalid_argument);
}

TEST_CASE("normalized rmse worked examples") {
    CHECK(normalized_rmse({{2.0, 2.0}}, {2.0, 2.0}).value == 0.0);
    // truth (2,2), estimate (3,2): sqrt(((1/2)^2 + 0)/2)
    CHECK(normalized_rmse({{3.0, 2.0}}, {2.0, 2.0}).value ==
          doctest::Approx(0.35355339).epsilon(1e-6));
    // zero-component fallback: truth (3,0), estimate (3,3), d2 = |v|_2 = 3
    CHECK(normalized_rmse({{3.0, 3.0}}, {3.0, 0.0}).value ==
          doctest::Approx(0.70710678).epsilon(1e-6));
    // truth (0,0): absolute RMSE, flagged
    RmseResult r = normalized_rmse({{1.0, 1.0}}, {0.0, 0.0});
    CHECK(r.absolute_fallback);
    CHECK(r.value == doctest::Approx(1.0));
    CHECK_THROWS_AS(normalized_rmse({}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("rmse aggregates over trials and components") {
    // two trials, truth (2,2): errors (1,0) and (0,2)
    // mean of squares: ((1/2)^2 + 0 + 0 + (2/2)^2)/4
    const double want = std::sqrt((0.25 + 1.0) / 4.0);
    CHECK(normalized_rmse({{3.0, 2.0}, {2.0, 4.0}}, {2.0, 2.0}).value ==
          doctest::Approx(want).epsilon(1e-9));
}

namespace {

std::vector<SynthConfig> small_suite() {
    SynthConfig a = desk_preset();
    a.total_frames = 16;
    a.background_frames = 6;
    SynthConfig b = a;
    b.v_true = {2.0, -1.0};
    return {a, b};
}

PipelineOptions small_opts() {
    PipelineOptions opts;
    opts.template_source = TemplateSource::known;
    opts.v_max = 4;
    opts.block = {12, 4};
    return opts;
}

}  // namespace

TEST_CASE("noiseless sweep gives zero rmse for ML and full bookkeeping") {
    auto report = noise_sweep(small_suite(), {0.0}, 3,
                              {Method::ml_omitted, Method::ml_included}, small_opts(), 9);
    // 2 videos x 1 sigma2 x 3 trials x 2 methods
    CHECK(report.trials.size() == 12);
    for (const auto& rec : report.trials) {
        CHECK_FALSE(rec.failed);
        CHECK(rec.normalized_error == 0.0);
    }
    REQUIRE(report.summary.size() == 2);
    for (const auto& cell : report.summary) {
        CHECK(cell.mean_rmse == 0.0);
        CHECK(cell.n_trials == 6);
        CHECK(cell.n_failed == 0);
    }
}

TEST_CASE("single trial, single video: summary equals the trial rmse") {
    auto suite = small_suite();
    suite.resize(1);
    auto report = noise_sweep(suite, {0.05}, 1, {Method::ml_omitted}, small_opts(), 4);
    REQUIRE(report.trials.size() == 1);
    REQUIRE(report.summary.size() == 1);
    if (!report.trials[0].failed)
        CHECK(report.summary[0].mean_rmse ==
              doctest::Approx(report.trials[0].normalized_error));
}

TEST_CASE("sweep is deterministic for a fixed seed") {
    auto a = noise_sweep(small_suite(), {0.02}, 2, {Method::ml_omitted}, small_opts(), 5);
    auto b = noise_sweep(small_suite(), {0.02}, 2, {Method::ml_omitted}, small_opts(), 5);
    REQUIRE(a.trials.size() == b.trials.size());
    for (size_t i = 0; i < a.trials.size(); ++i) {
        CHECK(a.trials[i].estimate == b.trials[i].estimate);
        CHECK(a.trials[i].seed == b.trials[i].seed);
    }
}

TEST_CASE("csv outputs carry the documented columns") {
    auto suite = small_suite();
    suite.resize(1);
    auto report = noise_sweep(suite, {0.0}, 1, {Method::ml_omitted}, small_opts(), 2);

    const fs::path dir = fs::temp_directory_path() / "mlspeed_eval_csv";
    fs::create_directories(dir);
    write_trials_csv(dir / "trials.csv", report);
    write_summary_csv(dir / "summary.csv", report);
    write_gnuplot_script(dir / "plot.gp", dir / "summary.csv");

    std::ifstream trials(dir / "trials.csv");
    std::string header;
    std::getline(trials, header);
    CHECK(header == "method,sigma2,video,trial,v1_hat,v2_hat,v1_true,v2_true,norm_err,failed");
    std::string row;
    std::getline(trials, row);
    CHECK(row.rfind("ml_omitted,0,", 0) == 0);

    std::ifstream summary(dir / "summary.csv");
    std::getline(summary, header);
    CHECK(header == "method,sigma2,mean_rmse,n_trials,n_failed");

    std::ifstream plot(dir / "plot.gp");
    std::stringstream buf;
    buf << plot.rdbuf();
    CHECK(buf.str().find("ml_omitted") != std::string::npos);
}

TEST_CASE("pipeline failures are counted, not fatal") {
    // a window of one observation frame cannot be estimated
    auto suite = small_suite();
    suite.resize(1);
    suite[0].total_frames = suite[0].background_frames + 1;
    auto report = noise_sweep(suite, {0.0}, 2, {Method::ml_omitted}, small_opts(), 1);
    REQUIRE(report.summary.size() == 1);
    CHECK(report.summary[0].n_failed == 2);
    CHECK(report.summary[0].n_trials == 0);
    for (const auto& rec : report.trials) {
        CHECK(rec.failed);
        CHECK_FALSE(rec.failure_reason.empty());
    }
}

TEST_CASE("timing report measures both objective paths") {
    SynthConfig cfg = desk_preset();
    cfg.total_frames = 14;
    cfg.background_frames = 4;
    PipelineOptions opts = small_opts();
    TimingReport rep = timing_report(cfg, opts);
    CHECK(rep.direct_ms > 0.0);
    CHECK(rep.fast_ms > 0.0);
    CHECK(rep.speedup == doctest::Approx(rep.direct_ms / rep.fast_ms));
}
