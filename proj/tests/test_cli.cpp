#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

const std::string cli = MLSPEED_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "mlspeed_cli_out.txt";
    const std::string cmd = cli + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    res.output = buf.str();
    return res;
}

fs::path work_dir(const char* name) {
    fs::path dir = fs::temp_directory_path() / "mlspeed_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("help enumerates every config key with its default") {
    RunResult res = run("--help");
    CHECK(res.exit_code == 0);
    for (const char* key : {"gmm.k", "gmm.alpha", "gmm.t", "gmm.match_sigma",
                            "gmm.initial_variance", "gmm.variance_floor",
                            "template.min_area", "estimator.v_max", "estimator.mode",
                            "estimator.taper", "estimator.keep_surface",
                            "baseline.block_size", "baseline.search_range", "synth.preset",
                            "synth.sigma2", "synth.clip", "synth.wrap", "synth.v1",
                            "synth.v2", "synth.start1", "synth.start2", "bench.sigma2_grid",
                            "bench.trials", "bench.methods", "bench.videos"})
        CHECK_MESSAGE(res.output.find(key) != std::string::npos, key);
    CHECK(res.output.find("default 0.05") != std::string::npos);  // gmm.alpha
    CHECK(res.output.find("default 35") != std::string::npos);    // baseline.block_size
}

TEST_CASE("synth writes a complete sequence directory, twice identically") {
    const fs::path a = work_dir("synth_a");
    const fs::path b = work_dir("synth_b");
    RunResult res = run("--seed 1 synth " + a.string());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("RESULT frames=30") != std::string::npos);
    CHECK(fs::exists(a / "frame_0000.pgm"));
    CHECK(fs::exists(a / "frame_0029.pgm"));
    CHECK(fs::exists(a / "sequence.manifest"));
    CHECK(fs::exists(a / "ground_truth.txt"));
    CHECK(fs::exists(a / "template.pgm"));

    CHECK(run("--seed 1 synth " + b.string()).exit_code == 0);
    for (const char* f : {"frame_0000.pgm", "frame_0015.pgm", "ground_truth.txt"})
        CHECK(read_file(a / f) == read_file(b / f));
}

TEST_CASE("estimate recovers the planted speed and honors both modes") {
    const fs::path dir = work_dir("estimate");
    REQUIRE(run("--seed 1 synth " + dir.string()).exit_code == 0);

    RunResult omitted = run("--template known estimate " + dir.string());
    CHECK(omitted.exit_code == 0);
    CHECK(omitted.output.find("RESULT v1_hat=1 v2_hat=2") != std::string::npos);
    CHECK(omitted.output.find("mode=omitted") != std::string::npos);

    RunResult included = run("--template known --mode included estimate " + dir.string());
    CHECK(included.exit_code == 0);
    CHECK(included.output.find("RESULT v1_hat=1 v2_hat=2") != std::string::npos);
    CHECK(included.output.find("mode=included") != std::string::npos);

    RunResult gmm = run("estimate " + dir.string());
    CHECK(gmm.exit_code == 0);
    CHECK(gmm.output.find("RESULT v1_hat=1 v2_hat=2") != std::string::npos);
}

TEST_CASE("keep_surface emits the full objective grid") {
    const fs::path dir = work_dir("surface");
    REQUIRE(run("--seed 1 synth " + dir.string()).exit_code == 0);
    REQUIRE(run("--estimator.keep_surface on --estimator.v_max 2 estimate " + dir.string())
                .exit_code == 0);
    std::ifstream in(dir / "surface.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "v1,v2,score");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty())
            ++rows;
    CHECK(rows == 25);
}

TEST_CASE("unknown config key exits with the config code and names the key") {
    const fs::path dir = work_dir("badkey");
    std::ofstream(dir / "bad.cfg") << "gmm.bogus = 1\n";
    RunResult res = run("--config " + (dir / "bad.cfg").string() + " synth " + dir.string());
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("gmm.bogus") != std::string::npos);
}

TEST_CASE("invalid option values exit with the config code") {
    const fs::path dir = work_dir("badmode");
    REQUIRE(run("--seed 1 synth " + dir.string()).exit_code == 0);
    CHECK(run("--mode sideways estimate " + dir.string()).exit_code == 1);
    CHECK(run("--synth.preset nope synth " + dir.string()).exit_code == 1);
}

TEST_CASE("missing sequence exits with the io code") {
    CHECK(run("estimate /nonexistent_mlspeed_dir").exit_code == 2);
}

TEST_CASE("too-short observation window exits with the estimation code") {
    const fs::path dir = work_dir("short");
    // 30-frame sequence, then claim 29 background frames: one observation frame
    REQUIRE(run("--seed 1 synth " + dir.string()).exit_code == 0);
    std::ofstream(dir / "sequence.manifest")
        << "fs = 15\nbackground_frames = 29\nfiles = frame_*.pgm\n";
    RunResult res = run("--template known estimate " + dir.string());
    CHECK(res.exit_code == 3);
}

TEST_CASE("bgmodel writes the background image and per-frame masks") {
    const fs::path dir = work_dir("bgmodel_seq");
    const fs::path out = work_dir("bgmodel_out");
    REQUIRE(run("--seed 1 synth " + dir.string()).exit_code == 0);
    RunResult res = run("bgmodel " + dir.string() + " " + out.string());
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(out / "background.pgm"));
    CHECK(fs::exists(out / "mask_0000.pgm"));
    CHECK(fs::exists(out / "mask_0019.pgm"));
}

TEST_CASE("bench writes trial, summary, timing csvs and a plot script") {
    const fs::path out = work_dir("bench");
    RunResult res = run("--seed 1 --bench.sigma2_grid 0 --bench.trials 2 --bench.videos 1 "
                        "--bench.methods ml_omitted --template known bench " + out.string());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("RESULT method=ml_omitted sigma2=0 mean_rmse=0") !=
          std::string::npos);
    for (const char* f : {"trials.csv", "summary.csv", "timing.csv", "plot.gp"})
        CHECK(fs::exists(out / f));
    // noiseless ML on the desk suite recovers exactly: 2 trials, 0 failures
    CHECK(read_file(out / "summary.csv").find("ml_omitted,0,0,2,0") != std::string::npos);
}

TEST_CASE("compare reports both estimators on one sequence") {
    const fs::path dir = work_dir("compare");
    REQUIRE(run("--seed 1 synth " + dir.string()).exit_code == 0);
    RunResult res = run("--template known --baseline.block_size 12 --baseline.search_range 4 "
                        "compare " + dir.string());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("RESULT v1_hat=1 v2_hat=2") != std::string::npos);
    CHECK(res.output.find("RESULT method=block_matching") != std::string::npos);
}
