#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "mlspeed/ingest.hpp"
#include "mlspeed/synth.hpp"

using namespace mlspeed;
namespace fs = std::filesystem;

TEST_CASE("desk preset renders the sprite at start + v*n") {
    SynthConfig cfg = desk_preset();
    auto [seq, truth] = generate(cfg);
    REQUIRE(int(seq.frames.size()) == cfg.total_frames);
    REQUIRE(int(truth.positions.size()) == cfg.total_frames - cfg.background_frames);
    CHECK(seq.sample_time == doctest::Approx(1.0 / 15.0));

    // background frames contain no sprite
    for (int i = 0; i < cfg.background_frames; ++i)
        CHECK(seq.frames[size_t(i)] == cfg.background);

    for (size_t n = 0; n < truth.positions.size(); ++n) {
        const PixelIndex want =
            wrap(cfg.start_position.m1 + 1 * long(n), cfg.start_position.m2 + 2 * long(n),
                 64, 64);
        CHECK(truth.positions[n] == want);
        // sprite corner pixel lands where the trajectory says
        const Frame& f = seq.frames[size_t(cfg.background_frames) + n];
        CHECK(f.at(want.m1, want.m2) == cfg.sprite.at(0, 0));
    }
}

TEST_CASE("circular wrap keeps every sprite pixel; clipped mode loses them") {
    SynthConfig cfg = desk_preset();
    cfg.start_position = {58, 58};  // sprite straddles the border immediately
    cfg.v_true = {2.0, 2.0};
    cfg.total_frames = 12;

    auto [seq_c, truth_c] = generate(cfg);
    double sprite_sum = 0.0;
    for (size_t i = 0; i < cfg.sprite.size(); ++i)
        sprite_sum += cfg.sprite.data()[i];
    // circular: frame sum = background outside support + full sprite mass
    const Frame& fc = seq_c.frames[size_t(cfg.background_frames)];
    double covered = 0.0;
    const auto& supp = truth_c.template_at_origin.support;
    for (int m1 = 0; m1 < 64; ++m1)
        for (int m2 = 0; m2 < 64; ++m2)
            if (supp.at(m1, m2))
                covered += cfg.background.at(m1, m2);
    double fsum = 0.0, bsum = 0.0;
    for (size_t i = 0; i < fc.size(); ++i) {
        fsum += fc.data()[i];
        bsum += cfg.background.data()[i];
    }
    CHECK(fsum == doctest::Approx(bsum - covered + sprite_sum));

    cfg.wrap_mode = WrapMode::clipped;
    auto [seq_k, truth_k] = generate(cfg);
    CHECK(truth_k.template_at_origin.support.count() < cfg.sprite_mask.count());
}

TEST_CASE("noise is deterministic per seed and differs across frames") {
    SynthConfig cfg = desk_preset();
    cfg.sigma2 = 0.01;
    cfg.clip = false;
    cfg.seed = 42;
    auto [a, ta] = generate(cfg);
    auto [b, tb] = generate(cfg);
    CHECK(a.frames == b.frames);

    cfg.seed = 43;
    auto [c, tc] = generate(cfg);
    CHECK(a.frames[0] != c.frames[0]);

    // per-frame substreams: noise fields of two frames differ
    Frame n0 = a.frames[0], n1 = a.frames[1];
    bool differ = false;
    for (size_t i = 0; i < n0.size() && !differ; ++i)
        differ = std::abs((n0.data()[i] - cfg.background.data()[i]) -
                          (n1.data()[i] - cfg.background.data()[i])) > 1e-15;
    CHECK(differ);
}

TEST_CASE("clip limits noisy values to [0,1]") {
    SynthConfig cfg = desk_preset();
    cfg.sigma2 = 0.5;
    cfg.seed = 5;
    auto [seq, truth] = generate(cfg);
    for (const auto& f : seq.frames)
        for (size_t i = 0; i < f.size(); ++i) {
            CHECK(f.data()[i] >= 0.0);
            CHECK(f.data()[i] <= 1.0);
        }
    cfg.clip = false;
    auto [seq2, truth2] = generate(cfg);
    bool out_of_range = false;
    for (const auto& f : seq2.frames)
        for (size_t i = 0; i < f.size() && !out_of_range; ++i)
            out_of_range = f.data()[i] < 0.0 || f.data()[i] > 1.0;
    CHECK(out_of_range);
}

TEST_CASE("template at origin equals the first observation frame minus background") {
    SynthConfig cfg = desk_preset();
    auto [seq, truth] = generate(cfg);
    const Frame& first_obs = seq.frames[size_t(cfg.background_frames)];
    const auto& t = truth.template_at_origin;
    CHECK(t.support.count() == cfg.sprite_mask.count());
    for (int m1 = 0; m1 < 64; ++m1)
        for (int m2 = 0; m2 < 64; ++m2) {
            if (t.support.at(m1, m2))
                CHECK(t.image.at(m1, m2) == first_obs.at(m1, m2));
            else
                CHECK(t.image.at(m1, m2) == 0.0);
        }
}

TEST_CASE("config validation") {
    SynthConfig cfg = desk_preset();
    cfg.background_frames = cfg.total_frames;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    cfg = desk_preset();
    cfg.sigma2 = -1.0;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    cfg = desk_preset();
    cfg.sprite = Frame(65, 65, 1.0);
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
}

TEST_CASE("write_sequence round-trips frames, manifest and sidecar") {
    const fs::path dir = fs::temp_directory_path() / "mlspeed_synth_rt";
    fs::remove_all(dir);

    SynthConfig cfg = desk_preset();
    cfg.total_frames = 8;
    cfg.background_frames = 3;
    cfg.sigma2 = 0.01;
    cfg.seed = 77;
    auto [seq, truth] = generate(cfg);
    write_sequence(dir, seq, cfg, truth);

    SequenceManifest m = read_manifest(dir / "sequence.manifest");
    CHECK(m.background_frame_count == 3);
    CHECK(m.frame_rate == doctest::Approx(15.0));
    FrameSequence loaded = load_sequence(m);
    REQUIRE(loaded.frames.size() == 8);
    for (size_t i = 0; i < loaded.frames.size(); ++i)
        for (size_t px = 0; px < loaded.frames[i].size(); ++px)
            CHECK(std::abs(loaded.frames[i].data()[px] - seq.frames[i].data()[px]) <=
                  0.5 / 255.0 + 1e-12);

    GroundTruthSidecar side = read_sidecar(dir);
    CHECK(side.v_true == cfg.v_true);
    CHECK(side.start == cfg.start_position);
    CHECK(side.sigma2 == doctest::Approx(0.01));
    CHECK(side.seed == 77);
    CHECK(side.wrap_mode == WrapMode::circular);

    // exact template sidecar: 16-bit quantization only
    Frame tmpl = load_frame(dir / "template.pgm");
    for (size_t i = 0; i < tmpl.size(); ++i)
        CHECK(std::abs(tmpl.data()[i] - truth.template_at_origin.image.data()[i]) <=
              0.5 / 65535.0 + 1e-12);
}

TEST_CASE("full-scale preset carries the documented geometry") {
    SynthConfig cfg = fullscale_preset();
    CHECK(cfg.background.height() == 361);
    CHECK(cfg.background.width() == 616);
    CHECK(cfg.total_frames == 85);
    CHECK(cfg.background_frames == 40);
    CHECK(cfg.frame_rate == doctest::Approx(15.0));
}
