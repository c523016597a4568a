#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mlspeed/background.hpp"
#include "mlspeed/synth.hpp"

using namespace mlspeed;

TEST_CASE("constant stream converges to the constant and stays background") {
    GmmParams p;
    GmmModel model(4, 4, p);
    Frame f(4, 4, 0.3);
    ForegroundMask mask;
    for (int i = 0; i < 60; ++i)
        mask = model.update(f);
    CHECK(mask.count() == 0);
    Frame bg = model.estimate_background();
    for (size_t i = 0; i < bg.size(); ++i)
        CHECK(bg.data()[i] == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("sudden outlier is flagged foreground and spawns a weak component") {
    GmmParams p;
    GmmModel model(1, 1, p);
    Frame f(1, 1, 0.2);
    for (int i = 0; i < 50; ++i)
        model.update(f);
    Frame outlier(1, 1, 0.95);
    ForegroundMask mask = model.update(outlier);
    CHECK(mask.at(0, 0) == 1);
    // background estimate still reflects the established component
    CHECK(model.estimate_background().at(0, 0) == doctest::Approx(0.2).epsilon(1e-3));
    // the new component carries weight alpha (renormalized)
    const GmmComponent* c = model.components(0, 0);
    bool found = false;
    for (int i = 0; i < p.k; ++i)
        found = found || (std::abs(c[i].mean - 0.95) < 1e-9);
    CHECK(found);
}

TEST_CASE("persistent new value is eventually absorbed into the background") {
    GmmParams p;
    GmmModel model(1, 1, p);
    Frame a(1, 1, 0.2), b(1, 1, 0.9);
    for (int i = 0; i < 40; ++i)
        model.update(a);
    ForegroundMask mask;
    for (int i = 0; i < 200; ++i)
        mask = model.update(b);
    CHECK(mask.at(0, 0) == 0);
    CHECK(model.estimate_background().at(0, 0) == doctest::Approx(0.9).epsilon(1e-3));
}

TEST_CASE("weights stay normalized and ranked") {
    GmmParams p;
    GmmModel model(1, 1, p);
    Rng rng(7);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    Frame f(1, 1);
    for (int i = 0; i < 300; ++i) {
        f.at(0, 0) = d(rng);
        model.update(f);
    }
    const GmmComponent* c = model.components(0, 0);
    double wsum = 0.0;
    for (int i = 0; i < p.k; ++i) {
        wsum += c[i].weight;
        if (i > 0 && c[i].variance > 0.0 && c[i - 1].variance > 0.0)
            CHECK(c[i - 1].weight / std::sqrt(c[i - 1].variance) >=
                  c[i].weight / std::sqrt(c[i].variance) - 1e-12);
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gmm background of a noisy static scene has low error") {
    SynthConfig cfg = desk_preset();
    cfg.total_frames = 45;
    cfg.background_frames = 40;
    cfg.sigma2 = 0.0025;
    cfg.seed = 11;
    auto [seq, truth] = generate(cfg);

    GmmParams p;
    GmmModel model(cfg.background.height(), cfg.background.width(), p);
    for (int i = 0; i < cfg.background_frames; ++i)
        model.update(seq.frames[size_t(i)]);
    Frame bg = model.estimate_background();
    double mae = 0.0;
    for (size_t i = 0; i < bg.size(); ++i)
        mae += std::abs(bg.data()[i] - cfg.background.data()[i]);
    mae /= double(bg.size());
    CHECK(mae < 0.02);
}

TEST_CASE("moving sprite is detected as foreground") {
    SynthConfig cfg = desk_preset();
    cfg.total_frames = 45;
    cfg.background_frames = 40;
    cfg.seed = 3;
    auto [seq, truth] = generate(cfg);

    GmmParams p;
    GmmModel model(cfg.background.height(), cfg.background.width(), p);
    for (int i = 0; i < cfg.background_frames; ++i)
        model.update(seq.frames[size_t(i)]);

    // first observation frame: recall over true sprite pixels
    ForegroundMask mask = model.update(seq.frames[size_t(cfg.background_frames)]);
    const auto& support = truth.template_at_origin.support;
    size_t hit = 0;
    for (size_t i = 0; i < support.data.size(); ++i)
        if (support.data[i] && mask.data[i])
            ++hit;
    CHECK(double(hit) >= 0.9 * double(support.count()));
}

TEST_CASE("largest_component keeps one blob and honors min_area") {
    ForegroundMask m(8, 8);
    // 3x3 blob
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c)
            m.at(r, c) = 1;
    // diagonal-touching pixel joins via 8-connectivity
    m.at(4, 4) = 1;
    // distant 1-pixel speck
    m.at(7, 7) = 1;

    ForegroundMask keep = largest_component(m, 2);
    CHECK(keep.count() == 10);
    CHECK(keep.at(7, 7) == 0);
    CHECK(keep.at(4, 4) == 1);

    CHECK(largest_component(m, 11).count() == 0);
}

TEST_CASE("extract_template zeroes everything off the kept component") {
    Frame f(6, 6, 0.5);
    ForegroundMask m(6, 6);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            m.at(r, c) = 1;
    m.at(5, 5) = 1;  // speck below min_area

    Template t = extract_template(f, m, 4);
    CHECK(t.support.count() == 9);
    CHECK(t.image.at(0, 0) == 0.5);
    CHECK(t.image.at(5, 5) == 0.0);
    CHECK(t.image.at(3, 3) == 0.0);
    // spectrum is the transform of the masked image
    CHECK(t.spectrum.at(0, 0).real() == doctest::Approx(9 * 0.5));
}

TEST_CASE("extract_template failures use the estimation error type") {
    Frame f(4, 4, 0.5);
    CHECK_THROWS_AS(extract_template(f, ForegroundMask(4, 4), 1), EstimationError);
    ForegroundMask m(4, 4);
    m.at(0, 0) = 1;
    CHECK_THROWS_AS(extract_template(f, m, 5), EstimationError);
}

TEST_CASE("median background recovers a static scene under impulsive outliers") {
    FrameSequence seq;
    seq.sample_time = 1.0;
    for (int i = 0; i < 5; ++i)
        seq.frames.push_back(Frame(3, 3, 0.4));
    seq.frames[2].at(1, 1) = 1.0;  // single outlier
    Frame bg = median_background(seq);
    CHECK(bg.at(1, 1) == doctest::Approx(0.4));
    CHECK(bg.at(0, 0) == doctest::Approx(0.4));

    seq.frames.resize(2);
    CHECK_THROWS_AS(median_background(seq), std::invalid_argument);
}

TEST_CASE("even-count median averages the middle pair") {
    FrameSequence seq;
    for (double v : {0.1, 0.2, 0.6, 0.9})
        seq.frames.push_back(Frame(1, 1, v));
    CHECK(median_background(seq).at(0, 0) == doctest::Approx(0.4));
}
