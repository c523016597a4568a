#include "mlspeed/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "mlspeed/ingest.hpp"

namespace fs = std::filesystem;

namespace mlspeed {

namespace {

void validate(const SynthConfig& cfg) {
    if (cfg.background.size() == 0)
        throw std::invalid_argument("SynthConfig: background frame is empty");
    if (cfg.sprite.size() == 0)
        throw std::invalid_argument("SynthConfig: sprite is empty");
    if (cfg.sprite.height() != cfg.sprite_mask.height ||
        cfg.sprite.width() != cfg.sprite_mask.width)
        throw std::invalid_argument("SynthConfig: sprite/mask dimensions differ");
    if (cfg.sprite.height() > cfg.background.height() ||
        cfg.sprite.width() > cfg.background.width())
        throw std::invalid_argument("SynthConfig: sprite larger than frame");
    if (cfg.background_frames >= cfg.total_frames)
        throw std::invalid_argument("SynthConfig: background_frames must be < total_frames");
    if (cfg.sigma2 < 0.0)
        throw std::invalid_argument("SynthConfig: sigma2 must be non-negative");
    if (cfg.frame_rate <= 0.0)
        throw std::invalid_argument("SynthConfig: frame_rate must be positive");
}

PixelIndex position_at(const SynthConfig& cfg, int n) {
    const long p1 = cfg.start_position.m1 + std::lround(cfg.v_true.v1) * long(n);
    const long p2 = cfg.start_position.m2 + std::lround(cfg.v_true.v2) * long(n);
    if (cfg.wrap_mode == WrapMode::circular)
        return wrap(p1, p2, cfg.background.height(), cfg.background.width());
    return {static_cast<int>(p1), static_cast<int>(p2)};  // may be off-frame
}

void composite_sprite(Frame& frame, const SynthConfig& cfg, PixelIndex origin) {
    const int h = frame.height(), w = frame.width();
    for (int s1 = 0; s1 < cfg.sprite.height(); ++s1)
        for (int s2 = 0; s2 < cfg.sprite.width(); ++s2) {
            if (!cfg.sprite_mask.at(s1, s2))
                continue;
            long m1 = long(origin.m1) + s1, m2 = long(origin.m2) + s2;
            if (cfg.wrap_mode == WrapMode::circular) {
                auto p = wrap(m1, m2, h, w);
                frame.at(p.m1, p.m2) = cfg.sprite.at(s1, s2);
            } else {
                if (m1 >= 0 && m1 < h && m2 >= 0 && m2 < w)
                    frame.at(static_cast<int>(m1), static_cast<int>(m2)) = cfg.sprite.at(s1, s2);
            }
        }
}

void add_noise(Frame& frame, const SynthConfig& cfg, int frame_index) {
    if (cfg.sigma2 <= 0.0)
        return;
    Rng rng(derive_seed(cfg.seed, static_cast<uint64_t>(frame_index)));
    std::normal_distribution<double> noise(0.0, std::sqrt(cfg.sigma2));
    for (size_t i = 0; i < frame.size(); ++i) {
        double v = frame.data()[i] + noise(rng);
        if (cfg.clip)
            v = std::clamp(v, 0.0, 1.0);
        frame.data()[i] = v;
    }
}

}  // namespace

Frame render_clean_frame(const SynthConfig& cfg, int n) {
    validate(cfg);
    Frame frame = cfg.background;
    composite_sprite(frame, cfg, position_at(cfg, n));
    return frame;
}

std::pair<FrameSequence, GroundTruth> generate(const SynthConfig& cfg) {
    validate(cfg);
    FrameSequence seq;
    seq.sample_time = 1.0 / cfg.frame_rate;
    GroundTruth truth;
    truth.v_true = cfg.v_true;

    for (int i = 0; i < cfg.total_frames; ++i) {
        Frame clean = cfg.background;
        if (i >= cfg.background_frames) {
            const int n = i - cfg.background_frames;
            composite_sprite(clean, cfg, position_at(cfg, n));
            truth.positions.push_back(position_at(cfg, n));
        }
        truth.clean_frames.push_back(clean);
        Frame noisy = clean;
        add_noise(noisy, cfg, i);
        seq.frames.push_back(std::move(noisy));
    }

    // exact template at n = 0: sprite placed at its start position over zeros
    Template t;
    t.image = Frame(cfg.background.height(), cfg.background.width());
    t.support = ForegroundMask(cfg.background.height(), cfg.background.width());
    const PixelIndex origin = position_at(cfg, 0);
    for (int s1 = 0; s1 < cfg.sprite.height(); ++s1)
        for (int s2 = 0; s2 < cfg.sprite.width(); ++s2) {
            if (!cfg.sprite_mask.at(s1, s2))
                continue;
            long m1 = long(origin.m1) + s1, m2 = long(origin.m2) + s2;
            if (cfg.wrap_mode == WrapMode::circular) {
                auto p = wrap(m1, m2, t.image.height(), t.image.width());
                t.image.at(p.m1, p.m2) = cfg.sprite.at(s1, s2);
                t.support.at(p.m1, p.m2) = 1;
            } else if (m1 >= 0 && m1 < t.image.height() && m2 >= 0 && m2 < t.image.width()) {
                t.image.at(int(m1), int(m2)) = cfg.sprite.at(s1, s2);
                t.support.at(int(m1), int(m2)) = 1;
            }
        }
    t.spectrum = dft2(t.image);
    truth.template_at_origin = std::move(t);

    return {std::move(seq), std::move(truth)};
}

SynthConfig fullscale_preset() {
    SynthConfig cfg;
    cfg.background = Frame(361, 616);
    cfg.total_frames = 85;
    cfg.background_frames = 40;
    cfg.frame_rate = 15.0;
    cfg.start_position = {60, 60};
    return cfg;
}

Frame desk_background(int height, int width) {
    Frame bg(height, width);
    for (int m1 = 0; m1 < height; ++m1)
        for (int m2 = 0; m2 < width; ++m2) {
            // smooth low-contrast texture, values around 0.2
            const double v = 0.18 + 0.06 * std::sin(2.0 * 3.14159265358979 * m1 / 17.0) *
                                         std::cos(2.0 * 3.14159265358979 * m2 / 23.0);
            bg.at(m1, m2) = v;
        }
    return bg;
}

std::pair<Frame, BinaryMask> desk_sprite(int size) {
    Frame sprite(size, size);
    BinaryMask mask(size, size, 1);
    Rng rng(0xDE5C);
    std::uniform_real_distribution<double> d(0.55, 1.0);
    for (size_t i = 0; i < sprite.size(); ++i)
        sprite.data()[i] = d(rng);
    return {std::move(sprite), std::move(mask)};
}

SynthConfig desk_preset() {
    SynthConfig cfg;
    cfg.background = desk_background();
    auto [sprite, mask] = desk_sprite();
    cfg.sprite = std::move(sprite);
    cfg.sprite_mask = std::move(mask);
    cfg.start_position = {10, 10};
    cfg.v_true = {1.0, 2.0};
    cfg.total_frames = 30;
    cfg.background_frames = 10;
    cfg.frame_rate = 15.0;
    return cfg;
}

void write_sequence(const fs::path& dir, const FrameSequence& seq, const SynthConfig& cfg,
                    const GroundTruth& truth) {
    fs::create_directories(dir);
    char name[32];
    for (size_t i = 0; i < seq.frames.size(); ++i) {
        std::snprintf(name, sizeof(name), "frame_%04zu.pgm", i);
        save_frame(seq.frames[i], dir / name);
    }
    write_manifest(dir / "sequence.manifest", seq.frame_rate(), cfg.background_frames,
                   "frame_*.pgm");

    std::ofstream side(dir / "ground_truth.txt");
    if (!side)
        throw std::runtime_error((dir / "ground_truth.txt").string() + ": cannot write");
    side << "v1 = " << std::lround(truth.v_true.v1) << "\n";
    side << "v2 = " << std::lround(truth.v_true.v2) << "\n";
    side << "start1 = " << cfg.start_position.m1 << "\n";
    side << "start2 = " << cfg.start_position.m2 << "\n";
    side << "wrap_mode = " << (cfg.wrap_mode == WrapMode::circular ? "circular" : "clipped") << "\n";
    side << "sigma2 = " << cfg.sigma2 << "\n";
    side << "seed = " << cfg.seed << "\n";

    save_frame(truth.template_at_origin.image, dir / "template.pgm", 16);
    Frame mask_frame(truth.template_at_origin.support.height,
                     truth.template_at_origin.support.width);
    for (size_t i = 0; i < mask_frame.size(); ++i)
        mask_frame.data()[i] = truth.template_at_origin.support.data[i] ? 1.0 : 0.0;
    save_frame(mask_frame, dir / "template_mask.pgm");
}

GroundTruthSidecar read_sidecar(const fs::path& dir) {
    GroundTruthSidecar s;
    for (const auto& [key, value] : read_key_values(dir / "ground_truth.txt")) {
        if (key == "v1")
            s.v_true.v1 = std::stod(value);
        else if (key == "v2")
            s.v_true.v2 = std::stod(value);
        else if (key == "start1")
            s.start.m1 = std::stoi(value);
        else if (key == "start2")
            s.start.m2 = std::stoi(value);
        else if (key == "wrap_mode")
            s.wrap_mode = value == "clipped" ? WrapMode::clipped : WrapMode::circular;
        else if (key == "sigma2")
            s.sigma2 = std::stod(value);
        else if (key == "seed")
            s.seed = std::stoull(value);
    }
    return s;
}

}  // namespace mlspeed
