#include "mlspeed/config.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mlspeed/ingest.hpp"

namespace mlspeed {

const std::vector<Config::KeyInfo>& Config::registry() {
    static const std::vector<KeyInfo> keys = {
        {"gmm.k", "5", "mixture components per pixel"},
        {"gmm.alpha", "0.05", "mixture learning rate"},
        {"gmm.t", "0.7", "background cumulative-weight threshold"},
        {"gmm.match_sigma", "2.5", "match threshold in standard deviations"},
        {"gmm.initial_variance", "0.0025", "variance of fresh components (0.0025 synthetic preset, 0.81 real-scene preset)"},
        {"gmm.variance_floor", "1e-6", "lower bound on component variance"},
        {"template.min_area", "9", "minimum connected foreground component area (pixels)"},
        {"estimator.v_max", "8", "integer speed search radius (pixel/frame)"},
        {"estimator.mode", "omitted", "background handling: included|omitted"},
        {"estimator.taper", "off", "raised-cosine border taper before transforms"},
        {"estimator.keep_surface", "off", "emit the full objective surface as CSV"},
        {"baseline.block_size", "35", "block matching block edge (pixels)"},
        {"baseline.search_range", "8", "block matching max displacement per axis"},
        {"synth.preset", "desk", "synthetic preset: desk|fullscale"},
        {"synth.sigma2", "0", "additive Gaussian noise variance"},
        {"synth.clip", "on", "clamp noisy frames to [0,1]"},
        {"synth.wrap", "circular", "sprite motion model: circular|clipped"},
        {"synth.v1", "1", "true vertical speed (pixel/frame)"},
        {"synth.v2", "2", "true horizontal speed (pixel/frame)"},
        {"synth.start1", "-1", "sprite start row (-1 = preset default)"},
        {"synth.start2", "-1", "sprite start column (-1 = preset default)"},
        {"bench.sigma2_grid", "0,0.01,0.05,0.1,0.15,0.2,0.25,0.3", "noise variances swept by bench"},
        {"bench.trials", "10", "noise realizations per sweep point"},
        {"bench.methods", "ml_included,ml_omitted,block_matching", "methods evaluated by bench"},
        {"bench.videos", "3", "number of desk-suite videos"},
    };
    return keys;
}

Config::Config() {
    for (const auto& k : registry())
        values_[k.key] = k.default_value;
}

void Config::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end())
        throw std::invalid_argument("unknown config key: " + key);
    it->second = value;
}

void Config::load_file(const std::filesystem::path& path) {
    for (const auto& [key, value] : read_key_values(path))
        set(key, value);
}

const std::string& Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw std::invalid_argument("unknown config key: " + key);
    return it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string& v = get(key);
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not a number: " + v);
    }
}

int Config::get_int(const std::string& key) const {
    const std::string& v = get(key);
    try {
        size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not an integer: " + v);
    }
}

bool Config::get_bool(const std::string& key) const {
    std::string v = get(key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (v == "on" || v == "true" || v == "1")
        return true;
    if (v == "off" || v == "false" || v == "0")
        return false;
    throw std::invalid_argument("config key " + key + ": not a boolean: " + v);
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    std::vector<std::string> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : get_list(key))
        out.push_back(std::stod(s));
    return out;
}

}  // namespace mlspeed
