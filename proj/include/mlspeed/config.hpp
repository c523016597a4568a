#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mlspeed {

// Flat key=value configuration. Every key must be pre-registered with a
// default; unknown keys are rejected by name.
class Config {
public:
    Config();  // loads the built-in key registry

    void load_file(const std::filesystem::path& path);
    void set(const std::string& key, const std::string& value);  // throws on unknown key

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;  // on/off, true/false, 1/0
    std::vector<double> get_double_list(const std::string& key) const;  // comma-separated
    std::vector<std::string> get_list(const std::string& key) const;

    struct KeyInfo {
        std::string key;
        std::string default_value;
        std::string description;
    };
    static const std::vector<KeyInfo>& registry();

private:
    std::map<std::string, std::string> values_;
};

}  // namespace mlspeed
