#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "hhsmc/presets.hpp"

namespace hhsmc {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fully resolved run description: scenario, iteration controls and output
/// selection. Built from a preset, then optionally overridden by a key=value
/// config file and by command-line flags (flags win).
struct RunConfig {
    std::string preset_name;
    Scenario scenario;
    double x_fixed = 0.0;
    IterationControls controls;
    std::filesystem::path out_dir;
    bool write_csv = true;
    bool write_plots = true;

    static RunConfig from_preset(const std::string& name);

    /// Applies one override; throws ConfigError on unknown keys or
    /// unparsable values.
    void apply(const std::string& key, const std::string& value);

    void apply_all(const std::map<std::string, std::string>& keys);
};

/// Parses a flat key=value file ('#' starts a comment, blank lines ignored).
std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path);

} // namespace hhsmc
