#include "hhsmc/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hhsmc {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' as a number for key '" + key + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const int i = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return i;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' as an integer for key '" + key + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("config: cannot parse '" + value + "' as a boolean for key '" + key + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

RunConfig RunConfig::from_preset(const std::string& name) {
    const Preset p = preset(name);
    RunConfig cfg;
    cfg.preset_name = p.name;
    cfg.scenario = p.scenario;
    cfg.x_fixed = p.x_fixed;
    return cfg;
}

void RunConfig::apply(const std::string& key, const std::string& value) {
    auto& prm = scenario.params;
    auto& tgt = scenario.target;
    auto rebuild_mesh = [&](double length, double horizon, int mx, int mt) {
        scenario.mesh = Mesh::uniform(length, horizon, mx, mt);
        if (tgt.kind == TargetKind::space_profile) {
            throw ConfigError("config: cannot resize the mesh of a space-profile target");
        }
    };
    auto to_target_sinusoid = [&] {
        if (tgt.kind != TargetKind::time_sinusoid) {
            tgt = TargetTrajectory::time_sinusoid(0.0, 0.0, 0.0);
        }
    };
    auto renorm_target = [&] {
        tgt = TargetTrajectory::time_sinusoid(tgt.amplitude, tgt.omega, tgt.offset);
    };
    auto to_v0_sinusoid = [&] {
        if (scenario.v0.kind != InitialPotential::Kind::space_sinusoid) {
            scenario.v0 = InitialPotential::space_sinusoid(0.0, 0.0, scenario.v0.constant_value);
        }
    };

    if (key == "rho") prm.rho = parse_double(key, value);
    else if (key == "epsilon") prm.epsilon = parse_double(key, value);
    else if (key == "g_K") prm.g_K = parse_double(key, value);
    else if (key == "g_Na") prm.g_Na = parse_double(key, value);
    else if (key == "g_l") prm.g_l = parse_double(key, value);
    else if (key == "V_K") prm.V_K = parse_double(key, value);
    else if (key == "V_Na") prm.V_Na = parse_double(key, value);
    else if (key == "V_l") prm.V_l = parse_double(key, value);
    else if (key == "delta") prm.delta = parse_double(key, value);
    else if (key == "C_M") prm.C_M = parse_double(key, value);
    else if (key == "L") rebuild_mesh(parse_double(key, value), scenario.mesh.horizon, scenario.mesh.max_x, scenario.mesh.max_t);
    else if (key == "T") rebuild_mesh(scenario.mesh.length, parse_double(key, value), scenario.mesh.max_x, scenario.mesh.max_t);
    else if (key == "maxX") rebuild_mesh(scenario.mesh.length, scenario.mesh.horizon, parse_int(key, value), scenario.mesh.max_t);
    else if (key == "maxT") rebuild_mesh(scenario.mesh.length, scenario.mesh.horizon, scenario.mesh.max_x, parse_int(key, value));
    else if (key == "n0") scenario.n0 = parse_double(key, value);
    else if (key == "m0") scenario.m0 = parse_double(key, value);
    else if (key == "h0") scenario.h0 = parse_double(key, value);
    else if (key == "v0") scenario.v0 = InitialPotential::uniform(parse_double(key, value));
    else if (key == "v0_amplitude") { to_v0_sinusoid(); scenario.v0.amplitude = parse_double(key, value); }
    else if (key == "v0_wavenumber") { to_v0_sinusoid(); scenario.v0.wavenumber = parse_double(key, value); }
    else if (key == "v0_offset") { to_v0_sinusoid(); scenario.v0.offset = parse_double(key, value); }
    else if (key == "vstar") scenario.target = TargetTrajectory::constant(parse_double(key, value));
    else if (key == "vstar_amplitude") { to_target_sinusoid(); tgt.amplitude = parse_double(key, value); renorm_target(); }
    else if (key == "vstar_omega") { to_target_sinusoid(); tgt.omega = parse_double(key, value); renorm_target(); }
    else if (key == "vstar_offset") { to_target_sinusoid(); tgt.offset = parse_double(key, value); renorm_target(); }
    else if (key == "threshold") controls.threshold = parse_double(key, value);
    else if (key == "max_iter") controls.max_iterations = parse_int(key, value);
    else if (key == "time_budget") controls.time_budget_seconds = parse_double(key, value);
    else if (key == "rel_tol") controls.tolerances.rel_tol = parse_double(key, value);
    else if (key == "abs_tol") controls.tolerances.abs_tol = parse_double(key, value);
    else if (key == "max_step") controls.tolerances.max_step = parse_double(key, value);
    else if (key == "x_fixed") x_fixed = parse_double(key, value);
    else if (key == "gating") {
        if (value == "serial") controls.gating = GatingExecution::serial;
        else if (value == "openmp") controls.gating = GatingExecution::openmp;
        else throw ConfigError("config: gating must be 'serial' or 'openmp'");
    }
    else if (key == "write_csv") write_csv = parse_bool(key, value);
    else if (key == "write_plots") write_plots = parse_bool(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
}

void RunConfig::apply_all(const std::map<std::string, std::string>& keys) {
    for (const auto& [k, v] : keys) apply(k, v);
}

std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: missing '=' at " + path.string() + ":" + std::to_string(lineno));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config: empty key at " + path.string() + ":" + std::to_string(lineno));
        }
        out[key] = value;
    }
    return out;
}

} // namespace hhsmc
