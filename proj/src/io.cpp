#include "hhsmc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hhsmc {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

nlohmann::ordered_json json_or_null(const std::optional<double>& v) {
    if (v.has_value()) return *v;
    return nullptr;
}

} // namespace

void write_field_csv(const std::filesystem::path& path, const Mesh& mesh, const StateField& field) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << 't';
    for (double x : mesh.xmesh) out << ',' << fmt17(x);
    out << '\n';
    for (int i = 0; i < field.rows(); ++i) {
        out << fmt17(mesh.tmesh[i]);
        for (int j = 0; j < field.cols(); ++j) out << ',' << fmt17(field.at(i, j));
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

FieldCsv read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    FieldCsv csv;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv: " + path.string());
    {
        std::istringstream header(line);
        std::string cell;
        std::getline(header, cell, ',');  // corner label
        while (std::getline(header, cell, ',')) csv.xmesh.push_back(std::stod(cell));
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        csv.tmesh.push_back(std::stod(cell));
        std::vector<double> values;
        while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
        if (values.size() != csv.xmesh.size()) {
            throw IoError("ragged csv row in " + path.string());
        }
        rows.push_back(std::move(values));
    }
    csv.field = StateField(static_cast<int>(rows.size()), static_cast<int>(csv.xmesh.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        std::copy(rows[i].begin(), rows[i].end(), csv.field.row(static_cast<int>(i)).begin());
    }
    return csv;
}

nlohmann::ordered_json scenario_to_json(const RunConfig& config) {
    const Scenario& s = config.scenario;
    nlohmann::ordered_json p;
    p["g_K"] = s.params.g_K;
    p["g_Na"] = s.params.g_Na;
    p["g_l"] = s.params.g_l;
    p["V_K"] = s.params.V_K;
    p["V_Na"] = s.params.V_Na;
    p["V_l"] = s.params.V_l;
    p["delta"] = s.params.delta;
    p["C_M"] = s.params.C_M;
    p["rho"] = s.params.rho;
    p["epsilon"] = s.params.epsilon;
    p["L"] = s.mesh.length;
    p["T"] = s.mesh.horizon;
    p["maxX"] = s.mesh.max_x;
    p["maxT"] = s.mesh.max_t;
    p["n0"] = s.n0;
    p["m0"] = s.m0;
    p["h0"] = s.h0;

    nlohmann::ordered_json v0;
    if (s.v0.kind == InitialPotential::Kind::uniform) {
        v0["kind"] = "uniform";
        v0["value"] = s.v0.constant_value;
    } else {
        v0["kind"] = "space_sinusoid";
        v0["amplitude"] = s.v0.amplitude;
        v0["wavenumber"] = s.v0.wavenumber;
        v0["offset"] = s.v0.offset;
    }
    p["v0"] = v0;

    nlohmann::ordered_json tgt;
    switch (s.target.kind) {
        case TargetKind::constant:
            tgt["kind"] = "constant";
            tgt["value"] = s.target.constant_value;
            break;
        case TargetKind::time_sinusoid:
            tgt["kind"] = "time_sinusoid";
            tgt["amplitude"] = s.target.amplitude;
            tgt["omega"] = s.target.omega;
            tgt["offset"] = s.target.offset;
            break;
        case TargetKind::space_profile:
            tgt["kind"] = "space_profile";
            tgt["values"] = s.target.profile;
            break;
    }
    p["target"] = tgt;

    p["threshold"] = config.controls.threshold;
    p["max_iter"] = config.controls.max_iterations;
    p["time_budget"] = config.controls.time_budget_seconds;
    p["rel_tol"] = config.controls.tolerances.rel_tol;
    p["abs_tol"] = config.controls.tolerances.abs_tol;
    p["max_step"] = std::isfinite(config.controls.tolerances.max_step)
                        ? nlohmann::ordered_json(config.controls.tolerances.max_step)
                        : nlohmann::ordered_json(nullptr);
    p["gating"] = config.controls.gating == GatingExecution::serial ? "serial" : "openmp";
    p["x_fixed"] = config.x_fixed;
    return p;
}

RunConfig config_from_summary(const nlohmann::json& summary) {
    if (!summary.contains("parameters")) throw IoError("summary: missing parameters block");
    const auto& p = summary.at("parameters");
    RunConfig cfg;
    if (summary.contains("preset")) cfg.preset_name = summary.at("preset").get<std::string>();

    Scenario& s = cfg.scenario;
    s.params.g_K = p.at("g_K");
    s.params.g_Na = p.at("g_Na");
    s.params.g_l = p.at("g_l");
    s.params.V_K = p.at("V_K");
    s.params.V_Na = p.at("V_Na");
    s.params.V_l = p.at("V_l");
    s.params.delta = p.at("delta");
    s.params.C_M = p.at("C_M");
    s.params.rho = p.at("rho");
    s.params.epsilon = p.at("epsilon");
    s.mesh = Mesh::uniform(p.at("L"), p.at("T"), p.at("maxX"), p.at("maxT"));
    s.n0 = p.at("n0");
    s.m0 = p.at("m0");
    s.h0 = p.at("h0");

    const auto& v0 = p.at("v0");
    if (v0.at("kind") == "uniform") {
        s.v0 = InitialPotential::uniform(v0.at("value"));
    } else {
        s.v0 = InitialPotential::space_sinusoid(v0.at("amplitude"), v0.at("wavenumber"),
                                                v0.at("offset"));
    }

    const auto& tgt = p.at("target");
    const std::string kind = tgt.at("kind");
    if (kind == "constant") {
        s.target = TargetTrajectory::constant(tgt.at("value"));
    } else if (kind == "time_sinusoid") {
        s.target = TargetTrajectory::time_sinusoid(tgt.at("amplitude"), tgt.at("omega"),
                                                   tgt.at("offset"));
    } else if (kind == "space_profile") {
        s.target = TargetTrajectory::space_profile(tgt.at("values").get<std::vector<double>>(),
                                                   s.mesh.dx());
    } else {
        throw IoError("summary: unknown target kind '" + kind + "'");
    }

    cfg.controls.threshold = p.at("threshold");
    cfg.controls.max_iterations = p.at("max_iter");
    cfg.controls.time_budget_seconds = p.at("time_budget");
    cfg.controls.tolerances.rel_tol = p.at("rel_tol");
    cfg.controls.tolerances.abs_tol = p.at("abs_tol");
    cfg.controls.tolerances.max_step = p.at("max_step").is_null()
                                           ? std::numeric_limits<double>::infinity()
                                           : p.at("max_step").get<double>();
    cfg.controls.gating = p.at("gating") == "serial" ? GatingExecution::serial
                                                     : GatingExecution::openmp;
    cfg.x_fixed = p.at("x_fixed");
    return cfg;
}

nlohmann::ordered_json sliding_bound_to_json(const SlidingBound& bound, const GatingBounds& gb,
                                             double rho) {
    nlohmann::ordered_json j;
    j["A"] = bound.A;
    j["f1M"] = bound.f1M;
    j["f2M"] = bound.f2M;
    j["dev0"] = bound.dev0;
    j["rho_min"] = bound.rho_min;
    j["T_star"] = json_or_null(bound.T_star);
    j["rho"] = rho;
    j["gain_condition_met"] = bound.T_star.has_value();
    j["gating_bounds"] = {{"n_M", gb.n_M}, {"m_M", gb.m_M}, {"h_M", gb.h_M}};
    return j;
}

nlohmann::ordered_json summary_json(const RunConfig& config, const SimulationResult& result,
                                    const SlidingBound& bound, const GatingBounds& gb,
                                    double band, std::optional<double> onset) {
    nlohmann::ordered_json j;
    if (!config.preset_name.empty()) j["preset"] = config.preset_name;
    j["parameters"] = scenario_to_json(config);
    nlohmann::ordered_json r;
    r["stop_reason"] = stop_reason_name(result.stop_reason);
    r["iterations"] = result.iterations;
    r["residual_trace"] = result.residual_trace;
    r["elapsed_seconds"] = result.elapsed_seconds;
    j["result"] = r;
    nlohmann::ordered_json sliding;
    // the sufficient-condition numbers and the measured onset are distinct
    // quantities; both are reported, neither substitutes for the other
    sliding["empirical"] = {{"band", band}, {"onset", json_or_null(onset)}};
    sliding["theoretical"] = sliding_bound_to_json(bound, gb, config.scenario.params.rho);
    j["sliding"] = sliding;
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace hhsmc
