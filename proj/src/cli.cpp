#include "hhsmc/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "hhsmc/io.hpp"
#include "hhsmc/presets.hpp"
#include "hhsmc/run_config.hpp"
#include "hhsmc/sliding_analysis.hpp"
#include "hhsmc/svg_plot.hpp"

namespace hhsmc::cli {

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
    std::string preset;
    std::string config_file;
    std::vector<std::string> sets;  // raw key=value overrides
    std::optional<double> rho, epsilon, horizon, threshold, time_budget;
    std::optional<int> max_x, max_t, max_iter;

    void attach(CLI::App* cmd, bool preset_required) {
        auto* p = cmd->add_option("--preset", preset, "scenario preset (fig1..fig6)");
        if (preset_required) p->required();
        cmd->add_option("--config", config_file, "key=value config file applied on top of the preset");
        cmd->add_option("--set", sets, "extra key=value override (repeatable)");
        cmd->add_option("--rho", rho, "relay gain");
        cmd->add_option("--epsilon", epsilon, "sign regularization width");
        cmd->add_option("--maxX", max_x, "space nodes");
        cmd->add_option("--maxT", max_t, "saved time points");
        cmd->add_option("--T", horizon, "time horizon [ms]");
        cmd->add_option("--threshold", threshold, "outer iteration stop threshold");
        cmd->add_option("--max-iter", max_iter, "outer iteration cap");
        cmd->add_option("--time-budget", time_budget, "outer iteration wall-clock budget [s]");
    }

    void apply_to(RunConfig& cfg) const {
        if (!config_file.empty()) cfg.apply_all(parse_key_value_file(config_file));
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
            cfg.apply(kv.substr(0, eq), kv.substr(eq + 1));
        }
        auto num = [](double v) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return std::string(buf);
        };
        if (rho) cfg.apply("rho", num(*rho));
        if (epsilon) cfg.apply("epsilon", num(*epsilon));
        if (max_x) cfg.apply("maxX", std::to_string(*max_x));
        if (max_t) cfg.apply("maxT", std::to_string(*max_t));
        if (horizon) cfg.apply("T", num(*horizon));
        if (threshold) cfg.apply("threshold", num(*threshold));
        if (max_iter) cfg.apply("max_iter", std::to_string(*max_iter));
        if (time_budget) cfg.apply("time_budget", num(*time_budget));
    }
};

struct AnalysisOutput {
    SlidingBound bound;
    GatingBounds gb;
};

AnalysisOutput analyze_config(const RunConfig& cfg) {
    const Scenario& s = cfg.scenario;
    AnalysisOutput out;
    out.gb = gating_bounds();
    const CoefficientBounds cb = coefficient_bounds(s.params, out.gb);
    std::vector<double> v0_grid(s.mesh.max_x);
    for (int j = 0; j < s.mesh.max_x; ++j) v0_grid[j] = s.v0.value(s.mesh.xmesh[j]);
    const double dev0 = initial_deviation_sup(s.target, v0_grid, s.mesh.horizon);
    out.bound = sliding_bound(s.target, dev0, cb.f1M, cb.f2M, s.params.delta,
                              s.params.rho, s.mesh.horizon);
    return out;
}

int exit_code_for(StopReason reason) {
    switch (reason) {
        case StopReason::converged: return exit_ok;
        case StopReason::max_iterations: return exit_max_iterations;
        case StopReason::time_budget: return exit_time_budget;
    }
    return exit_numeric;
}

int run_one(RunConfig cfg, const fs::path& out_dir, bool quiet = false) {
    cfg.out_dir = out_dir;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << out_dir << ": " << ec.message()
                  << "\n";
        return 1;
    }

    const SimulationResult result = run_simulation(cfg.scenario, cfg.controls);
    const AnalysisOutput analysis = analyze_config(cfg);
    const double band = default_sliding_band(cfg.scenario.params.epsilon, cfg.controls.threshold);
    const auto onset = detect_sliding(result, cfg.scenario.mesh, cfg.scenario.target, band);

    try {
        if (cfg.write_csv) {
            write_field_csv(out_dir / "v.csv", cfg.scenario.mesh, result.v);
            write_field_csv(out_dir / "n.csv", cfg.scenario.mesh, result.n);
            write_field_csv(out_dir / "m.csv", cfg.scenario.mesh, result.m);
            write_field_csv(out_dir / "h.csv", cfg.scenario.mesh, result.h);
        }
        const auto summary = summary_json(cfg, result, analysis.bound, analysis.gb, band, onset);
        write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
        if (cfg.write_plots) {
            emit_plots(out_dir, cfg.scenario.mesh, result.v, result.n, result.m, result.h,
                       cfg.x_fixed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (!quiet) {
        std::cout << (cfg.preset_name.empty() ? std::string("run") : cfg.preset_name) << ": "
                  << stop_reason_name(result.stop_reason) << " after " << result.iterations
                  << " iterations (" << result.elapsed_seconds << " s)";
        if (onset) std::cout << ", sliding onset at t = " << *onset;
        std::cout << "\n";
    }
    return exit_code_for(result.stop_reason);
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"relay-controlled Hodgkin-Huxley cable simulator"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "run one scenario and write fields, summary and plots");
    CommonFlags sim_flags;
    sim_flags.attach(sim, /*preset_required=*/false);
    std::string out_dir = "out";
    std::string from_summary;
    bool no_csv = false, no_plots = false;
    sim->add_option("--out", out_dir, "output directory")->required();
    sim->add_option("--from-summary", from_summary, "replay the run recorded in a summary.json");
    sim->add_flag("--no-csv", no_csv, "skip the field CSV files");
    sim->add_flag("--no-plots", no_plots, "skip the SVG plots");

    auto* ana = app.add_subcommand("analyze", "print the sufficient-condition quantities as JSON");
    CommonFlags ana_flags;
    ana_flags.attach(ana, /*preset_required=*/true);

    auto* swp = app.add_subcommand("sweep", "run one scenario over several values of a parameter");
    CommonFlags swp_flags;
    swp_flags.attach(swp, /*preset_required=*/true);
    std::string sweep_param;
    std::vector<double> sweep_values;
    std::string sweep_out = "sweep";
    swp->add_option("--param", sweep_param, "config key to vary (e.g. rho)")->required();
    swp->add_option("--values", sweep_values, "values to run")->required()->expected(-1);
    swp->add_option("--out", sweep_out, "output directory (one subdirectory per value)");

    std::vector<const char*> argv;
    argv.push_back("hhsmc");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (sim->parsed()) {
            RunConfig cfg;
            if (!from_summary.empty()) {
                cfg = config_from_summary(nlohmann::json::parse(read_text_file(from_summary)));
            } else if (!sim_flags.preset.empty()) {
                cfg = RunConfig::from_preset(sim_flags.preset);
            } else {
                std::cerr << "error: simulate needs --preset or --from-summary\n";
                return exit_usage;
            }
            sim_flags.apply_to(cfg);
            if (no_csv) cfg.write_csv = false;
            if (no_plots) cfg.write_plots = false;
            return run_one(std::move(cfg), out_dir);
        }
        if (ana->parsed()) {
            RunConfig cfg = RunConfig::from_preset(ana_flags.preset);
            ana_flags.apply_to(cfg);
            const AnalysisOutput a = analyze_config(cfg);
            std::cout << sliding_bound_to_json(a.bound, a.gb, cfg.scenario.params.rho).dump(2)
                      << "\n";
            return exit_ok;
        }
        if (swp->parsed()) {
            RunConfig base = RunConfig::from_preset(swp_flags.preset);
            swp_flags.apply_to(base);
            int worst = exit_ok;
            nlohmann::ordered_json table = nlohmann::ordered_json::array();
            for (double value : sweep_values) {
                char buf[48];
                std::snprintf(buf, sizeof(buf), "%.17g", value);
                RunConfig cfg = base;
                cfg.apply(sweep_param, buf);
                char dirbuf[64];
                std::snprintf(dirbuf, sizeof(dirbuf), "%s=%g", sweep_param.c_str(), value);
                const int code = run_one(std::move(cfg), fs::path(sweep_out) / dirbuf);
                table.push_back({{"value", value}, {"exit_code", code}, {"dir", dirbuf}});
                if (code != exit_ok && worst == exit_ok) worst = code;
            }
            std::error_code ec;
            fs::create_directories(sweep_out, ec);
            if (!ec) {
                write_text_file(fs::path(sweep_out) / "sweep_summary.json",
                                nlohmann::ordered_json{{"param", sweep_param}, {"runs", table}}.dump(2) +
                                    "\n");
            }
            return worst;
        }
    } catch (const UnknownPresetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const SimulationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const SolverFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_usage;
}

} // namespace hhsmc::cli
