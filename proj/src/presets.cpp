#include "hhsmc/presets.hpp"

#include <numbers>
#include <sstream>

namespace hhsmc {

namespace {

Scenario base_scenario() {
    Scenario s;
    s.params = HHParameters{};  // classical conductances, delta = 0.1, C_M = 0.91
    s.params.epsilon = 1e-4;
    s.mesh = Mesh::uniform(1.0, 100.0, 25, 200);
    s.v0 = InitialPotential::uniform(4.82);
    s.n0 = 0.45;
    s.m0 = 0.03;
    s.h0 = 0.397;
    s.target = TargetTrajectory::constant(0.0);
    return s;
}

} // namespace

UnknownPresetError::UnknownPresetError(const std::string& name)
    : std::invalid_argument([&] {
          std::ostringstream os;
          os << "unknown preset '" << name << "'; available:";
          for (const auto& p : preset_names()) os << ' ' << p;
          return os.str();
      }()) {}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"};
    return names;
}

Preset preset(const std::string& name) {
    Preset p;
    p.name = name;
    p.scenario = base_scenario();
    p.x_fixed = 0.0;
    if (name == "fig1") {
        // relay off: subthreshold relaxation of the uncontrolled fiber
        p.scenario.params.rho = 0.0;
    } else if (name == "fig2") {
        p.scenario.params.rho = 20.0;
    } else if (name == "fig3") {
        // periodic target, frequency read literally as 4/pi
        p.scenario.params.rho = 20.0;
        p.scenario.target = TargetTrajectory::time_sinusoid(0.5, 4.0 / std::numbers::pi, 0.6);
    } else if (name == "fig4") {
        // lowered potassium conductance, uncontrolled: late firing
        p.scenario.params.rho = 0.0;
        p.scenario.params.g_K = 3.8229;
    } else if (name == "fig5") {
        p.scenario.params.rho = 20.0;
        p.scenario.params.g_K = 3.8229;
    } else if (name == "fig6") {
        p.scenario.params.rho = 50.0;
        p.scenario.params.delta = 50.0;
        p.scenario.v0 = InitialPotential::space_sinusoid(0.5, 4.0 * std::numbers::pi, 0.6);
        p.x_fixed = 0.5;
    } else {
        throw UnknownPresetError(name);
    }
    return p;
}

} // namespace hhsmc
