#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hhsmc/coupled_solver.hpp"

namespace hhsmc {

/// Named scenario plus the trace position used by the plots.
struct Preset {
    std::string name;
    Scenario scenario;
    double x_fixed = 0.0;
};

class UnknownPresetError : public std::invalid_argument {
public:
    explicit UnknownPresetError(const std::string& name);
};

/// The six built-in scenarios fig1..fig6. Throws UnknownPresetError with the
/// list of valid names otherwise.
Preset preset(const std::string& name);

const std::vector<std::string>& preset_names();

} // namespace hhsmc
