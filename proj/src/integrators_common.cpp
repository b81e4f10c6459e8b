#include "hhsmc/integrators.hpp"

#include <string>

namespace hhsmc {

void SolverTolerances::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0)) {
        throw std::invalid_argument("SolverTolerances: all fields must be positive");
    }
}

SolverFailure::SolverFailure(const std::string& what, double t, double dt)
    : std::runtime_error(what + " at t=" + std::to_string(t) + ", dt=" + std::to_string(dt)),
      t_(t),
      dt_(dt) {}

} // namespace hhsmc
