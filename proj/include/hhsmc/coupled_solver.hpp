#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhsmc/hh_model.hpp"
#include "hhsmc/integrators.hpp"
#include "hhsmc/mesh.hpp"

namespace hhsmc {

enum class TargetKind { constant, time_sinusoid, space_profile };

/// Prescribed trajectory v*(t,x) together with the analytic sup-norms the
/// sliding analysis consumes. A constant target has zero time-derivative and
/// second-space-derivative norms by construction; a space profile carries
/// the mirror-ghost second difference of its grid values.
struct TargetTrajectory {
    TargetKind kind = TargetKind::constant;
    double constant_value = 0.0;
    double amplitude = 0.0;   // time_sinusoid: amplitude*sin(omega*t)+offset
    double omega = 0.0;
    double offset = 0.0;
    std::vector<double> profile;  // space_profile values on xmesh

    double sup_value = 0.0;             // ||v*||_inf
    double sup_time_derivative = 0.0;   // ||v*_t||_inf
    double sup_space_curvature = 0.0;   // ||v*_xx||_inf

    static TargetTrajectory constant(double c);
    static TargetTrajectory time_sinusoid(double amplitude, double omega, double offset);
    static TargetTrajectory space_profile(std::vector<double> values_on_grid, double dx);

    /// v*(t, x_j); the node index only matters for space profiles.
    [[nodiscard]] double value_at_node(double t, int j) const;

    /// Largest and smallest value the target takes over [0, horizon].
    [[nodiscard]] std::pair<double, double> range_over(double horizon) const;
};

/// sup over t in [0,horizon] and nodes j of |v0(x_j) - v*(t,x_j)|.
double initial_deviation_sup(const TargetTrajectory& target,
                             std::span<const double> v0_on_grid, double horizon);

/// Initial potential profile, either uniform or a spatial sinusoid
/// amplitude*sin(wavenumber*x)+offset. Kept as tagged data so a scenario can
/// be serialized and replayed exactly.
struct InitialPotential {
    enum class Kind { uniform, space_sinusoid } kind = Kind::uniform;
    double constant_value = 0.0;
    double amplitude = 0.0;
    double wavenumber = 0.0;
    double offset = 0.0;

    static InitialPotential uniform(double c);
    static InitialPotential space_sinusoid(double amplitude, double wavenumber, double offset);

    [[nodiscard]] double value(double x) const;
};

/// Full description of one controlled simulation.
struct Scenario {
    HHParameters params;
    Mesh mesh;
    InitialPotential v0;
    double n0 = 0.45;
    double m0 = 0.03;
    double h0 = 0.397;
    TargetTrajectory target;

    void validate() const;
};

enum class StopReason { converged, max_iterations, time_budget };

const char* stop_reason_name(StopReason reason);

enum class GatingExecution { serial, openmp };

/// Knobs of the outer block iteration.
struct IterationControls {
    SolverTolerances tolerances{};
    double threshold = 1e-3;          // sup-norm stop on successive v iterates
    int max_iterations = 100;
    double time_budget_seconds = 900.0;
    GatingExecution gating = GatingExecution::openmp;
};

struct SimulationResult {
    StateField v, n, m, h;
    int iterations = 0;
    std::vector<double> residual_trace;
    StopReason stop_reason = StopReason::converged;
    double elapsed_seconds = 0.0;
};

struct ReducedResult {
    StateField v, w;
    int iterations = 0;
    std::vector<double> residual_trace;
    StopReason stop_reason = StopReason::converged;
    double elapsed_seconds = 0.0;
};

/// Thrown when an inner solve fails or a field turns non-finite; carries the
/// outer iteration index.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, int iteration);
    [[nodiscard]] int iteration() const { return iteration_; }

private:
    int iteration_;
};

/// Block iteration for the full four-field system: the potential equation is
/// solved over the whole horizon with the ionic coefficients frozen from the
/// previous gating iterate, then the three gating fields are recomputed from
/// the new potential, until successive potential iterates agree to the
/// threshold on the saved grid.
SimulationResult run_simulation(const Scenario& s, const IterationControls& c = {});

/// Same iteration for the two-field reduction; the capacitance is 1.
ReducedResult run_reduced(const ReducedModel& model, const Mesh& mesh,
                          const InitialPotential& v0, double w0,
                          const TargetTrajectory& target, double rho, double epsilon,
                          double delta, const IterationControls& c = {});

/// Solves the controlled potential equation over the full horizon with the
/// reaction coefficients interpolated in time from the saved fields.
StateField solve_potential_block(const StateField& f1_field, const StateField& f2_field,
                                 std::span<const double> v0_grid, const Mesh& mesh,
                                 const TargetTrajectory& target, double rho, double epsilon,
                                 double capacitance, double diffusivity,
                                 const SolverTolerances& tol);

/// Integrates the three gating ODEs at every space node, reading the
/// potential by piecewise-linear interpolation in time of the saved field.
/// Nodes are independent; with GatingExecution::openmp they are distributed
/// across threads and merged by node index, giving results bit-identical to
/// the serial path.
void integrate_gating_block(const StateField& v_field, const Mesh& mesh,
                            double n0, double m0, double h0,
                            const SolverTolerances& tol, GatingExecution exec,
                            StateField& n_out, StateField& m_out, StateField& h_out);

/// Single-species counterpart for the reduced system.
StateField integrate_reduced_gating(const ReducedModel& model, const StateField& v_field,
                                    const Mesh& mesh, double w0,
                                    const SolverTolerances& tol, GatingExecution exec);

} // namespace hhsmc
