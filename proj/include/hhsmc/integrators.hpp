#pragma once

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hhsmc/laplacian.hpp"

namespace hhsmc {

/// Local error tolerances for the adaptive integrators. The defaults are
/// far below the outer block-iteration threshold: repetitive-firing runs
/// amplify inner error by several orders of magnitude, and looser settings
/// leave the outer residual stuck above its stopping level.
struct SolverTolerances {
    double rel_tol = 1e-9;
    double abs_tol = 1e-9;
    double max_step = std::numeric_limits<double>::infinity();

    void validate() const;
};

/// Thrown when an integration cannot be continued (step underflow, Newton
/// divergence after repeated step halving, non-finite right-hand side).
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double t, double dt);

    [[nodiscard]] double time() const { return t_; }
    [[nodiscard]] double step() const { return dt_; }

private:
    double t_;
    double dt_;
};

/// Trajectory sampled at the requested output times.
struct DenseTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    long accepted_steps = 0;
    long rejected_steps = 0;
    long rhs_evaluations = 0;
};

/// dydt = f(t, y); dydt is preallocated to the state size.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Diagonal of the Jacobian of the pointwise (reaction) part of the
/// right-hand side; used by the implicit integrator's Newton solves.
using DiagJacobian = std::function<void(double t, std::span<const double> y, std::span<double> jac_diag)>;

struct IntegratorOptions {
    /// When set, accepted steps are clamped so every output time is also a
    /// step endpoint instead of being filled from the interpolant.
    bool force_stop_at_outputs = false;
    /// Newton iteration cap per implicit stage (implicit integrator only).
    int max_newton_iterations = 12;
    /// Consecutive step halvings tolerated before the implicit integrator
    /// gives up.
    int max_step_retries = 60;
};

/// Explicit embedded Dormand-Prince 5(4) pair with adaptive step control and
/// fourth-order dense output. Output times must be nondecreasing and lie in
/// [t0, t1].
DenseTrajectory integrate_rk45(const OdeRhs& rhs, std::span<const double> y0,
                               double t0, double t1, std::span<const double> t_out,
                               const SolverTolerances& tol,
                               const IntegratorOptions& opts = {});

/// One-step A/L-stable implicit integrator (trapezoidal stage composed with
/// a second-order backward-differentiation stage) for method-of-lines
/// systems. `linear_part` is the constant tridiagonal coupling already
/// contained in `rhs` (pass TridiagonalMatrix::zero for none);
/// `reaction_jacobian_diag` supplies the diagonal derivative of the
/// remaining pointwise terms. Newton solves use the resulting
/// tridiagonal-plus-diagonal Jacobian; nonconvergence triggers step halving
/// and eventually SolverFailure.
DenseTrajectory integrate_stiff_mol(const OdeRhs& rhs,
                                    const DiagJacobian& reaction_jacobian_diag,
                                    const TridiagonalMatrix& linear_part,
                                    std::span<const double> y0,
                                    double t0, double t1, std::span<const double> t_out,
                                    const SolverTolerances& tol,
                                    const IntegratorOptions& opts = {});

} // namespace hhsmc
