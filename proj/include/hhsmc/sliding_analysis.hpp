#pragma once

#include <optional>

#include "hhsmc/coupled_solver.hpp"
#include "hhsmc/hh_model.hpp"
#include "hhsmc/mesh.hpp"

namespace hhsmc {

/// Upper bounds on the ionic coefficients over gating values inside the
/// box [0, n_M] x [0, m_M] x [0, h_M], built from the Lipschitz constants of
/// f1 and f2 with M = max(n_M, m_M, h_M). The f2 constants use the absolute
/// reversal potentials so f2M bounds |f2|.
struct CoefficientBounds {
    double f1M = 0.0;
    double f2M = 0.0;
    double L_f1 = 0.0;
    double L_f2 = 0.0;
};

CoefficientBounds coefficient_bounds(const HHParameters& p, const GatingBounds& gb);

/// Drift bound A = ||v*_t|| + delta*||v*_xx|| + f1M*||v*|| + f2M + f1M*dev0.
double bound_A(const TargetTrajectory& target, double dev0, double f1M, double f2M, double delta);

/// Thrown when the gain condition rho > A fails.
class GainConditionError : public std::domain_error {
public:
    GainConditionError(double rho, double A);
};

/// Predicted reaching time dev0 / (rho - A); requires rho > A.
double sliding_time(double rho, double A, double dev0);

/// Comparison envelope (dev0 - (rho - A) t)^+; requires rho > A.
double comparison_q(double t, double rho, double A, double dev0);

/// Everything Theorem-style sufficiency gives for one scenario. T_star is
/// set only when rho exceeds rho_min = A + dev0/horizon (and is then below
/// the horizon).
struct SlidingBound {
    double A = 0.0;
    double f1M = 0.0;
    double f2M = 0.0;
    double dev0 = 0.0;
    double rho_min = 0.0;
    std::optional<double> T_star;
};

SlidingBound sliding_bound(const TargetTrajectory& target, double dev0,
                           double f1M, double f2M, double delta,
                           double rho, double horizon);

/// Earliest saved time from which the potential stays within `band` of the
/// target at every later saved time and every node; nullopt when the tail
/// never settles.
std::optional<double> detect_sliding(const StateField& v, const Mesh& mesh,
                                     const TargetTrajectory& target, double band);

std::optional<double> detect_sliding(const SimulationResult& result, const Mesh& mesh,
                                     const TargetTrajectory& target, double band);
std::optional<double> detect_sliding(const ReducedResult& result, const Mesh& mesh,
                                     const TargetTrajectory& target, double band);

/// Default empirical band: the regularized relay admits an O(epsilon)
/// boundary layer and the outer iteration resolves v only to its threshold.
inline double default_sliding_band(double epsilon, double threshold) {
    return 2.0 * epsilon + 5.0 * threshold;
}

} // namespace hhsmc
