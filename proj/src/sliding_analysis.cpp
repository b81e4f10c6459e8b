#include "hhsmc/sliding_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hhsmc {

CoefficientBounds coefficient_bounds(const HHParameters& p, const GatingBounds& gb) {
    auto in_unit = [](double b, const char* name) {
        if (!(b > 0.0 && b <= 1.0)) {
            throw std::invalid_argument(std::string("coefficient_bounds: ") + name +
                                        " must lie in (0,1]");
        }
    };
    in_unit(gb.n_M, "n_M");
    in_unit(gb.m_M, "m_M");
    in_unit(gb.h_M, "h_M");

    const double M = std::max({gb.n_M, gb.m_M, gb.h_M});
    const double M2 = M * M, M3 = M2 * M;
    CoefficientBounds cb;
    cb.L_f1 = std::max({4.0 * M3 * p.g_K, 3.0 * M2 * M * p.g_Na, M3 * p.g_Na});
    cb.L_f2 = std::max({4.0 * M3 * p.g_K * std::abs(p.V_K), 3.0 * M2 * M * p.g_Na * std::abs(p.V_Na),
                        M3 * p.g_Na * std::abs(p.V_Na)});
    const double sum = gb.n_M + gb.m_M + gb.h_M;
    cb.f1M = f1(0.0, 0.0, 0.0, p) + cb.L_f1 * sum;
    cb.f2M = std::abs(f2(0.0, 0.0, 0.0, p)) + cb.L_f2 * sum;
    return cb;
}

double bound_A(const TargetTrajectory& target, double dev0, double f1M, double f2M, double delta) {
    return target.sup_time_derivative + delta * target.sup_space_curvature +
           f1M * target.sup_value + f2M + f1M * dev0;
}

GainConditionError::GainConditionError(double rho, double A)
    : std::domain_error("gain condition violated: rho = " + std::to_string(rho) +
                        " does not exceed A = " + std::to_string(A)) {}

double sliding_time(double rho, double A, double dev0) {
    if (!(rho > A)) throw GainConditionError(rho, A);
    return dev0 / (rho - A);
}

double comparison_q(double t, double rho, double A, double dev0) {
    if (!(rho > A)) throw GainConditionError(rho, A);
    return std::max(0.0, dev0 - (rho - A) * t);
}

SlidingBound sliding_bound(const TargetTrajectory& target, double dev0,
                           double f1M, double f2M, double delta,
                           double rho, double horizon) {
    SlidingBound b;
    b.f1M = f1M;
    b.f2M = f2M;
    b.dev0 = dev0;
    b.A = bound_A(target, dev0, f1M, f2M, delta);
    b.rho_min = b.A + dev0 / horizon;
    if (rho > b.rho_min) {
        b.T_star = sliding_time(rho, b.A, dev0);
    }
    return b;
}

std::optional<double> detect_sliding(const StateField& v, const Mesh& mesh,
                                     const TargetTrajectory& target, double band) {
    const int nt = v.rows();
    const int nx = v.cols();
    // scan backwards: onset is just after the last saved time that escapes the band
    int first_inside = nt;
    for (int i = nt - 1; i >= 0; --i) {
        double dev = 0.0;
        for (int j = 0; j < nx; ++j) {
            dev = std::max(dev, std::abs(v.at(i, j) - target.value_at_node(mesh.tmesh[i], j)));
        }
        if (dev > band) break;
        first_inside = i;
    }
    if (first_inside == nt) return std::nullopt;
    return mesh.tmesh[first_inside];
}

std::optional<double> detect_sliding(const SimulationResult& result, const Mesh& mesh,
                                     const TargetTrajectory& target, double band) {
    return detect_sliding(result.v, mesh, target, band);
}

std::optional<double> detect_sliding(const ReducedResult& result, const Mesh& mesh,
                                     const TargetTrajectory& target, double band) {
    return detect_sliding(result.v, mesh, target, band);
}

} // namespace hhsmc
