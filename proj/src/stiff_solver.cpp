#include <algorithm>
#include <cmath>
#include <vector>

#include "hhsmc/integrators.hpp"
#include "integrator_detail.hpp"

namespace hhsmc {

namespace {

// Composite trapezoidal / BDF2 step (both implicit stages share the
// coefficient d = gamma/2, so one Jacobian shift works for the whole step).
const double kGamma = 2.0 - std::sqrt(2.0);
const double kD = kGamma / 2.0;
const double kCGamma = 1.0 / (kGamma * (2.0 - kGamma));

// Difference between the second-order weights and the unique third-order
// quadrature through the stage abscissae {0, gamma, 1}; scaled by h it
// estimates the local error.
struct ErrorWeights {
    double e1, e2, e3;
    ErrorWeights() {
        const double b1 = std::sqrt(2.0) / 4.0, b2 = b1, b3 = kD;
        const double bh2 = 1.0 / (6.0 * kGamma * (1.0 - kGamma));
        const double bh3 = 0.5 - kGamma * bh2;
        const double bh1 = 1.0 - bh2 - bh3;
        e1 = b1 - bh1;
        e2 = b2 - bh2;
        e3 = b3 - bh3;
    }
};
const ErrorWeights kErr;

class StiffStepper {
public:
    StiffStepper(const OdeRhs& rhs, const DiagJacobian& jac_diag,
                 const TridiagonalMatrix& linear_part, const SolverTolerances& tol)
        : rhs_(rhs), jac_diag_(jac_diag), linear_(linear_part), tol_(tol),
          n_(linear_part.size()) {
        jacobian_ = TridiagonalMatrix::zero(n_);
        f_work_.resize(n_);
        jd_work_.resize(n_);
        delta_.resize(n_);
        residual_.resize(n_);
    }

    long rhs_evaluations = 0;

    // Solves u = z + d*h*f(t_stage, u) in place of u (u holds the initial
    // guess). Returns false when Newton stalls.
    bool solve_stage(double t_stage, double dh, std::span<const double> z,
                     std::span<const double> scale_base, std::vector<double>& u,
                     int max_iters) {
        double prev_norm = std::numeric_limits<double>::infinity();
        for (int it = 0; it < max_iters; ++it) {
            rhs_(t_stage, u, f_work_);
            ++rhs_evaluations;
            for (int i = 0; i < n_; ++i) {
                residual_[i] = z[i] + dh * f_work_[i] - u[i];
            }
            jac_diag_(t_stage, u, jd_work_);
            for (int i = 0; i < n_; ++i) {
                jacobian_.diag[i] = 1.0 - dh * (linear_.diag[i] + jd_work_[i]);
                jacobian_.lower[i] = -dh * linear_.lower[i];
                jacobian_.upper[i] = -dh * linear_.upper[i];
            }
            std::copy(residual_.begin(), residual_.end(), delta_.begin());
            thomas_.solve(jacobian_, delta_);
            for (int i = 0; i < n_; ++i) u[i] += delta_[i];
            const double norm =
                detail::scaled_rms_norm(delta_, scale_base, u, tol_.rel_tol, tol_.abs_tol);
            if (!std::isfinite(norm)) return false;
            if (norm <= 0.05) return true;
            if (norm > 4.0 * prev_norm) return false;  // diverging
            prev_norm = norm;
        }
        return false;
    }

    void filter_estimate(std::span<double> est) {
        // Damp the raw estimate through the last factored shift so stiff
        // components do not drive the step to zero.
        thomas_.solve(jacobian_, est);
    }

private:
    const OdeRhs& rhs_;
    const DiagJacobian& jac_diag_;
    const TridiagonalMatrix& linear_;
    const SolverTolerances& tol_;
    int n_;
    TridiagonalMatrix jacobian_;
    TridiagonalSolver thomas_;
    std::vector<double> f_work_, jd_work_, delta_, residual_;
};

// Cubic Hermite in the anchored form y0 + th*dy + th(1-th)[(1-th)a + th*b];
// constants and endpoints are reproduced exactly.
void hermite_eval(double th, double h, std::span<const double> y0, std::span<const double> f0,
                  std::span<const double> y1, std::span<const double> f1, std::span<double> out) {
    const double th1 = 1.0 - th;
    for (size_t i = 0; i < y0.size(); ++i) {
        const double dy = y1[i] - y0[i];
        const double a = h * f0[i] - dy;
        const double b = dy - h * f1[i];
        out[i] = y0[i] + th * (dy + th1 * (th1 * a + th * b));
    }
}

} // namespace

DenseTrajectory integrate_stiff_mol(const OdeRhs& rhs, const DiagJacobian& reaction_jacobian_diag,
                                    const TridiagonalMatrix& linear_part,
                                    std::span<const double> y0, double t0, double t1,
                                    std::span<const double> t_out, const SolverTolerances& tol,
                                    const IntegratorOptions& opts) {
    tol.validate();
    detail::check_time_span(t0, t1, t_out);
    const int n = static_cast<int>(y0.size());
    if (linear_part.size() != n) {
        throw std::invalid_argument("integrate_stiff_mol: linear part size mismatch");
    }
    const double span = t1 - t0;
    const double min_step = 1e-12 * span;

    DenseTrajectory traj;
    traj.times.assign(t_out.begin(), t_out.end());
    traj.states.resize(t_out.size());

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> f_old(n), f_new(n), u_gamma(n), u_new(n), z(n), est(n), f_gamma(n);

    StiffStepper stepper(rhs, reaction_jacobian_diag, linear_part, tol);

    size_t out_idx = 0;
    while (out_idx < t_out.size() && t_out[out_idx] <= t0) {
        traj.states[out_idx].assign(y.begin(), y.end());
        ++out_idx;
    }

    rhs(t0, y, f_old);
    ++stepper.rhs_evaluations;

    double dt;
    {
        const double d0 = detail::scaled_rms_norm(y, y, y, tol.rel_tol, tol.abs_tol);
        const double d1n = detail::scaled_rms_norm(f_old, y, y, tol.rel_tol, tol.abs_tol);
        dt = (d0 > 1e-10 && d1n > 1e-10) ? 0.01 * d0 / d1n : 1e-6 * span;
        dt = std::min({dt, span, tol.max_step});
    }

    double t = t0;
    int consecutive_failures = 0;
    while (t < t1) {
        dt = std::min({dt, tol.max_step, t1 - t});
        if (opts.force_stop_at_outputs && out_idx < t_out.size() && t_out[out_idx] > t) {
            dt = std::min(dt, t_out[out_idx] - t);
        }
        if (dt < min_step || consecutive_failures > opts.max_step_retries) {
            throw SolverFailure("integrate_stiff_mol: Newton repeatedly failed / step underflow", t, dt);
        }
        const double dh = kD * dt;

        // trapezoidal half: u_gamma = z + dh*f(t+gamma*dt, u_gamma)
        for (int i = 0; i < n; ++i) z[i] = y[i] + dh * f_old[i];
        for (int i = 0; i < n; ++i) u_gamma[i] = y[i] + kGamma * dt * f_old[i];
        if (!stepper.solve_stage(t + kGamma * dt, dh, z, y, u_gamma,
                                 opts.max_newton_iterations)) {
            dt *= 0.5;
            ++consecutive_failures;
            ++traj.rejected_steps;
            continue;
        }
        for (int i = 0; i < n; ++i) f_gamma[i] = (u_gamma[i] - z[i]) / dh;

        // BDF2 half: u_new = c_gamma*u_gamma + (1-c_gamma)*y + dh*f(t+dt, u_new),
        // written so a stationary state passes through untouched
        for (int i = 0; i < n; ++i) z[i] = y[i] + kCGamma * (u_gamma[i] - y[i]);
        for (int i = 0; i < n; ++i) u_new[i] = u_gamma[i] + (1.0 - kGamma) * dt * f_gamma[i];
        if (!stepper.solve_stage(t + dt, dh, z, y, u_new, opts.max_newton_iterations)) {
            dt *= 0.5;
            ++consecutive_failures;
            ++traj.rejected_steps;
            continue;
        }
        rhs(t + dt, u_new, f_new);
        ++stepper.rhs_evaluations;

        for (int i = 0; i < n; ++i) {
            est[i] = dt * (kErr.e1 * f_old[i] + kErr.e2 * f_gamma[i] + kErr.e3 * f_new[i]);
        }
        stepper.filter_estimate(est);
        const double err_norm = detail::scaled_rms_norm(est, y, u_new, tol.rel_tol, tol.abs_tol);
        if (!std::isfinite(err_norm)) {
            throw SolverFailure("integrate_stiff_mol: non-finite state", t, dt);
        }

        if (err_norm <= 1.0) {
            consecutive_failures = 0;
            const double t_new = t + dt;
            while (out_idx < t_out.size() && t_out[out_idx] <= t_new + 1e-14 * span) {
                const double th = std::clamp((t_out[out_idx] - t) / dt, 0.0, 1.0);
                traj.states[out_idx].resize(n);
                hermite_eval(th, dt, y, f_old, u_new, f_new, traj.states[out_idx]);
                ++out_idx;
            }
            t = t_new;
            y.swap(u_new);
            f_old.swap(f_new);
            ++traj.accepted_steps;
            const double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -1.0 / 3.0) : 2.5;
            dt *= std::clamp(factor, 0.2, 2.5);
        } else {
            ++traj.rejected_steps;
            ++consecutive_failures;
            dt *= std::clamp(0.9 * std::pow(err_norm, -1.0 / 3.0), 0.2, 0.9);
        }
    }

    while (out_idx < t_out.size()) {
        traj.states[out_idx].assign(y.begin(), y.end());
        ++out_idx;
    }
    traj.rhs_evaluations = stepper.rhs_evaluations;
    return traj;
}

} // namespace hhsmc
