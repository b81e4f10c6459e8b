#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "hhsmc/integrators.hpp"
#include "integrator_detail.hpp"

namespace hhsmc {

namespace {

// Dormand-Prince 5(4) tableau. The fifth-order weights are the last stage
// row (first-same-as-last), e_* are the differences to the embedded
// fourth-order weights, d_* build the quartic interpolant.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;

constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseStep {
    // y(t + th*h) = c1 + th*(c2 + (1-th)*(c3 + th*(c4 + (1-th)*c5)))
    std::vector<double> cont1, cont2, cont3, cont4, cont5;

    void build(std::span<const double> y_old, std::span<const double> y_new,
               const std::array<std::vector<double>, 7>& k, double h) {
        const size_t n = y_old.size();
        cont1.resize(n);
        cont2.resize(n);
        cont3.resize(n);
        cont4.resize(n);
        cont5.resize(n);
        for (size_t i = 0; i < n; ++i) {
            const double ydiff = y_new[i] - y_old[i];
            const double bspl = h * k[0][i] - ydiff;
            cont1[i] = y_old[i];
            cont2[i] = ydiff;
            cont3[i] = bspl;
            cont4[i] = ydiff - h * k[6][i] - bspl;
            cont5[i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                            d6 * k[5][i] + d7 * k[6][i]);
        }
    }

    void eval(double th, std::span<double> out) const {
        const double th1 = 1.0 - th;
        for (size_t i = 0; i < cont1.size(); ++i) {
            out[i] = cont1[i] +
                     th * (cont2[i] + th1 * (cont3[i] + th * (cont4[i] + th1 * cont5[i])));
        }
    }
};

} // namespace

DenseTrajectory integrate_rk45(const OdeRhs& rhs, std::span<const double> y0,
                               double t0, double t1, std::span<const double> t_out,
                               const SolverTolerances& tol, const IntegratorOptions& opts) {
    tol.validate();
    detail::check_time_span(t0, t1, t_out);
    const size_t n = y0.size();
    const double span = t1 - t0;
    const double min_step = 1e-12 * span;

    DenseTrajectory traj;
    traj.times.assign(t_out.begin(), t_out.end());
    traj.states.resize(t_out.size());

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> y_new(n), y_stage(n), err(n), sample(n);
    std::array<std::vector<double>, 7> k;
    for (auto& ki : k) ki.resize(n);

    size_t out_idx = 0;
    auto emit_at_current = [&](double t_emit_limit) {
        while (out_idx < t_out.size() && t_out[out_idx] <= t_emit_limit) {
            traj.states[out_idx].assign(y.begin(), y.end());
            ++out_idx;
        }
    };

    rhs(t0, y, k[0]);
    ++traj.rhs_evaluations;
    emit_at_current(t0);

    // initial step: small fraction of the scale ratio |y|/|f|, bounded by the span
    double dt;
    {
        const double d0 = detail::scaled_rms_norm(y, y, y, tol.rel_tol, tol.abs_tol);
        const double d1n = detail::scaled_rms_norm(k[0], y, y, tol.rel_tol, tol.abs_tol);
        dt = (d0 > 1e-10 && d1n > 1e-10) ? 0.01 * d0 / d1n : 1e-6 * span;
        dt = std::min({dt, span, tol.max_step});
    }

    double t = t0;
    DenseStep dense;
    while (t < t1) {
        dt = std::min({dt, tol.max_step, t1 - t});
        if (opts.force_stop_at_outputs && out_idx < t_out.size() && t_out[out_idx] > t) {
            dt = std::min(dt, t_out[out_idx] - t);
        }
        if (dt < min_step) {
            throw SolverFailure("integrate_rk45: step underflow (problem too stiff?)", t, dt);
        }

        for (size_t i = 0; i < n; ++i) y_stage[i] = y[i] + dt * a21 * k[0][i];
        rhs(t + c2 * dt, y_stage, k[1]);
        for (size_t i = 0; i < n; ++i) y_stage[i] = y[i] + dt * (a31 * k[0][i] + a32 * k[1][i]);
        rhs(t + c3 * dt, y_stage, k[2]);
        for (size_t i = 0; i < n; ++i)
            y_stage[i] = y[i] + dt * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
        rhs(t + c4 * dt, y_stage, k[3]);
        for (size_t i = 0; i < n; ++i)
            y_stage[i] = y[i] + dt * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
        rhs(t + c5 * dt, y_stage, k[4]);
        for (size_t i = 0; i < n; ++i)
            y_stage[i] = y[i] + dt * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] +
                                      a64 * k[3][i] + a65 * k[4][i]);
        rhs(t + dt, y_stage, k[5]);
        for (size_t i = 0; i < n; ++i)
            y_new[i] = y[i] + dt * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] +
                                    a75 * k[4][i] + a76 * k[5][i]);
        rhs(t + dt, y_new, k[6]);
        traj.rhs_evaluations += 6;

        for (size_t i = 0; i < n; ++i) {
            err[i] = dt * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                           e6 * k[5][i] + e7 * k[6][i]);
        }
        const double err_norm = detail::scaled_rms_norm(err, y, y_new, tol.rel_tol, tol.abs_tol);
        if (!std::isfinite(err_norm)) {
            throw SolverFailure("integrate_rk45: non-finite state", t, dt);
        }

        if (err_norm <= 1.0) {
            const double t_new = t + dt;
            dense.build(y, y_new, k, dt);
            while (out_idx < t_out.size() && t_out[out_idx] <= t_new + 1e-14 * span) {
                const double th = std::clamp((t_out[out_idx] - t) / dt, 0.0, 1.0);
                traj.states[out_idx].resize(n);
                dense.eval(th, traj.states[out_idx]);
                ++out_idx;
            }
            t = t_new;
            y.swap(y_new);
            k[0].swap(k[6]);  // first-same-as-last
            ++traj.accepted_steps;
            const double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 10.0;
            dt *= std::clamp(factor, 0.2, 10.0);
        } else {
            ++traj.rejected_steps;
            dt *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
        }
    }

    // anything left is at t1 up to roundoff
    while (out_idx < t_out.size()) {
        traj.states[out_idx].assign(y.begin(), y.end());
        ++out_idx;
    }
    return traj;
}

} // namespace hhsmc
