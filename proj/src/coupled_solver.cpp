#include "hhsmc/coupled_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hhsmc/laplacian.hpp"
#include "hhsmc/relay.hpp"

namespace hhsmc {

// ---------------------------------------------------------------- targets

TargetTrajectory TargetTrajectory::constant(double c) {
    TargetTrajectory t;
    t.kind = TargetKind::constant;
    t.constant_value = c;
    t.sup_value = std::abs(c);
    return t;
}

TargetTrajectory TargetTrajectory::time_sinusoid(double amplitude, double omega, double offset) {
    TargetTrajectory t;
    t.kind = TargetKind::time_sinusoid;
    t.amplitude = amplitude;
    t.omega = omega;
    t.offset = offset;
    t.sup_value = std::abs(amplitude) + std::abs(offset);
    t.sup_time_derivative = std::abs(amplitude * omega);
    return t;
}

TargetTrajectory TargetTrajectory::space_profile(std::vector<double> values_on_grid, double dx) {
    if (values_on_grid.size() < 3) {
        throw std::invalid_argument("TargetTrajectory: space profile needs at least 3 nodes");
    }
    TargetTrajectory t;
    t.kind = TargetKind::space_profile;
    t.profile = std::move(values_on_grid);
    for (double v : t.profile) t.sup_value = std::max(t.sup_value, std::abs(v));
    const auto curv = laplacian_neumann(t.profile, dx, 1.0);
    for (double c : curv) t.sup_space_curvature = std::max(t.sup_space_curvature, std::abs(c));
    return t;
}

double TargetTrajectory::value_at_node(double t, int j) const {
    switch (kind) {
        case TargetKind::constant: return constant_value;
        case TargetKind::time_sinusoid: return amplitude * std::sin(omega * t) + offset;
        case TargetKind::space_profile: return profile[static_cast<size_t>(j)];
    }
    return 0.0;
}

std::pair<double, double> TargetTrajectory::range_over(double horizon) const {
    switch (kind) {
        case TargetKind::constant:
            return {constant_value, constant_value};
        case TargetKind::space_profile: {
            auto [lo, hi] = std::minmax_element(profile.begin(), profile.end());
            return {*lo, *hi};
        }
        case TargetKind::time_sinusoid: {
            if (amplitude == 0.0 || omega == 0.0) return {offset, offset};
            const double theta = std::abs(omega) * horizon;
            // range of sin on [0, theta]
            double s_hi = theta >= std::numbers::pi / 2 ? 1.0 : std::sin(theta);
            double s_lo = theta >= 1.5 * std::numbers::pi ? -1.0 : std::min(0.0, std::sin(theta));
            if (omega < 0.0) std::swap(s_hi, s_lo), s_hi = -s_hi, s_lo = -s_lo;
            const double v1 = amplitude * s_lo + offset;
            const double v2 = amplitude * s_hi + offset;
            return {std::min(v1, v2), std::max(v1, v2)};
        }
    }
    return {0.0, 0.0};
}

double initial_deviation_sup(const TargetTrajectory& target,
                             std::span<const double> v0_on_grid, double horizon) {
    const auto [lo, hi] = target.range_over(horizon);
    double dev = 0.0;
    for (size_t j = 0; j < v0_on_grid.size(); ++j) {
        if (target.kind == TargetKind::space_profile) {
            dev = std::max(dev, std::abs(v0_on_grid[j] - target.profile[j]));
        } else {
            dev = std::max(dev, std::max(std::abs(v0_on_grid[j] - lo), std::abs(v0_on_grid[j] - hi)));
        }
    }
    return dev;
}

// ------------------------------------------------------- initial potential

InitialPotential InitialPotential::uniform(double c) {
    InitialPotential p;
    p.kind = Kind::uniform;
    p.constant_value = c;
    return p;
}

InitialPotential InitialPotential::space_sinusoid(double amplitude, double wavenumber, double offset) {
    InitialPotential p;
    p.kind = Kind::space_sinusoid;
    p.amplitude = amplitude;
    p.wavenumber = wavenumber;
    p.offset = offset;
    return p;
}

double InitialPotential::value(double x) const {
    if (kind == Kind::uniform) return constant_value;
    return amplitude * std::sin(wavenumber * x) + offset;
}

// ---------------------------------------------------------------- scenario

void Scenario::validate() const {
    params.validate();
    auto fraction = [](double w, const char* name) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw std::invalid_argument(std::string("Scenario: ") + name + " must lie in [0,1]");
        }
    };
    fraction(n0, "n0");
    fraction(m0, "m0");
    fraction(h0, "h0");
    if (static_cast<int>(mesh.xmesh.size()) != mesh.max_x ||
        static_cast<int>(mesh.tmesh.size()) != mesh.max_t) {
        throw std::invalid_argument("Scenario: mesh vectors inconsistent with sizes");
    }
    if (target.kind == TargetKind::space_profile &&
        target.profile.size() != mesh.xmesh.size()) {
        throw std::invalid_argument("Scenario: target profile does not match xmesh");
    }
}

const char* stop_reason_name(StopReason reason) {
    switch (reason) {
        case StopReason::converged: return "converged";
        case StopReason::max_iterations: return "max_iterations";
        case StopReason::time_budget: return "time_budget";
    }
    return "?";
}

SimulationError::SimulationError(const std::string& what, int iteration)
    : std::runtime_error(what + " (outer iteration " + std::to_string(iteration) + ")"),
      iteration_(iteration) {}

// --------------------------------------------------------- potential block

StateField solve_potential_block(const StateField& f1_field, const StateField& f2_field,
                                 std::span<const double> v0_grid, const Mesh& mesh,
                                 const TargetTrajectory& target, double rho, double epsilon,
                                 double capacitance, double diffusivity,
                                 const SolverTolerances& tol) {
    const int nx = mesh.max_x;
    const int nt = mesh.max_t;
    const TridiagonalMatrix lap = neumann_laplacian_matrix(nx, mesh.dx(), diffusivity / capacitance);
    const SignEpsilon se{epsilon};
    const double dt_saved = mesh.dt_saved();

    auto bracket = [&](double t, int& i, double& th) {
        const double tc = std::clamp(t, 0.0, mesh.horizon);
        i = std::clamp(static_cast<int>(tc / dt_saved), 0, nt - 2);
        th = std::clamp((tc - mesh.tmesh[i]) / (mesh.tmesh[i + 1] - mesh.tmesh[i]), 0.0, 1.0);
    };

    OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
        lap.apply(y, dydt);
        int i;
        double th;
        bracket(t, i, th);
        for (int j = 0; j < nx; ++j) {
            const double c1 = (1.0 - th) * f1_field.at(i, j) + th * f1_field.at(i + 1, j);
            const double c2 = (1.0 - th) * f2_field.at(i, j) + th * f2_field.at(i + 1, j);
            const double vs = target.value_at_node(t, j);
            dydt[j] += (-c1 * y[j] + c2 - rho * sign_eps(se, y[j] - vs)) / capacitance;
        }
    };

    DiagJacobian jac = [&](double t, std::span<const double> y, std::span<double> out) {
        int i;
        double th;
        bracket(t, i, th);
        for (int j = 0; j < nx; ++j) {
            const double c1 = (1.0 - th) * f1_field.at(i, j) + th * f1_field.at(i + 1, j);
            const double vs = target.value_at_node(t, j);
            const double relay_slope = std::abs(y[j] - vs) < epsilon ? rho / epsilon : 0.0;
            out[j] = (-c1 - relay_slope) / capacitance;
        }
    };

    const DenseTrajectory traj =
        integrate_stiff_mol(rhs, jac, lap, v0_grid, 0.0, mesh.horizon, mesh.tmesh, tol);

    StateField v(nt, nx);
    for (int i = 0; i < nt; ++i) {
        std::copy(traj.states[i].begin(), traj.states[i].end(), v.row(i).begin());
    }
    return v;
}

// ------------------------------------------------------------ gating block

namespace {

// One scalar relaxation ODE w' = -h1(v(t)) w + h2(v(t)) along column j.
template <typename H1, typename H2>
std::vector<double> integrate_scalar_gating(const H1& h1f, const H2& h2f, double w0,
                                            const StateField& v_field, const Mesh& mesh, int j,
                                            const SolverTolerances& tol) {
    OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
        const double v = interp_time(v_field, mesh, t, j);
        dydt[0] = -h1f(v) * y[0] + h2f(v);
    };
    const double y0[1] = {w0};
    const DenseTrajectory traj = integrate_rk45(rhs, y0, 0.0, mesh.horizon, mesh.tmesh, tol);
    std::vector<double> out(mesh.max_t);
    for (int i = 0; i < mesh.max_t; ++i) out[i] = traj.states[i][0];
    return out;
}

// Runs `work(j)` over all nodes, either serially or under OpenMP. Exceptions
// are captured per node and rethrown (first node wins) after the loop so
// they never unwind across the parallel region.
template <typename Work>
void for_each_node(int nx, GatingExecution exec, Work&& work) {
    std::vector<std::string> errors(nx);
    bool failed = false;
    if (exec == GatingExecution::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < nx; ++j) {
            try {
                work(j);
            } catch (const std::exception& e) {
                errors[j] = e.what();
#pragma omp atomic write
                failed = true;
            }
        }
    } else {
        for (int j = 0; j < nx; ++j) {
            try {
                work(j);
            } catch (const std::exception& e) {
                errors[j] = e.what();
                failed = true;
            }
        }
    }
    if (failed) {
        for (int j = 0; j < nx; ++j) {
            if (!errors[j].empty()) {
                throw std::runtime_error("gating integration failed at node " + std::to_string(j) +
                                         ": " + errors[j]);
            }
        }
    }
}

} // namespace

void integrate_gating_block(const StateField& v_field, const Mesh& mesh,
                            double n0, double m0, double h0,
                            const SolverTolerances& tol, GatingExecution exec,
                            StateField& n_out, StateField& m_out, StateField& h_out) {
    const int nx = mesh.max_x;
    const int nt = mesh.max_t;
    n_out = StateField(nt, nx);
    m_out = StateField(nt, nx);
    h_out = StateField(nt, nx);

    for_each_node(nx, exec, [&](int j) {
        const struct {
            GatingKind kind;
            double w0;
            StateField* out;
        } species[3] = {{GatingKind::n, n0, &n_out},
                        {GatingKind::m, m0, &m_out},
                        {GatingKind::h, h0, &h_out}};
        for (const auto& sp : species) {
            const GatingKind k = sp.kind;
            const auto column = integrate_scalar_gating(
                [k](double v) { return h1k(k, v); }, [k](double v) { return h2k(k, v); },
                sp.w0, v_field, mesh, j, tol);
            for (int i = 0; i < nt; ++i) sp.out->at(i, j) = column[i];
        }
    });
}

StateField integrate_reduced_gating(const ReducedModel& model, const StateField& v_field,
                                    const Mesh& mesh, double w0,
                                    const SolverTolerances& tol, GatingExecution exec) {
    const int nx = mesh.max_x;
    StateField w(mesh.max_t, nx);
    for_each_node(nx, exec, [&](int j) {
        auto h1f = [&](double v) {
            const double r = model.h1(v);
            if (!(r > 0.0)) throw std::domain_error("reduced model: h1 must be positive");
            return r;
        };
        auto h2f = [&](double v) {
            const double r = model.h2(v);
            if (!(r > 0.0)) throw std::domain_error("reduced model: h2 must be positive");
            return r;
        };
        const auto column = integrate_scalar_gating(h1f, h2f, w0, v_field, mesh, j, tol);
        for (int i = 0; i < mesh.max_t; ++i) w.at(i, j) = column[i];
    });
    return w;
}

// ----------------------------------------------------------- outer Picard

namespace {

void check_controls(const IterationControls& c) {
    c.tolerances.validate();
    if (!(c.threshold > 0.0)) throw std::invalid_argument("IterationControls: threshold must be positive");
    if (c.max_iterations < 1) throw std::invalid_argument("IterationControls: max_iterations must be >= 1");
    if (!(c.time_budget_seconds > 0.0)) throw std::invalid_argument("IterationControls: time budget must be positive");
}

StateField constant_in_time(const Mesh& mesh, std::span<const double> row_values) {
    StateField f(mesh.max_t, mesh.max_x);
    for (int i = 0; i < mesh.max_t; ++i) {
        std::copy(row_values.begin(), row_values.end(), f.row(i).begin());
    }
    return f;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

SimulationResult run_simulation(const Scenario& s, const IterationControls& c) {
    s.validate();
    check_controls(c);
    const auto t_start = std::chrono::steady_clock::now();
    const Mesh& mesh = s.mesh;
    const int nx = mesh.max_x, nt = mesh.max_t;

    std::vector<double> v0_grid(nx);
    for (int j = 0; j < nx; ++j) v0_grid[j] = s.v0.value(mesh.xmesh[j]);

    StateField v_prev = constant_in_time(mesh, v0_grid);
    std::vector<double> fill(nx);
    std::fill(fill.begin(), fill.end(), s.n0);
    StateField nf = constant_in_time(mesh, fill);
    std::fill(fill.begin(), fill.end(), s.m0);
    StateField mf = constant_in_time(mesh, fill);
    std::fill(fill.begin(), fill.end(), s.h0);
    StateField hf = constant_in_time(mesh, fill);

    StateField f1f(nt, nx), f2f(nt, nx);
    SimulationResult res;

    for (int iter = 1;; ++iter) {
        for (int i = 0; i < nt; ++i) {
            for (int j = 0; j < nx; ++j) {
                f1f.at(i, j) = f1(nf.at(i, j), mf.at(i, j), hf.at(i, j), s.params);
                f2f.at(i, j) = f2(nf.at(i, j), mf.at(i, j), hf.at(i, j), s.params);
            }
        }

        StateField v_field;
        try {
            v_field = solve_potential_block(f1f, f2f, v0_grid, mesh, s.target, s.params.rho,
                                            s.params.epsilon, s.params.C_M, s.params.delta,
                                            c.tolerances);
            integrate_gating_block(v_field, mesh, s.n0, s.m0, s.h0, c.tolerances, c.gating,
                                   nf, mf, hf);
        } catch (const std::exception& e) {
            throw SimulationError(std::string("inner solver failure: ") + e.what(), iter);
        }
        if (!v_field.all_finite() || !nf.all_finite() || !mf.all_finite() || !hf.all_finite()) {
            throw SimulationError("non-finite field after solve", iter);
        }

        const double residual = v_field.max_abs_diff(v_prev);
        res.residual_trace.push_back(residual);
        res.iterations = iter;
        v_prev = std::move(v_field);

        if (residual < c.threshold) {
            res.stop_reason = StopReason::converged;
            break;
        }
        if (iter >= c.max_iterations) {
            res.stop_reason = StopReason::max_iterations;
            break;
        }
        if (seconds_since(t_start) > c.time_budget_seconds) {
            res.stop_reason = StopReason::time_budget;
            break;
        }
    }

    res.v = std::move(v_prev);
    res.n = std::move(nf);
    res.m = std::move(mf);
    res.h = std::move(hf);
    res.elapsed_seconds = seconds_since(t_start);
    return res;
}

ReducedResult run_reduced(const ReducedModel& model, const Mesh& mesh,
                          const InitialPotential& v0, double w0,
                          const TargetTrajectory& target, double rho, double epsilon,
                          double delta, const IterationControls& c) {
    check_controls(c);
    if (!(model.a > 0.0)) throw std::invalid_argument("run_reduced: lower bound a must be positive");
    if (!(rho >= 0.0)) throw std::invalid_argument("run_reduced: rho must be nonnegative");
    if (!(epsilon > 0.0)) throw std::invalid_argument("run_reduced: epsilon must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("run_reduced: delta must be positive");
    const auto t_start = std::chrono::steady_clock::now();
    const int nx = mesh.max_x, nt = mesh.max_t;

    std::vector<double> v0_grid(nx);
    for (int j = 0; j < nx; ++j) v0_grid[j] = v0.value(mesh.xmesh[j]);

    StateField v_prev = constant_in_time(mesh, v0_grid);
    std::vector<double> w0_row(nx, w0);
    StateField wf = constant_in_time(mesh, w0_row);

    StateField f1f(nt, nx), f2f(nt, nx);
    ReducedResult res;

    for (int iter = 1;; ++iter) {
        for (int i = 0; i < nt; ++i) {
            for (int j = 0; j < nx; ++j) {
                const double c1 = model.f1(wf.at(i, j));
                if (!(c1 >= model.a)) {
                    throw SimulationError("reduced model: f1 fell below its lower bound", iter);
                }
                f1f.at(i, j) = c1;
                f2f.at(i, j) = model.f2(wf.at(i, j));
            }
        }

        StateField v_field;
        try {
            // the reduced formulation fixes the capacitance at 1
            v_field = solve_potential_block(f1f, f2f, v0_grid, mesh, target, rho, epsilon,
                                            1.0, delta, c.tolerances);
        } catch (const std::exception& e) {
            throw SimulationError(std::string("inner solver failure: ") + e.what(), iter);
        }
        try {
            wf = integrate_reduced_gating(model, v_field, mesh, w0, c.tolerances, c.gating);
        } catch (const std::exception& e) {
            throw SimulationError(std::string("inner solver failure: ") + e.what(), iter);
        }
        if (!v_field.all_finite() || !wf.all_finite()) {
            throw SimulationError("non-finite field after solve", iter);
        }

        const double residual = v_field.max_abs_diff(v_prev);
        res.residual_trace.push_back(residual);
        res.iterations = iter;
        v_prev = std::move(v_field);

        if (residual < c.threshold) {
            res.stop_reason = StopReason::converged;
            break;
        }
        if (iter >= c.max_iterations) {
            res.stop_reason = StopReason::max_iterations;
            break;
        }
        if (seconds_since(t_start) > c.time_budget_seconds) {
            res.stop_reason = StopReason::time_budget;
            break;
        }
    }

    res.v = std::move(v_prev);
    res.w = std::move(wf);
    res.elapsed_seconds = seconds_since(t_start);
    return res;
}

} // namespace hhsmc
