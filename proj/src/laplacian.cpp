#include "hhsmc/laplacian.hpp"

#include <stdexcept>

namespace hhsmc {

TridiagonalMatrix TridiagonalMatrix::zero(int n) {
    TridiagonalMatrix m;
    m.lower.assign(n, 0.0);
    m.diag.assign(n, 0.0);
    m.upper.assign(n, 0.0);
    return m;
}

void TridiagonalMatrix::apply(std::span<const double> x, std::span<double> y) const {
    const int n = size();
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + upper[0] * x[1];
    for (int i = 1; i < n - 1; ++i) {
        y[i] = lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
    }
    y[n - 1] = lower[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
}

void TridiagonalSolver::solve(const TridiagonalMatrix& a, std::span<double> b) {
    const int n = a.size();
    scratch_.resize(n);
    // forward sweep
    double piv = a.diag[0];
    scratch_[0] = a.upper[0] / piv;
    b[0] /= piv;
    for (int i = 1; i < n; ++i) {
        piv = a.diag[i] - a.lower[i] * scratch_[i - 1];
        scratch_[i] = a.upper[i] / piv;
        b[i] = (b[i] - a.lower[i] * b[i - 1]) / piv;
    }
    // back substitution
    for (int i = n - 2; i >= 0; --i) {
        b[i] -= scratch_[i] * b[i + 1];
    }
}

TridiagonalMatrix neumann_laplacian_matrix(int n, double dx, double diffusivity) {
    if (n < 3) {
        throw std::domain_error("neumann_laplacian_matrix: need at least 3 nodes");
    }
    const double a = diffusivity / (dx * dx);
    TridiagonalMatrix m = TridiagonalMatrix::zero(n);
    m.diag[0] = -2.0 * a;
    m.upper[0] = 2.0 * a;
    for (int i = 1; i < n - 1; ++i) {
        m.lower[i] = a;
        m.diag[i] = -2.0 * a;
        m.upper[i] = a;
    }
    m.lower[n - 1] = 2.0 * a;
    m.diag[n - 1] = -2.0 * a;
    return m;
}

std::vector<double> laplacian_neumann(std::span<const double> u, double dx, double diffusivity) {
    const int n = static_cast<int>(u.size());
    if (n < 3) {
        throw std::domain_error("laplacian_neumann: need at least 3 nodes");
    }
    const double a = diffusivity / (dx * dx);
    std::vector<double> out(n);
    out[0] = 2.0 * a * (u[1] - u[0]);
    for (int i = 1; i < n - 1; ++i) {
        out[i] = a * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
    }
    out[n - 1] = 2.0 * a * (u[n - 2] - u[n - 1]);
    return out;
}

} // namespace hhsmc
