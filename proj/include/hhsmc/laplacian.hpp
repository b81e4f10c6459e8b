#pragma once

#include <span>
#include <vector>

namespace hhsmc {

/// Tridiagonal matrix with rows (lower[i], diag[i], upper[i]);
/// lower[0] and upper[n-1] are unused and kept at zero.
struct TridiagonalMatrix {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    static TridiagonalMatrix zero(int n);

    [[nodiscard]] int size() const { return static_cast<int>(diag.size()); }

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y) const;
};

/// Reusable Thomas solver. The system matrix must be diagonally dominant
/// (no pivoting is performed).
class TridiagonalSolver {
public:
    /// Solves A x = b in place (b becomes x).
    void solve(const TridiagonalMatrix& a, std::span<double> b);

private:
    std::vector<double> scratch_;
};

/// Second-order Neumann Laplacian on a uniform grid: diffusivity times the
/// centered second difference, with mirror ghost nodes at both ends so the
/// boundary rows read 2*diffusivity*(u[1]-u[0])/dx^2 and symmetrically on
/// the right. Requires at least 3 nodes.
TridiagonalMatrix neumann_laplacian_matrix(int n, double dx, double diffusivity);

/// Applies the mirror-ghost Neumann Laplacian to u. Throws std::domain_error
/// when u has fewer than 3 entries.
std::vector<double> laplacian_neumann(std::span<const double> u, double dx, double diffusivity);

} // namespace hhsmc
