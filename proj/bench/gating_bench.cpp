// Times the per-node gating integrations with the serial reference path and
// the OpenMP path on growing meshes, and checks that both produce the same
// bits.

#include <cmath>
#include <cstdio>
#include <omp.h>

#include "hhsmc/coupled_solver.hpp"

using namespace hhsmc;

namespace {

StateField synthetic_potential(const Mesh& mesh) {
    StateField v(mesh.max_t, mesh.max_x);
    for (int i = 0; i < mesh.max_t; ++i) {
        for (int j = 0; j < mesh.max_x; ++j) {
            v.at(i, j) = 40.0 * std::exp(-0.2 * mesh.tmesh[i]) *
                             std::cos(3.0 * mesh.xmesh[j]) +
                         5.0 * std::sin(0.8 * mesh.tmesh[i]);
        }
    }
    return v;
}

double time_block(const StateField& v, const Mesh& mesh, GatingExecution exec,
                  StateField& n, StateField& m, StateField& h) {
    const SolverTolerances tol;
    double best = 1e30;
    for (int rep = 0; rep < 3; ++rep) {
        const double t0 = omp_get_wtime();
        integrate_gating_block(v, mesh, 0.45, 0.03, 0.397, tol, exec, n, m, h);
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

} // namespace

int main() {
    std::printf("gating block benchmark, %d OpenMP threads\n", omp_get_max_threads());
    std::printf("%8s %8s %12s %12s %9s %s\n", "maxX", "maxT", "serial [s]", "openmp [s]",
                "speedup", "bitwise");
    for (int nx : {64, 256, 1024}) {
        const Mesh mesh = Mesh::uniform(1.0, 25.0, nx, 201);
        const StateField v = synthetic_potential(mesh);
        StateField n1, m1, h1, n2, m2, h2;
        const double ts = time_block(v, mesh, GatingExecution::serial, n1, m1, h1);
        const double tp = time_block(v, mesh, GatingExecution::openmp, n2, m2, h2);
        const bool same = n1 == n2 && m1 == m2 && h1 == h2;
        std::printf("%8d %8d %12.4f %12.4f %8.2fx %s\n", nx, mesh.max_t, ts, tp, ts / tp,
                    same ? "yes" : "NO");
        if (!same) return 1;
    }
    return 0;
}
