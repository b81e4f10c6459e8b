#include "hhsmc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hhsmc {

Mesh Mesh::uniform(double length, double horizon, int max_x, int max_t) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("Mesh: length must be positive");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("Mesh: horizon must be positive");
    }
    if (max_x < 3) {
        throw std::invalid_argument("Mesh: need at least 3 space nodes");
    }
    if (max_t < 2) {
        throw std::invalid_argument("Mesh: need at least 2 saved times");
    }
    Mesh m;
    m.length = length;
    m.horizon = horizon;
    m.max_x = max_x;
    m.max_t = max_t;
    m.xmesh.resize(max_x);
    for (int j = 0; j < max_x; ++j) {
        m.xmesh[j] = length * static_cast<double>(j) / (max_x - 1);
    }
    m.xmesh.back() = length;
    m.tmesh.resize(max_t);
    for (int i = 0; i < max_t; ++i) {
        m.tmesh[i] = horizon * static_cast<double>(i) / (max_t - 1);
    }
    m.tmesh.back() = horizon;
    return m;
}

StateField::StateField(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

bool StateField::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double StateField::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double StateField::max_abs_diff(const StateField& other) const {
    double m = 0.0;
    for (size_t k = 0; k < data_.size(); ++k) {
        m = std::max(m, std::abs(data_[k] - other.data_[k]));
    }
    return m;
}

double interp_time(const StateField& field, const Mesh& mesh, double t, int j) {
    const double slack = 1e-9 * std::max(1.0, mesh.horizon);
    if (!(t >= -slack) || !(t <= mesh.horizon + slack)) {
        throw std::domain_error("interp_time: time outside [0, horizon]");
    }
    const double tc = std::clamp(t, 0.0, mesh.horizon);
    const double dt = mesh.dt_saved();
    int i = static_cast<int>(tc / dt);
    i = std::clamp(i, 0, mesh.max_t - 2);
    const double t0 = mesh.tmesh[i];
    const double t1 = mesh.tmesh[i + 1];
    const double th = (tc - t0) / (t1 - t0);
    return (1.0 - th) * field.at(i, j) + th * field.at(i + 1, j);
}

} // namespace hhsmc
