#pragma once

#include <span>
#include <vector>

namespace hhsmc {

/// Uniform space-time grid on [0, length] x [0, horizon].
/// xmesh has max_x nodes including both endpoints, tmesh has max_t saved
/// times including 0 and horizon.
struct Mesh {
    double length = 1.0;
    double horizon = 100.0;
    int max_x = 25;
    int max_t = 200;
    std::vector<double> xmesh;
    std::vector<double> tmesh;

    /// Builds and validates the grid; throws std::invalid_argument on
    /// max_x < 3, max_t < 2 or nonpositive extents.
    static Mesh uniform(double length, double horizon, int max_x, int max_t);

    [[nodiscard]] double dx() const { return xmesh[1] - xmesh[0]; }
    [[nodiscard]] double dt_saved() const { return tmesh[1] - tmesh[0]; }
};

/// Values of one scalar field on the saved grid, row i = time tmesh[i],
/// column j = node xmesh[j].
class StateField {
public:
    StateField() = default;
    StateField(int rows, int cols, double fill = 0.0);

    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }

    double& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    [[nodiscard]] double at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    [[nodiscard]] std::span<double> row(int i) { return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }
    [[nodiscard]] std::span<const double> row(int i) const { return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }

    [[nodiscard]] const std::vector<double>& data() const { return data_; }

    [[nodiscard]] bool all_finite() const;
    [[nodiscard]] double max_abs() const;
    [[nodiscard]] double max_abs_diff(const StateField& other) const;

    bool operator==(const StateField& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Piecewise-linear interpolation in time of column j; exact at saved nodes.
/// Throws std::domain_error when t lies outside [0, horizon] (beyond a small
/// roundoff slack).
double interp_time(const StateField& field, const Mesh& mesh, double t, int j);

} // namespace hhsmc
