#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace hhsmc::detail {

// RMS of err scaled by abs_tol + rel_tol * max(|y_a|, |y_b|) componentwise;
// the step passes the error test when this is <= 1.
inline double scaled_rms_norm(std::span<const double> err, std::span<const double> y_a,
                              std::span<const double> y_b, double rel, double abs) {
    double sum = 0.0;
    const size_t n = err.size();
    for (size_t i = 0; i < n; ++i) {
        const double scale = abs + rel * std::max(std::abs(y_a[i]), std::abs(y_b[i]));
        const double q = err[i] / scale;
        sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(n));
}

inline void check_time_span(double t0, double t1, std::span<const double> t_out) {
    if (!(t1 > t0)) {
        throw std::invalid_argument("integrator: need t1 > t0");
    }
    double prev = t0;
    for (double t : t_out) {
        if (t < prev - 1e-12 * (t1 - t0) || t > t1 + 1e-12 * (t1 - t0)) {
            throw std::invalid_argument("integrator: output times must be nondecreasing inside [t0, t1]");
        }
        prev = std::max(prev, t);
    }
}

} // namespace hhsmc::detail
