#pragma once

#include <cmath>
#include <stdexcept>

namespace hhsmc {

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
    [[nodiscard]] bool is_point() const { return lo == hi; }
};

/// The multivalued sign graph: {1} for r > 0, {-1} for r < 0, [-1,1] at 0.
inline Interval sign_multivalued(double r) {
    if (!std::isfinite(r)) {
        throw std::domain_error("sign_multivalued: non-finite argument");
    }
    if (r > 0.0) return {1.0, 1.0};
    if (r < 0.0) return {-1.0, -1.0};
    return {-1.0, 1.0};
}

/// Width of the piecewise-linear regularization of the sign graph.
/// Invariant: epsilon > 0.
struct SignEpsilon {
    double epsilon = 1e-4;
};

/// Piecewise-linear saturation: exactly +/-1 outside (-eps, eps), r/eps
/// inside. Continuous, odd, nondecreasing, Lipschitz with constant 1/eps.
inline double sign_eps(SignEpsilon s, double r) {
    if (r >= s.epsilon) return 1.0;
    if (r <= -s.epsilon) return -1.0;
    return r / s.epsilon;
}

/// Relay feedback current -rho * sign_eps(v - v_star).
inline double relay_current(SignEpsilon s, double rho, double v, double v_star) {
    return -rho * sign_eps(s, v - v_star);
}

} // namespace hhsmc
