#include "hhsmc/hh_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hhsmc {

namespace {

void require_finite(double v, const char* who) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(who) + ": non-finite argument");
    }
}

// u / (e^u - 1), continuous across u = 0. The series branch inverts
// e^u - 1 = u*(1 + u/2 + u^2/6 + ...); with |u| < 1e-4 the truncation is
// below 1e-13 relative.
double expm1_ratio(double u) {
    if (std::abs(u) < 1e-4) {
        return 1.0 / (1.0 + u * (0.5 + u / 6.0));
    }
    return u / std::expm1(u);
}

} // namespace

void HHParameters::validate() const {
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw std::invalid_argument(std::string("HHParameters: ") + name + " must be positive");
        }
    };
    positive(g_K, "g_K");
    positive(g_Na, "g_Na");
    positive(g_l, "g_l");
    positive(delta, "delta");
    positive(C_M, "C_M");
    positive(epsilon, "epsilon");
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
        throw std::invalid_argument("HHParameters: rho must be nonnegative");
    }
    if (!std::isfinite(V_K) || !std::isfinite(V_Na) || !std::isfinite(V_l)) {
        throw std::invalid_argument("HHParameters: reversal potentials must be finite");
    }
}

const char* gating_name(GatingKind kind) {
    switch (kind) {
        case GatingKind::n: return "n";
        case GatingKind::m: return "m";
        case GatingKind::h: return "h";
    }
    return "?";
}

double alpha(GatingKind kind, double v) {
    require_finite(v, "alpha");
    switch (kind) {
        case GatingKind::n:
            // (0.1 - 0.01 v)/(e^(1-0.1v) - 1) = 0.1 * u/(e^u - 1), u = 1 - 0.1 v
            return 0.1 * expm1_ratio(1.0 - 0.1 * v);
        case GatingKind::m:
            // (2.5 - 0.1 v)/(e^(2.5-0.1v) - 1) = u/(e^u - 1), u = 2.5 - 0.1 v
            return expm1_ratio(2.5 - 0.1 * v);
        case GatingKind::h:
            return 0.07 * std::exp(-v / 20.0);
    }
    throw std::logic_error("alpha: bad kind");
}

double beta(GatingKind kind, double v) {
    require_finite(v, "beta");
    switch (kind) {
        case GatingKind::n:
            return 0.125 * std::exp(-v / 80.0);
        case GatingKind::m:
            return 4.0 * std::exp(-v / 18.0);
        case GatingKind::h:
            return 1.0 / (std::exp(3.0 - 0.1 * v) + 1.0);
    }
    throw std::logic_error("beta: bad kind");
}

double h1k(GatingKind kind, double v) {
    return alpha(kind, v) + beta(kind, v);
}

double h2k(GatingKind kind, double v) {
    return alpha(kind, v);
}

double gating_steady_state(GatingKind kind, double v) {
    const double a = alpha(kind, v);
    return a / (a + beta(kind, v));
}

double f1(double n, double m, double h, const HHParameters& p) {
    require_finite(n, "f1");
    require_finite(m, "f1");
    require_finite(h, "f1");
    const double n2 = n * n;
    return p.g_K * n2 * n2 + p.g_Na * m * m * m * h + p.g_l;
}

double f2(double n, double m, double h, const HHParameters& p) {
    require_finite(n, "f2");
    require_finite(m, "f2");
    require_finite(h, "f2");
    const double n2 = n * n;
    return p.g_K * p.V_K * n2 * n2 + p.g_Na * p.V_Na * m * m * m * h + p.g_l * p.V_l;
}

namespace {

// Golden-section maximization of f on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(a)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

} // namespace

double gating_sup_ratio(GatingKind kind, const PotentialRange& range) {
    if (!(range.lo < range.hi) || !(range.step > 0.0)) {
        throw std::domain_error("gating_sup_ratio: empty potential range");
    }
    double best_v = range.lo;
    double best = -1.0;
    for (double v = range.lo; v <= range.hi + 0.5 * range.step; v += range.step) {
        const double vv = std::min(v, range.hi);
        const double r = gating_steady_state(kind, vv);
        if (r > best) {
            best = r;
            best_v = vv;
        }
    }
    const double lo = std::max(range.lo, best_v - range.step);
    const double hi = std::min(range.hi, best_v + range.step);
    const double refined = golden_max([kind](double v) { return gating_steady_state(kind, v); }, lo, hi);
    return std::min(1.0, std::max(best, refined));
}

GatingBounds gating_bounds(const PotentialRange& range) {
    return GatingBounds{
        gating_sup_ratio(GatingKind::n, range),
        gating_sup_ratio(GatingKind::m, range),
        gating_sup_ratio(GatingKind::h, range),
    };
}

} // namespace hhsmc
