#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hhsmc/hh_model.hpp"
#include "hhsmc/relay.hpp"
#include "hhsmc/sliding_analysis.hpp"

using namespace hhsmc;

namespace {

// Independent oracle for u/(e^u - 1) near u = 0: truncated reciprocal series
// in extended precision.
long double series_expm1_ratio(long double u) {
    const long double denom =
        1.0L + u / 2.0L + u * u / 6.0L + u * u * u / 24.0L + u * u * u * u / 120.0L;
    return 1.0L / denom;
}

HHParameters val_params() {
    return HHParameters{};  // defaults are the classical values
}

} // namespace

TEST_CASE("alpha handles the removable singularities") {
    // limits computed by the series oracle
    CHECK(alpha(GatingKind::n, 10.0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(alpha(GatingKind::m, 25.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(alpha(GatingKind::h, 0.0) == doctest::Approx(0.07).epsilon(1e-14));

    // continuity across the singular points
    CHECK(std::abs(alpha(GatingKind::n, 10.0 + 1e-6) - 0.1) < 1e-5);
    CHECK(std::abs(alpha(GatingKind::n, 10.0 - 1e-6) - 0.1) < 1e-5);
    CHECK(std::abs(alpha(GatingKind::m, 25.0 + 1e-6) - 1.0) < 1e-5);

    // against the oracle in the series window and just outside it
    for (double du : {-9e-5, -1e-7, 1e-7, 9e-5, 2e-4, 1e-3}) {
        const double v = 10.0 - 10.0 * du;  // exponent argument u = 1 - 0.1v = du
        const double expected = 0.1 * static_cast<double>(series_expm1_ratio(du));
        CHECK(alpha(GatingKind::n, v) == doctest::Approx(expected).epsilon(1e-11));
    }
}

TEST_CASE("beta matches direct evaluation") {
    CHECK(beta(GatingKind::n, 0.0) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(beta(GatingKind::m, 0.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(beta(GatingKind::h, 30.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("alpha and beta reject non-finite input") {
    CHECK_THROWS_AS(alpha(GatingKind::n, std::nan("")), std::domain_error);
    CHECK_THROWS_AS(beta(GatingKind::h, std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("h1k and h2k compose the rates") {
    CHECK(h1k(GatingKind::n, 0.0) ==
          doctest::Approx(alpha(GatingKind::n, 0.0) + 0.125).epsilon(1e-14));
    CHECK(h2k(GatingKind::m, 25.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(h1k(GatingKind::h, 0.0) ==
          doctest::Approx(0.07 + 1.0 / (std::exp(3.0) + 1.0)).epsilon(1e-14));
}

TEST_CASE("rates are positive and steady states stay inside (0,1)") {
    for (GatingKind k : {GatingKind::n, GatingKind::m, GatingKind::h}) {
        for (double v = -100.0; v <= 200.0; v += 0.1) {
            CHECK(alpha(k, v) > 0.0);
            CHECK(beta(k, v) > 0.0);
            CHECK(h1k(k, v) > 0.0);
            const double s = gating_steady_state(k, v);
            CHECK(s > 0.0);
            CHECK(s < 1.0);
        }
    }
}

TEST_CASE("gating steady state values") {
    // frozen from a 30-digit evaluation of alpha/(alpha+beta)
    CHECK(gating_steady_state(GatingKind::n, 0.0) ==
          doctest::Approx(0.31767691406069739).epsilon(1e-12));
    const double s = gating_steady_state(GatingKind::m, 25.0);
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    CHECK(gating_steady_state(GatingKind::h, 200.0) < 0.01);
}

TEST_CASE("f1 and f2 on the reference points") {
    const HHParameters p = val_params();
    CHECK(f1(0, 0, 0, p) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(f1(1, 1, 1, p) == doctest::Approx(156.3).epsilon(1e-14));
    CHECK(f1(0.45, 0.03, 0.397, p) == doctest::Approx(1.77751128).epsilon(1e-12));
    CHECK(f2(0, 0, 0, p) == doctest::Approx(3.1839).epsilon(1e-12));
    CHECK(f2(1, 0, 0, p) == doctest::Approx(-432.0 + 3.1839).epsilon(1e-12));
    CHECK(f2(0, 1, 1, p) == doctest::Approx(13800.0 + 3.1839).epsilon(1e-12));
}

TEST_CASE("f1 and f2 agree with a brute-force re-evaluation") {
    const HHParameters p = val_params();
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double n = unit(rng), m = unit(rng), h = unit(rng);
        const double ref1 = p.g_K * std::pow(n, 4) + p.g_Na * std::pow(m, 3) * h + p.g_l;
        const double ref2 =
            p.g_K * p.V_K * std::pow(n, 4) + p.g_Na * p.V_Na * std::pow(m, 3) * h + p.g_l * p.V_l;
        CHECK(std::abs(f1(n, m, h, p) - ref1) <= 1e-12 * std::max(1.0, std::abs(ref1)));
        CHECK(std::abs(f2(n, m, h, p) - ref2) <= 1e-12 * std::max(1.0, std::abs(ref2)));
        CHECK(f1(n, m, h, p) >= p.g_l);
    }
}

TEST_CASE("gating suprema sit just below one") {
    // oracle: dense scan of the steady state over the search window
    for (GatingKind k : {GatingKind::n, GatingKind::m, GatingKind::h}) {
        double scan = 0.0;
        for (double v = -100.0; v <= 200.0; v += 0.01) {
            scan = std::max(scan, gating_steady_state(k, v));
        }
        const double sup = gating_sup_ratio(k);
        CHECK(sup >= scan - 1e-9);
        CHECK(sup <= 1.0);
        CHECK(sup > 0.99);
    }
    CHECK_THROWS_AS(gating_sup_ratio(GatingKind::n, PotentialRange{1.0, 1.0, 0.1}),
                    std::domain_error);
    CHECK_THROWS_AS(gating_sup_ratio(GatingKind::n, PotentialRange{-1.0, 1.0, 0.0}),
                    std::domain_error);
}

TEST_CASE("parameter validation") {
    HHParameters p = val_params();
    p.rho = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = val_params();
    p.epsilon = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = val_params();
    CHECK_NOTHROW(p.validate());
}

// ---------------------------------------------------------------- relay

TEST_CASE("multivalued sign branches") {
    CHECK(sign_multivalued(3.0).lo == 1.0);
    CHECK(sign_multivalued(3.0).hi == 1.0);
    CHECK(sign_multivalued(0.0).lo == -1.0);
    CHECK(sign_multivalued(0.0).hi == 1.0);
    CHECK(sign_multivalued(-1e-9).lo == -1.0);
    CHECK(sign_multivalued(-1e-9).hi == -1.0);
    CHECK_THROWS_AS(sign_multivalued(std::nan("")), std::domain_error);
}

TEST_CASE("regularized sign values and exactness outside the band") {
    const SignEpsilon s{1e-4};
    CHECK(sign_eps(s, 1.0) == 1.0);
    CHECK(sign_eps(s, 5e-5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sign_eps(s, 0.0) == 0.0);
    CHECK(sign_eps(s, 1e-4) == 1.0);
    CHECK(sign_eps(s, -1e-4) == -1.0);
    CHECK(sign_eps(s, 1.0000001e-4) == 1.0);

    // pointwise convergence to the principal selection for fixed r != 0
    for (double r : {1e-3, -2e-2, 0.5, -3.0}) {
        for (double eps : {1e-4, 1e-5, 1e-6}) {
            if (eps < std::abs(r)) {
                CHECK(sign_eps(SignEpsilon{eps}, r) == (r > 0 ? 1.0 : -1.0));
            }
        }
    }
}

TEST_CASE("regularized sign is Lipschitz with constant 1/eps and selects the graph") {
    const double eps = 1e-4;
    const SignEpsilon s{eps};
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> span(-5e-4, 5e-4);
    for (int k = 0; k < 2000; ++k) {
        const double a = span(rng), b = span(rng);
        CHECK(std::abs(sign_eps(s, a) - sign_eps(s, b)) <=
              (1.0 / eps) * std::abs(a - b) * (1.0 + 1e-12) + 1e-15);
        const double v = sign_eps(s, a);
        if (std::abs(a) >= eps) {
            CHECK(sign_multivalued(a).contains(v));
        } else {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("regularized sign equals the resolvent construction") {
    // oracle: resolvent of the sign graph, (I + eps*sign)^{-1} r, evaluated
    // branch by branch, then the difference quotient
    auto yosida = [](double eps, double r) {
        double resolvent;
        if (r > eps) resolvent = r - eps;
        else if (r < -eps) resolvent = r + eps;
        else resolvent = 0.0;
        return (r - resolvent) / eps;
    };
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> span(-1.0, 1.0);
    for (double eps : {1e-4, 1e-2, 0.5}) {
        const SignEpsilon s{eps};
        for (int k = 0; k < 500; ++k) {
            const double r = span(rng);
            // the difference quotient loses an ulp to cancellation on the
            // saturated branches, the linear branch is identical
            CHECK(sign_eps(s, r) == doctest::Approx(yosida(eps, r)).epsilon(1e-12));
            if (std::abs(r) < eps) CHECK(sign_eps(s, r) == yosida(eps, r));
        }
        CHECK(sign_eps(s, 0.0) == yosida(eps, 0.0));
        CHECK(sign_eps(s, eps) == yosida(eps, eps));
    }
}

TEST_CASE("relay current") {
    const SignEpsilon s{1e-4};
    CHECK(relay_current(s, 20.0, 5.0, 0.0) == -20.0);
    CHECK(relay_current(s, 20.0, 3.25, 3.25) == 0.0);
    CHECK(relay_current(s, 0.0, 123.0, -5.0) == 0.0);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> span(-2e-4, 2e-4);
    for (int k = 0; k < 500; ++k) {
        const double d = span(rng);
        CHECK(relay_current(s, 7.0, d, 0.0) == -relay_current(s, 7.0, -d, 0.0));
    }
}

// ------------------------------------------------------ sliding analysis

TEST_CASE("coefficient bounds reproduce the hand computation") {
    const HHParameters p = val_params();
    const GatingBounds unit{1.0, 1.0, 1.0};
    const CoefficientBounds cb = coefficient_bounds(p, unit);
    CHECK(cb.L_f1 == doctest::Approx(360.0).epsilon(1e-14));
    CHECK(cb.f1M == doctest::Approx(0.3 + 360.0 * 3.0).epsilon(1e-14));
    CHECK(cb.L_f2 == doctest::Approx(3.0 * 120.0 * 115.0).epsilon(1e-14));
    CHECK(cb.f2M == doctest::Approx(3.1839 + 41400.0 * 3.0).epsilon(1e-12));

    HHParameters leak_only = p;
    leak_only.g_K = 0.0;
    leak_only.g_Na = 0.0;
    const CoefficientBounds lb = coefficient_bounds(leak_only, unit);
    CHECK(lb.f1M == doctest::Approx(0.3).epsilon(1e-14));

    CHECK_THROWS_AS(coefficient_bounds(p, GatingBounds{0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(coefficient_bounds(p, GatingBounds{1.0, 1.2, 1.0}), std::invalid_argument);
}

TEST_CASE("drift bound A") {
    const auto zero_target = TargetTrajectory::constant(0.0);
    CHECK(bound_A(zero_target, 1.0, 1.0, 0.5, 0.1) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(bound_A(zero_target, 0.0, 5.0, 0.0, 0.1) == 0.0);

    const double omega = 4.0 / 3.141592653589793;
    const auto sine = TargetTrajectory::time_sinusoid(0.5, omega, 0.6);
    CHECK(sine.sup_time_derivative == doctest::Approx(0.5 * omega).epsilon(1e-14));
    CHECK(sine.sup_space_curvature == 0.0);
    CHECK(sine.sup_value == doctest::Approx(1.1).epsilon(1e-14));
    CHECK(bound_A(sine, 2.0, 3.0, 0.25, 0.1) ==
          doctest::Approx(0.5 * omega + 3.0 * 1.1 + 0.25 + 3.0 * 2.0).epsilon(1e-14));
}

TEST_CASE("sliding time and the comparison envelope") {
    CHECK(sliding_time(3.0, 1.5, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(sliding_time(5.0, 1.5, 0.0) == 0.0);
    CHECK_THROWS_AS(sliding_time(1.5, 1.5, 1.0), GainConditionError);
    CHECK_THROWS_AS(sliding_time(1.0, 1.5, 1.0), GainConditionError);

    const double t_star = sliding_time(3.0, 1.5, 1.0);
    CHECK(comparison_q(0.0, 3.0, 1.5, 1.0) == 1.0);
    CHECK(comparison_q(t_star, 3.0, 1.5, 1.0) == 0.0);
    CHECK(comparison_q(t_star / 2.0, 3.0, 1.5, 1.0) == doctest::Approx(0.5).epsilon(1e-13));
    for (double t = t_star; t < 5.0; t += 0.1) {
        CHECK(comparison_q(t, 3.0, 1.5, 1.0) == 0.0);
    }
    double prev = comparison_q(0.0, 3.0, 1.5, 1.0);
    for (double t = 0.05; t <= 1.0; t += 0.05) {
        const double q = comparison_q(t, 3.0, 1.5, 1.0);
        CHECK(q <= prev);
        prev = q;
    }
}

TEST_CASE("sliding time is monotone in gain and deviation") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> gain(2.0, 10.0);
    std::uniform_real_distribution<double> dev(0.1, 5.0);
    for (int k = 0; k < 300; ++k) {
        const double a = 1.5;
        const double r1 = gain(rng), r2 = gain(rng);
        const double d1 = dev(rng), d2 = dev(rng);
        if (r1 < r2) {
            CHECK(sliding_time(r1, a, d1) > sliding_time(r2, a, d1));
        }
        if (d1 < d2) {
            CHECK(sliding_time(r1, a, d1) < sliding_time(r1, a, d2));
        }
    }
}

TEST_CASE("sliding bound exposes the gain threshold") {
    const auto target = TargetTrajectory::constant(0.0);
    const double horizon = 2.0;
    SlidingBound b = sliding_bound(target, 1.0, 1.0, 0.5, 0.1, 3.0, horizon);
    CHECK(b.A == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(b.rho_min == doctest::Approx(2.0).epsilon(1e-14));
    REQUIRE(b.T_star.has_value());
    CHECK(*b.T_star == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(*b.T_star < horizon);

    b = sliding_bound(target, 1.0, 1.0, 0.5, 0.1, 1.9, horizon);
    CHECK_FALSE(b.T_star.has_value());
}

TEST_CASE("sliding detection on synthetic fields") {
    const Mesh mesh = Mesh::uniform(1.0, 1.0, 3, 11);
    const auto target = TargetTrajectory::constant(0.0);

    StateField zero(11, 3, 0.0);
    auto onset = detect_sliding(zero, mesh, target, 1e-3);
    REQUIRE(onset.has_value());
    CHECK(*onset == 0.0);

    // outside the band until t = 0.4, inside afterwards
    StateField decay(11, 3, 0.0);
    for (int i = 0; i < 11; ++i) {
        for (int j = 0; j < 3; ++j) decay.at(i, j) = i < 4 ? 1.0 : 1e-4;
    }
    onset = detect_sliding(decay, mesh, target, 1e-3);
    REQUIRE(onset.has_value());
    CHECK(*onset == doctest::Approx(0.4).epsilon(1e-12));

    // a late excursion pushes the onset past it
    StateField excursion = decay;
    excursion.at(8, 1) = 0.5;
    onset = detect_sliding(excursion, mesh, target, 1e-3);
    REQUIRE(onset.has_value());
    CHECK(*onset == doctest::Approx(0.9).epsilon(1e-12));

    StateField never(11, 3, 2.0);
    CHECK_FALSE(detect_sliding(never, mesh, target, 1e-3).has_value());

    // enlarging the band never delays the onset
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> amp(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        StateField f(11, 3, 0.0);
        for (int i = 0; i < 11; ++i) {
            const double a = amp(rng);
            for (int j = 0; j < 3; ++j) f.at(i, j) = a;
        }
        const auto narrow = detect_sliding(f, mesh, target, 0.5);
        const auto wide = detect_sliding(f, mesh, target, 1.0);
        if (narrow.has_value()) {
            REQUIRE(wide.has_value());
            CHECK(*wide <= *narrow);
        }
    }
}
