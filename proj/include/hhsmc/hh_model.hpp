#pragma once

#include <functional>

namespace hhsmc {

/// Physical constants of the Hodgkin-Huxley cable model plus the relay
/// control gain and the sign-regularization width.
///
/// Units follow the classical 1952 convention: conductances in mS/cm^2,
/// potentials in mV (depolarization from rest), capacitance in uF/cm^2,
/// currents in uA/cm^2, time in ms.
struct HHParameters {
    double g_K = 36.0;     // potassium conductance
    double g_Na = 120.0;   // sodium conductance
    double g_l = 0.3;      // leak conductance
    double V_K = -12.0;    // potassium reversal potential
    double V_Na = 115.0;   // sodium reversal potential
    double V_l = 10.613;   // leak reversal potential
    double delta = 0.1;    // axial diffusivity
    double C_M = 0.91;     // membrane capacitance
    double rho = 0.0;      // relay gain, >= 0
    double epsilon = 1e-4; // sign regularization width, > 0

    /// Throws std::invalid_argument when a positivity constraint is violated.
    void validate() const;
};

enum class GatingKind { n, m, h };

const char* gating_name(GatingKind kind);

/// Channel opening rate (1/ms). The removable singularities of the n and m
/// rates (v = 10 and v = 25) are evaluated through a series branch.
double alpha(GatingKind kind, double v);

/// Channel closing rate (1/ms).
double beta(GatingKind kind, double v);

/// Decay coefficient of the gating ODE w' = -h1*w + h2; equals alpha + beta.
double h1k(GatingKind kind, double v);

/// Source coefficient of the gating ODE; equals alpha.
double h2k(GatingKind kind, double v);

/// Long-time limit h2/h1 = alpha/(alpha+beta), strictly inside (0,1).
double gating_steady_state(GatingKind kind, double v);

/// Total ionic conductance g_K n^4 + g_Na m^3 h + g_l.
double f1(double n, double m, double h, const HHParameters& p);

/// Ionic driving current g_K V_K n^4 + g_Na V_Na m^3 h + g_l V_l.
double f2(double n, double m, double h, const HHParameters& p);

/// Closed search window standing in for the real line when computing the
/// suprema of the steady-state ratios.
struct PotentialRange {
    double lo = -100.0;
    double hi = 200.0;
    double step = 0.1;
};

/// Numerical supremum of h2/h1 over the range, refined by golden-section
/// search around the grid maximizer and capped at 1.
double gating_sup_ratio(GatingKind kind, const PotentialRange& range = {});

/// Suprema of the three steady-state ratios, each in (0, 1].
struct GatingBounds {
    double n_M = 1.0;
    double m_M = 1.0;
    double h_M = 1.0;
};

GatingBounds gating_bounds(const PotentialRange& range = {});

/// Two-variable reduction of the cable system: one potential, one generic
/// concentration w. Coefficient callables come with the bound metadata the
/// sliding analysis needs; the bounds are caller-supplied hypotheses, not
/// computed from the callables.
struct ReducedModel {
    std::function<double(double)> f1;  // conductance as a function of w
    std::function<double(double)> f2;  // driving current as a function of w
    std::function<double(double)> h1;  // gating decay rate as a function of v
    std::function<double(double)> h2;  // gating source rate as a function of v
    double a = 0.0;    // positive lower bound on f1
    double w_M = 0.0;  // supremum of h2/h1
};

} // namespace hhsmc
