#pragma once

#include "sr/types.hpp"

namespace sr {

/// Complex impedance in ohms.
struct Impedance {
    double resistance = 0.0;
    double reactance = 0.0;

    cplx value() const { return {resistance, reactance}; }
};

struct ReflectionCoefficient {
    cplx value;
};

// Hard cap on |Gamma| in active-load mode; keeps simulations bounded in the
// absence of a biasing-power model.
inline constexpr double kActiveGammaCap = 10.0;

/// Normalized symbol alphabet for `scheme`. MQAM orders must be perfect
/// squares >= 4; points are scaled so the corner point has unit amplitude.
Constellation build_constellation(Scheme scheme, int order = 0);

/// Gamma = alpha * c for a normalized constellation point (|c|_max = 1).
ReflectionCoefficient gamma_from_symbol(cplx symbol, double alpha, bool active_load = false);

/// Load impedance realizing a given reflection coefficient against antenna
/// impedance z_a: Z_L = (Z_a* + Gamma Z_a) / (1 - Gamma).
Impedance impedance_from_gamma(ReflectionCoefficient gamma, Impedance z_a);

/// Gamma = (Z_L - Z_a*) / (Z_L + Z_a). Active loads (negative resistance)
/// yield |Gamma| > 1.
ReflectionCoefficient gamma_from_impedance(Impedance z_l, Impedance z_a);

/// |Gamma|^2 of an active load Z_L = -R_L + jX_L against Z_A = R_A + jX_A,
/// in closed form: ((R_L+R_A)^2 + (X_L+X_A)^2) / ((R_L-R_A)^2 + (X_L+X_A)^2).
double active_gamma_squared(double r_l, double x_l, double r_a, double x_a);

}  // namespace sr
