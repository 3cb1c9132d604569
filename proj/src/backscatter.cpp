#include "sr/backscatter.hpp"

#include <cmath>
#include <numbers>

namespace sr {

namespace {

// Per-axis Gray code for sqrt(M) PAM levels ordered -(m-1), ..., -1, +1, ..., +(m-1).
std::uint32_t gray_of_level(int level_index) {
    const auto u = static_cast<std::uint32_t>(level_index);
    return u ^ (u >> 1);
}

}  // namespace

Constellation build_constellation(Scheme scheme, int order) {
    Constellation a;
    a.scheme = scheme;
    switch (scheme) {
        case Scheme::BPSK:
            a.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
            a.labels = {0u, 1u};
            a.bits_per_symbol = 1;
            break;
        case Scheme::QPSK: {
            const double s = std::numbers::sqrt2 / 2.0;
            a.points = {cplx(s, s), cplx(s, -s), cplx(-s, s), cplx(-s, -s)};
            // bit0 = Re < 0, bit1 = Im < 0: adjacent quadrants differ in one bit
            a.labels = {0u, 2u, 1u, 3u};
            a.bits_per_symbol = 2;
            break;
        }
        case Scheme::MQAM: {
            const int m = order;
            const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
            if (m < 4 || side * side != m)
                throw std::invalid_argument("build_constellation: MQAM order must be a perfect square >= 4");
            const double corner = static_cast<double>(side - 1) * std::numbers::sqrt2;
            const int bits_axis = static_cast<int>(std::lround(std::log2(static_cast<double>(side))));
            a.bits_per_symbol = 2 * bits_axis;
            for (int i = 0; i < side; ++i) {
                const double re = static_cast<double>(2 * i - (side - 1)) / corner;
                for (int q = 0; q < side; ++q) {
                    const double im = static_cast<double>(2 * q - (side - 1)) / corner;
                    a.points.emplace_back(re, im);
                    a.labels.push_back((gray_of_level(i) << bits_axis) | gray_of_level(q));
                }
            }
            break;
        }
    }
    double max_amp = 0.0;
    for (const cplx& c : a.points) max_amp = std::max(max_amp, std::abs(c));
    a.max_amplitude = max_amp;
    return a;
}

ReflectionCoefficient gamma_from_symbol(cplx symbol, double alpha, bool active_load) {
    if (alpha < 0.0) throw std::invalid_argument("gamma_from_symbol: alpha must be >= 0");
    if (!active_load && alpha > 1.0)
        throw std::invalid_argument("gamma_from_symbol: alpha > 1 violates the passive bound");
    if (active_load && alpha > kActiveGammaCap)
        throw std::invalid_argument("gamma_from_symbol: alpha exceeds the active-load cap");
    if (std::abs(symbol) > 1.0 + 1e-12)
        throw std::invalid_argument("gamma_from_symbol: |c| must be <= 1 after normalization");
    return {alpha * symbol};
}

Impedance impedance_from_gamma(ReflectionCoefficient gamma, Impedance z_a) {
    if (z_a.resistance <= 0.0)
        throw std::invalid_argument("impedance_from_gamma: antenna resistance must be > 0");
    const cplx g = gamma.value;
    if (std::abs(g - cplx(1.0, 0.0)) < 1e-12)
        throw std::domain_error("impedance_from_gamma: Gamma = 1 is singular (open-circuit limit)");
    const cplx za = z_a.value();
    const cplx zl = (std::conj(za) + g * za) / (cplx(1.0, 0.0) - g);
    return {zl.real(), zl.imag()};
}

ReflectionCoefficient gamma_from_impedance(Impedance z_l, Impedance z_a) {
    if (z_a.resistance <= 0.0)
        throw std::invalid_argument("gamma_from_impedance: antenna resistance must be > 0");
    const cplx za = z_a.value();
    const cplx zl = z_l.value();
    if (std::abs(zl + za) < 1e-12)
        throw std::domain_error("gamma_from_impedance: Z_L = -Z_a is singular");
    return {(zl - std::conj(za)) / (zl + za)};
}

double active_gamma_squared(double r_l, double x_l, double r_a, double x_a) {
    if (r_l <= 0.0 || r_a <= 0.0)
        throw std::invalid_argument("active_gamma_squared: R_L and R_A must be > 0");
    const double xs = x_l + x_a;
    const double num = (r_l + r_a) * (r_l + r_a) + xs * xs;
    const double den = (r_l - r_a) * (r_l - r_a) + xs * xs;
    if (den == 0.0) throw std::domain_error("active_gamma_squared: R_L = R_A with X_L = -X_A is singular");
    return num / den;
}

}  // namespace sr
