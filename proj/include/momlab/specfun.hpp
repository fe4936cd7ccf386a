#pragma once

// Real log-Gamma and log-Barnes-G.

#include <array>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "log_value.hpp"

namespace momlab::specfun {

namespace detail {

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// lgamma_r avoids the global signgam write of lgamma.
inline double lgamma_positive(double x)
{
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

// zeta'(-1) = 1/12 - ln(Glaisher's constant)
inline constexpr double zeta_prime_minus_one = -0.16542114370045092921;

// B_{2k+2} / (4k(k+1)), k = 1..7
inline constexpr std::array<double, 7> barnes_asymptotic_coeffs = {
    (-1.0 / 30.0) / 8.0,       (1.0 / 42.0) / 24.0,    (-1.0 / 30.0) / 48.0,
    (5.0 / 66.0) / 80.0,       (-691.0 / 2730.0) / 120.0, (7.0 / 6.0) / 168.0,
    (-3617.0 / 510.0) / 224.0,
};

// ln G(z + 1) for z >= 19
inline double log_barnes_g_shifted_asymptotic(double z)
{
    const double lz = std::log(z);
    double s = 0.5 * z * z * lz - 0.75 * z * z + 0.5 * z * std::log(2.0 * std::numbers::pi)
               - lz / 12.0 + zeta_prime_minus_one;
    const double inv_z2 = 1.0 / (z * z);
    double p = inv_z2;
    for (double c : barnes_asymptotic_coeffs) {
        s += c * p;
        p *= inv_z2;
    }
    return s;
}

} // namespace detail

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x)
{
    if (std::isnan(x)) throw DomainError("log_gamma: NaN argument");
    if (detail::is_nonpositive_integer(x)) throw PoleError("log_gamma: pole at non-positive integer");
    if (x < 0.0) throw DomainError("log_gamma: negative argument; use log_gamma_signed");
    return detail::lgamma_positive(x);
}

/// Gamma(x) as a signed LogValue, valid for any non-pole real x.
/// Negative arguments go through the reflection formula and must be
/// requested explicitly with allow_negative.
inline LogValue log_gamma_signed(double x, bool allow_negative = false)
{
    if (std::isnan(x)) throw DomainError("log_gamma_signed: NaN argument");
    if (detail::is_nonpositive_integer(x)) throw PoleError("log_gamma_signed: pole at non-positive integer");
    if (x > 0.0) return LogValue::from_log(detail::lgamma_positive(x));
    if (!allow_negative) throw DomainError("log_gamma_signed: negative argument without allow_negative");
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    const double s = std::sin(std::numbers::pi * x);
    const int sign = s > 0.0 ? 1 : -1;
    const double l = std::log(std::numbers::pi) - std::log(std::fabs(s)) - detail::lgamma_positive(1.0 - x);
    return LogValue::from_log(l, sign);
}

inline double gamma(double x) { return log_gamma_signed(x, true).value(); }

/// ln B(a, b) for a, b > 0.
inline double log_beta(double a, double b)
{
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

/// ln G(x) for x > 0, G the Barnes G-function.
///
/// The argument is raised with ln G(x) = ln G(x+1) - ln Gamma(x) until it
/// reaches 20, where the Stirling-type expansion of ln G(z+1) is accurate
/// to double precision with seven correction terms.
inline double log_barnes_g(double x)
{
    if (std::isnan(x)) throw DomainError("log_barnes_g: NaN argument");
    if (x <= 0.0) throw DomainError("log_barnes_g: argument must be positive");
    double shift = 0.0;
    while (x < 20.0) {
        shift += detail::lgamma_positive(x);
        x += 1.0;
    }
    return detail::log_barnes_g_shifted_asymptotic(x - 1.0) - shift;
}

/// G(x) as a LogValue for x >= 0; G(0) is the exact zero.
inline LogValue barnes_g(double x)
{
    if (x == 0.0) return LogValue::zero();
    return LogValue::from_log(log_barnes_g(x));
}

} // namespace momlab::specfun
