#pragma once

// Closed-form large-n predictions: the constants C^{+-}(m, alpha) via
// Selberg's integral, the phase diagram in alpha, the pointwise and uniform
// asymptotics of the joint moments, and numeric evaluation of the
// 1/n-regularized integrals I_{H(n)}.

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "log_value.hpp"
#include "mom.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"
#include "specfun.hpp"
#include "th_determinant.hpp"

namespace momlab {

namespace detail {

inline void check_sign(int pm)
{
    if (pm != 1 && pm != -1) throw PreconditionError("sign must be +1 or -1");
}

} // namespace detail

/// min{1/sqrt(m), (sqrt(8m-3) +- 1)/(4m-2)}: below it C^{+-}(m, alpha) avoids the poles of Gamma.
inline double subcritical_threshold(int m, int pm)
{
    if (m < 1) throw PreconditionError("subcritical_threshold: m must be at least 1");
    detail::check_sign(pm);
    return std::min(1.0 / std::sqrt(m), (std::sqrt(8.0 * m - 3.0) + pm) / (4.0 * m - 2.0));
}

/// Supremum of the alpha for which I_infinity^{+-} is finite. For m = 1 this
/// is (sqrt(5) +- 1)/2, beyond subcritical_threshold(1, +1) = 1.
inline double finiteness_threshold(int m, int pm)
{
    if (m == 1) {
        detail::check_sign(pm);
        return (std::sqrt(5.0) + pm) / 2.0;
    }
    return subcritical_threshold(m, pm);
}

/// ln of Selberg's integral
///   int_{[0,1]^m} prod_{j<k} |x_j - x_k|^{2c} prod_j (1 - x_j)^{a-1} x_j^{b-1} dx
///   = prod_{j=0}^{m-1} Gamma(1+c+jc) Gamma(a+jc) Gamma(b+jc) / (Gamma(1+c) Gamma(a+b+c(m+j-1))).
inline LogValue selberg(int m, double a, double b, double c)
{
    if (m < 1) throw PreconditionError("selberg: m must be at least 1");
    if (!(a > 0.0 && b > 0.0)) throw DivergenceError("selberg: need a > 0 and b > 0");
    if (m == 1) return LogValue::from_log(specfun::log_beta(a, b));
    const double bound = std::min({1.0 / m, a / (m - 1.0), b / (m - 1.0)});
    if (!(c > -bound)) throw DivergenceError("selberg: c below -min{1/m, a/(m-1), b/(m-1)}");
    using specfun::log_gamma;
    double l = 0.0;
    for (int j = 0; j < m; ++j)
        l += log_gamma(1.0 + c + j * c) + log_gamma(a + j * c) + log_gamma(b + j * c) - log_gamma(1.0 + c)
             - log_gamma(a + b + c * (m + j - 1.0));
    return LogValue::from_log(l);
}

/// I_infinity^{+-}(alpha, (0, pi)^m) = 4^{-alpha^2 m^2 +- alpha m} / pi^m * Selberg(m, a, a, -alpha^2),
/// a = (1 - alpha^2 +- alpha)/2.
inline LogValue i_infinity_log(int m, double alpha, int pm)
{
    if (m < 1) throw PreconditionError("i_infinity: m must be at least 1");
    detail::check_sign(pm);
    if (!(alpha >= 0.0)) throw PreconditionError("i_infinity: alpha must be non-negative");
    if (!(alpha < finiteness_threshold(m, pm))) throw DivergenceError("i_infinity: integral diverges");
    const double a = 0.5 * (1.0 - alpha * alpha + pm * alpha);
    const double pre = (-alpha * alpha * m * m + pm * alpha * m) * std::log(4.0) - m * std::log(std::numbers::pi);
    return selberg(m, a, a, -alpha * alpha) * LogValue::from_log(pre);
}

inline double i_infinity(int m, double alpha, int pm) { return i_infinity_log(m, alpha, pm).value(); }

/// ln(G(1+alpha)^{2m} / G(1+2 alpha)^m)
inline double log_barnes_ratio(int m, double alpha)
{
    return m * (2.0 * specfun::log_barnes_g(1.0 + alpha) - specfun::log_barnes_g(1.0 + 2.0 * alpha));
}

/// ln C^{+-}(m, alpha), evaluated term by term from its Gamma / Barnes G product.
inline double log_c_constant(int m, double alpha, int pm)
{
    if (m < 1) throw PreconditionError("c_constant: m must be at least 1");
    detail::check_sign(pm);
    if (!(alpha >= 0.0 && alpha < finiteness_threshold(m, pm)))
        throw PoleError("c_constant: alpha outside the pole-free range");
    using specfun::log_gamma;
    const double a2 = alpha * alpha;
    double l = log_barnes_ratio(m, alpha) + (-a2 * m * m + pm * alpha * m) * std::log(4.0)
               - m * std::log(std::numbers::pi);
    for (int j = 0; j < m; ++j) {
        // for m = 1 the ratio Gamma(1 - alpha^2) / Gamma(1 - alpha^2) is identically 1
        if (j > 0) l += log_gamma(1.0 - a2 - j * a2) - log_gamma(1.0 - a2);
        l += 2.0 * log_gamma(0.5 * (1.0 - a2 + pm * alpha) - j * a2) - log_gamma(1.0 + pm * alpha - a2 * (m + j));
    }
    return l;
}

inline double c_constant(int m, double alpha, int pm) { return std::exp(log_c_constant(m, alpha, pm)); }

// ---------------------------------------------------------------------------
// Phase diagram
// ---------------------------------------------------------------------------

enum class Phase { Subcritical, Critical, Intermediate, SecondCritical, Supercritical };

inline std::string_view phase_name(Phase p)
{
    switch (p) {
    case Phase::Subcritical: return "Subcritical";
    case Phase::Critical: return "Critical";
    case Phase::Intermediate: return "Intermediate";
    case Phase::SecondCritical: return "SecondCritical";
    case Phase::Supercritical: return "Supercritical";
    }
    return "?";
}

/// Growth law MoM ~ constant * n^exponent * (log n)^log_power, with n the
/// group's size parameter. The constant is known only in the subcritical phase.
struct PhaseReport {
    Phase phase;
    double exponent;
    int log_power;
    std::optional<double> constant;
};

/// Breakpoints closer than this are treated as equal to the threshold.
inline constexpr double kPhaseTolerance = 1e-12;

/// (sqrt(8m-3) +- 1)/(4m-2)
inline double critical_alpha(int m, int pm) { return (std::sqrt(8.0 * m - 3.0) + pm) / (4.0 * m - 2.0); }

inline PhaseReport classify_phase(const GroupLabel& group, int m, double alpha)
{
    if (m < 1) throw PreconditionError("classify_phase: m must be at least 1");
    if (!(alpha > 0.0)) throw PreconditionError("classify_phase: alpha must be positive");
    const int pm = group.family_sign();
    const double a2 = alpha * alpha;
    auto near = [&](double t) { return std::fabs(alpha - t) <= kPhaseTolerance; };
    auto subcritical = [&] {
        // (2n)^{m alpha^2} C = n^{m alpha^2} 2^{m alpha^2} C
        return PhaseReport{Phase::Subcritical, m * a2, 0,
                           std::exp(m * a2 * std::log(2.0) + log_c_constant(m, alpha, pm))};
    };
    if (pm == 1 && m == 2) {
        const double t1 = 1.0 / std::sqrt(2.0), t2 = (std::sqrt(5.0) + 1.0) / 4.0;
        if (near(t1)) return {Phase::Critical, 2.0 * a2, 1, std::nullopt};
        if (near(t2)) return {Phase::SecondCritical, 4.0 * a2 - 1.0, 1, std::nullopt};
        if (alpha < t1) return subcritical();
        if (alpha < t2) return {Phase::Intermediate, 4.0 * a2 - 1.0, 0, std::nullopt};
        return {Phase::Supercritical, 8.0 * a2 - 2.0 * alpha - 2.0, 0, std::nullopt};
    }
    const double t = critical_alpha(m, pm);
    if (near(t)) return {Phase::Critical, m * a2, 1, std::nullopt};
    if (alpha < t) return subcritical();
    // Sp: 2(m alpha)^2 + m alpha - m; orthogonal: 2(m alpha)^2 - m alpha - m
    return {Phase::Supercritical, 2.0 * m * m * a2 - pm * m * alpha - m, 0, std::nullopt};
}

// ---------------------------------------------------------------------------
// Joint-moment asymptotics
// ---------------------------------------------------------------------------

/// Leading order of E prod_j |p(theta_j)|^{2 alpha} for fixed, separated angles:
///   (2n)^{m alpha^2} G(1+alpha)^{2m}/G(1+2alpha)^m prod_{j<k} |2cos theta_j - 2cos theta_k|^{-2 alpha^2}
///   prod_j (2 sin theta_j)^{-alpha^2 +- alpha}.
inline double predict_joint_moment_separated(const GroupLabel& group, double alpha, const std::vector<double>& thetas)
{
    if (thetas.empty()) throw PreconditionError("predict_joint_moment_separated: need at least one angle");
    const int m = static_cast<int>(thetas.size());
    const int pm = group.family_sign();
    const double a2 = alpha * alpha;
    double l = m * a2 * std::log(2.0 * group.n) + log_barnes_ratio(m, alpha);
    for (int j = 0; j < m; ++j) {
        l += (-a2 + pm * alpha) * std::log(2.0 * std::sin(thetas[j]));
        for (int k = j + 1; k < m; ++k)
            l += -2.0 * a2 * std::log(std::fabs(2.0 * std::cos(thetas[j]) - 2.0 * std::cos(thetas[k])));
    }
    return std::exp(l);
}

/// ln F_n = -2 alpha^2 sum_{j<k} ln(2 sin|(t_j - t_k)/2| + 1/n) + ln(2 sin|(t_j + t_k)/2| + 1/n)
inline double log_merging_factor(double alpha, const double* t, int m, double n)
{
    double l = 0.0;
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k)
            l += std::log(2.0 * std::sin(std::fabs(0.5 * (t[j] - t[k]))) + 1.0 / n)
                 + std::log(2.0 * std::sin(std::fabs(0.5 * (t[j] + t[k]))) + 1.0 / n);
    return -2.0 * alpha * alpha * l;
}

/// n^{m alpha^2} F_n(theta) times the edge factors of D_n^{T+H, kind}: the
/// uniform size of the determinant up to a bounded factor.
inline double envelope_uniform(THKind kind, double alpha, const std::vector<double>& thetas, int n)
{
    if (n < 1) throw PreconditionError("envelope_uniform: n must be at least 1");
    const int m = static_cast<int>(thetas.size());
    const double a2 = alpha * alpha, nn = n, h = 1.0 / nn;
    double l = m * a2 * std::log(nn) + log_merging_factor(alpha, thetas.data(), m, nn);
    for (double t : thetas) {
        const double s = 2.0 * std::sin(t), sh = 2.0 * std::sin(0.5 * t), ch = 2.0 * std::cos(0.5 * t);
        switch (kind) {
        case THKind::One: l += (-a2 + alpha) * std::log(s + h); break;
        case THKind::Two: l += (-a2 - alpha) * std::log(s + h); break;
        case THKind::Three: l += (-a2 - alpha) * std::log(sh + h) + (-a2 + alpha) * std::log(ch + h); break;
        case THKind::Four: l += (-a2 + alpha) * std::log(sh + h) + (-a2 - alpha) * std::log(ch + h); break;
        }
    }
    return std::exp(l);
}

// ---------------------------------------------------------------------------
// Numeric I_{H(n)}
// ---------------------------------------------------------------------------

/// ln of the integrand of I_{H(n)}(alpha, .) at one point (without the 1/pi^m).
inline double log_i_hn_integrand(const GroupLabel& group, double alpha, const double* t, int m, int n)
{
    const double a2 = alpha * alpha, h = 1.0 / n;
    double l = log_merging_factor(alpha, t, m, n);
    for (int j = 0; j < m; ++j) {
        const double s = 2.0 * std::sin(t[j]), sh = 2.0 * std::sin(0.5 * t[j]), ch = 2.0 * std::cos(0.5 * t[j]);
        switch (group.group) {
        case Group::Sp: l += (-a2 - alpha) * std::log(s + h); break;
        case Group::SOEven: l += (-a2 + alpha) * std::log(s + h); break;
        case Group::SOMinusEven: l += (-a2 - alpha) * std::log(s + h) + 2.0 * alpha * std::log(s); break;
        case Group::SOOdd:
            l += (-a2 - alpha) * std::log(sh + h) + (-a2 + alpha) * std::log(ch + h) + 2.0 * alpha * std::log(sh);
            break;
        case Group::SOMinusOdd:
            l += (-a2 + alpha) * std::log(sh + h) + (-a2 - alpha) * std::log(ch + h) + 2.0 * alpha * std::log(ch);
            break;
        default: throw PreconditionError("i_hn: need a base ensemble");
        }
    }
    return l;
}

struct IntegralQuad {
    int nodes_per_panel = 8;
    int depth = 0;                    ///< refinement levels toward the boundary (0: ceil(log2 n) + 4)
    double max_width = std::numbers::pi / 8.0;
    double tol = 1e-6;                ///< relative change allowed when raising the node count by half
    std::size_t mc_samples = 1000000; ///< sampling fallback for m > 3
    Seed seed{};
};

/// I_{H(n)}(alpha, (0, pi)^m). Product quadrature on the ordered simplex for
/// m <= 3 (the integrand is symmetric), uniform sampling of the cube above.
inline ExactResult i_hn_numeric(const GroupLabel& group, int m, double alpha, int n, const IntegralQuad& q = {})
{
    if (!group.is_base()) throw PreconditionError("i_hn_numeric: need a base ensemble");
    if (m < 1) throw PreconditionError("i_hn_numeric: m must be at least 1");
    if (n < 1) throw PreconditionError("i_hn_numeric: n must be at least 1");
    const double pi = std::numbers::pi;

    if (m > 3) {
        if (q.mc_samples < 2) throw PreconditionError("i_hn_numeric: need at least 2 samples");
        std::vector<double> vals(q.mc_samples);
        parallel_for(q.mc_samples, [&](std::size_t i) {
            auto rng = make_rng(Seed{q.seed.master, i});
            std::uniform_real_distribution<double> u(0.0, pi);
            std::vector<double> t(m);
            for (auto& x : t) x = u(rng);
            vals[i] = std::exp(log_i_hn_integrand(group, alpha, t.data(), m, n));
        });
        double mean = 0.0, se = 0.0;
        detail::mean_and_stderr(vals, mean, se);
        return {mean, se, q.mc_samples};
    }

    const int depth = q.depth > 0 ? q.depth : detail::default_depth(n);
    const double h_min = pi * std::ldexp(1.0, -depth - 1);
    auto evaluate = [&](int nodes) {
        const auto rule = quad::ordered_simplex_rule(m, 0.0, pi, h_min, q.max_width, nodes);
        std::vector<double> terms(rule.size());
        parallel_for(rule.size(), [&](std::size_t i) {
            terms[i] = rule.weights[i] * std::exp(log_i_hn_integrand(group, alpha, rule.point(i), m, n));
        });
        double scale = 1.0;
        for (int k = 1; k <= m; ++k) scale *= k / pi;
        return std::make_pair(ordered_sum(terms) * scale, rule.size());
    };
    const auto [lo, n_lo] = evaluate(q.nodes_per_panel);
    const auto [hi, n_hi] = evaluate(q.nodes_per_panel + (q.nodes_per_panel + 1) / 2);
    ExactResult r{hi, std::fabs(hi - lo), n_lo + n_hi};
    if (!(r.error_estimate <= q.tol * std::fabs(hi)))
        throw AccuracyError("i_hn_numeric: quadrature refinement changed the result by "
                            + std::to_string(r.error_estimate / std::fabs(hi)) + " (relative)");
    return r;
}

// ---------------------------------------------------------------------------

struct ScalingFit {
    double slope;
    double std_error;
    double intercept;
};

/// Least-squares line through (ln n, ln value).
inline ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& points)
{
    if (points.size() < 3) throw PreconditionError("fit_scaling_exponent: need at least 3 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].first > 0.0)) throw DomainError("fit_scaling_exponent: n must be positive");
        if (!(points[i].second > 0.0)) throw DomainError("fit_scaling_exponent: values must be positive");
        if (i > 0 && !(points[i].first > points[i - 1].first))
            throw PreconditionError("fit_scaling_exponent: n must be strictly increasing");
    }
    const double k = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += std::log(x);
        my += std::log(y);
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (std::log(x) - mx) * (std::log(x) - mx);
        sxy += (std::log(x) - mx) * (std::log(y) - my);
    }
    const double slope = sxy / sxx, intercept = my - slope * mx;
    double ssr = 0.0;
    for (const auto& [x, y] : points) {
        const double r = std::log(y) - intercept - slope * std::log(x);
        ssr += r * r;
    }
    return {slope, std::sqrt(ssr / (k - 2.0) / sxx), intercept};
}

} // namespace momlab
