#pragma once

// Moments of moments
//   MoM(m, alpha) = E_U [ ((1/2pi) int_0^{2pi} |p(theta; U)|^{2 alpha} dtheta)^m ]
// by Monte Carlo over Haar samples and by integrating the exact joint moment
// over (0, pi)^m.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"
#include "th_determinant.hpp"

namespace momlab {

struct MoMParams {
    GroupLabel group;
    double m = 1;
    double alpha = 0;
};

struct MCEstimate {
    double mean = 0;
    double std_error = 0;
    std::size_t samples = 0;
    Seed seed{};
};

/// (1/2pi) int_0^{2pi} |p(theta; U)|^{2 alpha} dtheta for U with the given spectrum.
///
/// |p|^2 = prod_k (2cos theta - 2cos theta'_k)^2 (2 - 2cos theta)^{fixed_plus} (2 + 2cos theta)^{fixed_minus};
/// the integrand is even, so the integral is taken over [0, pi] with panels
/// broken at every theta'_k.
inline double inner_integral(const EigenAngles& angles, double alpha, int nodes_per_panel = 16)
{
    if (nodes_per_panel < 4) throw PreconditionError("inner_integral: need at least 4 nodes per panel");
    if (alpha == 0.0) return 1.0;
    const double pi = std::numbers::pi;
    std::vector<double> breaks{0.0};
    for (double t : angles.free_angles)
        if (t > 0.0 && t < pi) breaks.push_back(t);
    breaks.push_back(pi);
    std::sort(breaks.begin(), breaks.end());
    std::vector<quad::Node> nodes;
    quad::append_panel_nodes(breaks, nodes_per_panel, nodes);

    std::vector<double> two_cos(angles.free_angles.size());
    for (std::size_t k = 0; k < two_cos.size(); ++k) two_cos[k] = 2.0 * std::cos(angles.free_angles[k]);

    std::vector<double> logs(nodes.size());
    double top = -HUGE_VAL;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double c = 2.0 * std::cos(nodes[i].x);
        double l = 0.0;
        for (double tc : two_cos) l += 2.0 * std::log(std::fabs(c - tc));
        if (angles.fixed_plus) l += angles.fixed_plus * std::log(2.0 - c);
        if (angles.fixed_minus) l += angles.fixed_minus * std::log(2.0 + c);
        logs[i] = alpha * l;
        top = std::max(top, logs[i]);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += nodes[i].w * std::exp(logs[i] - top);
    return sum * std::exp(top) / pi;
}

namespace detail {

inline std::uint64_t component_master(std::uint64_t master, int component)
{
    return component == 0 ? master : mix64(master ^ (0x5a5a5a5aULL + static_cast<std::uint64_t>(component)));
}

inline EigenAngles sample_eigenangles(const GroupLabel& g, const Seed& seed)
{
    switch (g.group) {
    case Group::Sp: return eigenangles(sample_symplectic(g.n, seed), g);
    case Group::SOEven:
    case Group::SOOdd: return eigenangles(sample_orthogonal(g.dimension(), 1, seed), g);
    case Group::SOMinusEven:
    case Group::SOMinusOdd: return eigenangles(sample_orthogonal(g.dimension(), -1, seed), g);
    default: throw PreconditionError("sample_eigenangles: need a base ensemble");
    }
}

// Per-sample inner integrals for one base ensemble; sample i uses stream i.
inline std::vector<double> inner_integrals(const GroupLabel& g, double alpha, std::size_t samples,
                                           std::uint64_t master, int nodes_per_panel)
{
    std::vector<double> out(samples);
    parallel_for(samples, [&](std::size_t i) {
        out[i] = inner_integral(sample_eigenangles(g, Seed{master, i}), alpha, nodes_per_panel);
    });
    return out;
}

inline void mean_and_stderr(const std::vector<double>& v, double& mean, double& se)
{
    const double N = static_cast<double>(v.size());
    mean = ordered_sum(v) / N;
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
    se = std::sqrt(ordered_sum(sq) / (N - 1.0) / N);
}

} // namespace detail

/// Monte Carlo MoM for several m from one set of samples. Real m > 0 is
/// accepted (experimental). O(N) averages its two components, each from its
/// own sample stream.
inline std::vector<MCEstimate> mom_mc_multi(const GroupLabel& group, const std::vector<double>& ms, double alpha,
                                            std::size_t samples, const Seed& seed, int nodes_per_panel = 16)
{
    if (samples < 100) throw PreconditionError("mom_mc: need at least 100 samples");
    if (group.n < 1) throw PreconditionError("mom_mc: n must be at least 1");
    if (!(alpha > -0.5)) throw PreconditionError("mom_mc: alpha must exceed -1/2");
    for (double m : ms)
        if (!(m > 0.0)) throw PreconditionError("mom_mc: m must be positive");

    std::vector<MCEstimate> out(ms.size());
    if (alpha == 0.0) {
        for (auto& e : out) e = {1.0, 0.0, samples, seed};
        return out;
    }
    std::vector<GroupLabel> parts{group};
    if (!group.is_base()) {
        const auto [a, b] = group.components();
        parts = {a, b};
    }
    std::vector<std::vector<double>> integrals;
    for (std::size_t c = 0; c < parts.size(); ++c)
        integrals.push_back(detail::inner_integrals(parts[c], alpha, samples,
                                                    detail::component_master(seed.master, static_cast<int>(c)),
                                                    nodes_per_panel));
    for (std::size_t k = 0; k < ms.size(); ++k) {
        double mean = 0.0, var = 0.0;
        for (const auto& ints : integrals) {
            std::vector<double> powed(ints.size());
            for (std::size_t i = 0; i < ints.size(); ++i) powed[i] = std::pow(ints[i], ms[k]);
            double mu = 0.0, se = 0.0;
            detail::mean_and_stderr(powed, mu, se);
            mean += mu;
            var += se * se;
        }
        const double parts_n = static_cast<double>(parts.size());
        out[k] = {mean / parts_n, std::sqrt(var) / parts_n, samples, seed};
    }
    return out;
}

inline MCEstimate mom_mc(const MoMParams& p, std::size_t samples, const Seed& seed, int nodes_per_panel = 16)
{
    return mom_mc_multi(p.group, {p.m}, p.alpha, samples, seed, nodes_per_panel).front();
}

/// Quadrature settings for the exact route. Zero fields are chosen from n.
struct ExactQuad {
    int nodes_per_panel = 8;
    int depth = 0;           ///< geometric refinement levels toward the simplex boundary (0: ceil(log2 n) + 4)
    double max_width = 0.0;  ///< panel width cap (0: min(pi/8, 3/n))
    double tol = 1e-6;       ///< allowed relative change when the node count per panel is raised by half
    JointOptions joint{};
};

struct ExactResult {
    double value = 0;
    double error_estimate = 0;
    std::size_t evaluations = 0;
};

namespace detail {

inline int default_depth(int n) { return static_cast<int>(std::ceil(std::log2(std::max(n, 1)))) + 4; }

// (m! / pi^m) sum_i w_i E(theta_i) over the ordered simplex
inline double simplex_mom(const GroupLabel& g, int m, double alpha, const quad::SimplexRule& rule,
                          const JointOptions& joint)
{
    std::vector<double> terms(rule.size());
    parallel_for(rule.size(), [&](std::size_t i) {
        const double* p = rule.point(i);
        terms[i] = rule.weights[i] * joint_moment_exact(g, alpha, std::vector<double>(p, p + m), joint).value();
    });
    double scale = 1.0;
    for (int k = 1; k <= m; ++k) scale *= k / std::numbers::pi;
    return ordered_sum(terms) * scale;
}

inline ExactResult mom_exact_base(const GroupLabel& g, int m, double alpha, const ExactQuad& q)
{
    const double pi = std::numbers::pi;
    const int depth = q.depth > 0 ? q.depth : default_depth(g.n);
    const double width = q.max_width > 0.0 ? q.max_width : std::min(pi / 8.0, 3.0 / g.n);
    const double h_min = pi * std::ldexp(1.0, -depth - 1);
    const int q_lo = q.nodes_per_panel, q_hi = q.nodes_per_panel + (q.nodes_per_panel + 1) / 2;
    const auto rule_lo = quad::ordered_simplex_rule(m, 0.0, pi, h_min, width, q_lo);
    const auto rule_hi = quad::ordered_simplex_rule(m, 0.0, pi, h_min, width, q_hi);
    const double lo = simplex_mom(g, m, alpha, rule_lo, q.joint);
    const double hi = simplex_mom(g, m, alpha, rule_hi, q.joint);
    ExactResult r{hi, std::fabs(hi - lo), rule_lo.size() + rule_hi.size()};
    if (!(r.error_estimate <= q.tol * std::fabs(hi)))
        throw AccuracyError("mom_exact: quadrature refinement changed the result by "
                            + std::to_string(r.error_estimate / std::fabs(hi)) + " (relative)");
    return r;
}

} // namespace detail

/// MoM by integrating the exact joint moment over the ordered simplex
/// 0 < theta_1 < ... < theta_m < pi and multiplying by m!.
inline ExactResult mom_exact_report(const MoMParams& p, const ExactQuad& q = {})
{
    const int m = static_cast<int>(p.m);
    if (static_cast<double>(m) != p.m || m < 1) throw PreconditionError("mom_exact: m must be a positive integer");
    if (m > 3) throw PreconditionError("mom_exact: m > 3 is not supported by the exact route");
    if (p.group.n < 1) throw PreconditionError("mom_exact: n must be at least 1");
    if (!(p.alpha >= 0.0)) throw PreconditionError("mom_exact: alpha must be non-negative");
    if (q.nodes_per_panel < 2) throw PreconditionError("mom_exact: need at least 2 nodes per panel");
    if (p.group.is_base()) return detail::mom_exact_base(p.group, m, p.alpha, q);
    const auto [a, b] = p.group.components();
    const auto ra = detail::mom_exact_base(a, m, p.alpha, q);
    const auto rb = detail::mom_exact_base(b, m, p.alpha, q);
    return {0.5 * (ra.value + rb.value), 0.5 * (ra.error_estimate + rb.error_estimate),
            ra.evaluations + rb.evaluations};
}

inline double mom_exact(const MoMParams& p, const ExactQuad& q = {}) { return mom_exact_report(p, q).value; }

} // namespace momlab
