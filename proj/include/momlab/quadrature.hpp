#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "errors.hpp"

namespace momlab::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussLegendre compute_gauss_legendre(int q)
{
    GaussLegendre rule;
    rule.nodes.resize(q);
    rule.weights.resize(q);
    for (int i = 0; i < (q + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_q.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= q; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= q; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = q * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[q - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[q - 1 - i] = w;
    }
    if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
    return rule;
}

} // namespace detail

/// Cached q-point Gauss-Legendre rule; safe to call from many threads.
inline const GaussLegendre& gauss_legendre(int q)
{
    if (q < 1) throw PreconditionError("gauss_legendre: need at least one node");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[q];
    if (!slot) slot = std::make_unique<GaussLegendre>(detail::compute_gauss_legendre(q));
    return *slot;
}

/// A quadrature node with its weight.
struct Node {
    double x;
    double w;
};

/// Append the q-point rule mapped onto every panel [b[i], b[i+1]].
inline void append_panel_nodes(const std::vector<double>& breaks, int q, std::vector<Node>& out)
{
    const auto& rule = gauss_legendre(q);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (!(b > a)) continue;
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (int k = 0; k < q; ++k) out.push_back({mid + half * rule.nodes[k], half * rule.weights[k]});
    }
}

/// Options for a geometrically graded panel mesh on [a, b].
struct Grading {
    int depth_left = 0;   ///< halvings toward a (0: no grading)
    int depth_right = 0;  ///< halvings toward b
    double max_width = 0; ///< upper bound on panel width (0: unbounded)
};

/// Breakpoints of a panel mesh on [a, b] refined geometrically (ratio 1/2)
/// toward the ends, then split uniformly wherever a panel exceeds max_width.
inline std::vector<double> graded_breaks(double a, double b, const Grading& g)
{
    std::vector<double> pts{a, b};
    const double len = b - a;
    if (len <= 0.0) return {a, b};
    if (g.depth_left > 0 && g.depth_right > 0) pts.push_back(a + 0.5 * len);
    const double span_l = g.depth_right > 0 ? 0.5 * len : len;
    const double span_r = g.depth_left > 0 ? 0.5 * len : len;
    for (int k = 1; k <= g.depth_left; ++k) pts.push_back(a + span_l * std::ldexp(1.0, -k));
    for (int k = 1; k <= g.depth_right; ++k) pts.push_back(b - span_r * std::ldexp(1.0, -k));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (g.max_width <= 0.0) return pts;
    std::vector<double> out{pts.front()};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double w = pts[i + 1] - pts[i];
        const int pieces = static_cast<int>(std::ceil(w / g.max_width));
        for (int k = 1; k < pieces; ++k) out.push_back(pts[i] + w * k / pieces);
        out.push_back(pts[i + 1]);
    }
    return out;
}

/// Nodes of the q-point rule on a graded mesh of [a, b].
inline std::vector<Node> graded_nodes(double a, double b, const Grading& g, int q)
{
    std::vector<Node> out;
    append_panel_nodes(graded_breaks(a, b, g), q, out);
    return out;
}

/// Nodes of an m-fold product rule on the ordered simplex lo < x_1 < ... < x_m < hi.
/// Each coordinate ranges over (x_{k-1}, hi) on a mesh graded geometrically
/// toward both ends until panels reach h_min, then capped at max_width.
struct SimplexRule {
    int dim = 0;
    std::vector<double> points;  ///< dim coordinates per node
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    const double* point(std::size_t i) const { return points.data() + i * static_cast<std::size_t>(dim); }
};

namespace detail {

inline int halvings(double span, double target)
{
    if (!(target > 0.0) || target >= span) return 0;
    return static_cast<int>(std::ceil(std::log2(span / target)));
}

inline void simplex_recurse(int level, double lo, double hi, double h_min, double max_width, int q,
                            std::vector<double>& prefix, double weight, SimplexRule& out)
{
    Grading g;
    g.depth_left = halvings(0.5 * (hi - lo), h_min);
    g.depth_right = g.depth_left;
    g.max_width = max_width;
    for (const Node& nd : graded_nodes(lo, hi, g, q)) {
        prefix[level] = nd.x;
        if (level + 1 == out.dim) {
            out.points.insert(out.points.end(), prefix.begin(), prefix.end());
            out.weights.push_back(weight * nd.w);
        } else {
            simplex_recurse(level + 1, nd.x, hi, h_min, max_width, q, prefix, weight * nd.w, out);
        }
    }
}

} // namespace detail

inline SimplexRule ordered_simplex_rule(int m, double lo, double hi, double h_min, double max_width, int q)
{
    if (m < 1) throw PreconditionError("ordered_simplex_rule: dimension must be at least 1");
    SimplexRule rule;
    rule.dim = m;
    std::vector<double> prefix(m);
    detail::simplex_recurse(0, lo, hi, h_min, max_width, q, prefix, 1.0, rule);
    return rule;
}

} // namespace momlab::quad
