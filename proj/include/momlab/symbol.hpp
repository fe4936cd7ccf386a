#pragma once

// The even Fisher-Hartwig symbol
//   f(e^{i phi}) = prod_j |e^{i phi} - e^{i theta_j}|^{2 alpha} |e^{i phi} - e^{-i theta_j}|^{2 alpha}
// and three independent routes to its Fourier coefficients:
//   - graded:      Gauss-Legendre on panels refined geometrically toward the
//                  algebraic singularities (default, fast and accurate for all alpha)
//   - quadrature:  uniform-grid discrete transform (aliasing error ~ N^{-1-2 alpha})
//   - convolution: exact single-factor coefficients convolved with FFTs
//                  (truncation error ~ L^{-1-4 alpha}, exact for integer alpha)

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace momlab {

/// m distinct angles 0 < theta_1 < ... < theta_m < pi and an exponent alpha > -1/2.
class SingularitySet {
public:
    SingularitySet(double alpha, std::vector<double> thetas) : alpha_(alpha), thetas_(std::move(thetas))
    {
        if (!(alpha_ > -0.5)) throw PreconditionError("SingularitySet: alpha must exceed -1/2");
        if (thetas_.empty()) throw PreconditionError("SingularitySet: need at least one angle");
        for (std::size_t j = 0; j < thetas_.size(); ++j) {
            const double t = thetas_[j];
            if (!(t > 0.0 && t < std::numbers::pi))
                throw PreconditionError("SingularitySet: angles must lie in (0, pi)");
            if (j > 0 && !(t > thetas_[j - 1]))
                throw PreconditionError("SingularitySet: angles must be strictly increasing");
        }
    }

    /// Sorts the angles first; coincident angles are still rejected.
    static SingularitySet from_unordered(double alpha, std::vector<double> thetas)
    {
        std::sort(thetas.begin(), thetas.end());
        return SingularitySet(alpha, std::move(thetas));
    }

    int m() const { return static_cast<int>(thetas_.size()); }
    double alpha() const { return alpha_; }
    const std::vector<double>& thetas() const { return thetas_; }

private:
    double alpha_;
    std::vector<double> thetas_;
};

/// Fourier coefficients f_0..f_K of an even real function (f_{-j} = f_j).
struct FourierSeries {
    std::vector<double> coeffs;

    std::size_t K() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    double operator[](long j) const
    {
        const auto a = static_cast<std::size_t>(j < 0 ? -j : j);
        return a < coeffs.size() ? coeffs[a] : 0.0;
    }
};

/// f(e^{i theta}); exactly zero at theta = theta_j.
inline double symbol_eval(const SingularitySet& s, double theta)
{
    if (s.alpha() == 0.0) return 1.0;
    // (2-2cos(t-tj))(2-2cos(t+tj)) = (4 sin((t-tj)/2) sin((t+tj)/2))^2
    double prod = 1.0;
    for (double tj : s.thetas()) prod *= 4.0 * std::sin(0.5 * (theta - tj)) * std::sin(0.5 * (theta + tj));
    return std::pow(std::fabs(prod), 2.0 * s.alpha());
}

// ---------------------------------------------------------------------------
// Graded Gauss-Legendre route
// ---------------------------------------------------------------------------

struct GradedOptions {
    double tol = 1e-15;  ///< size of the innermost panel is tol^{1/(1+2 alpha)}
    int nodes_per_panel = 16;
};

namespace detail {

inline int halvings_to(double span, double target)
{
    if (!(target > 0.0) || target >= span) return 0;
    return static_cast<int>(std::ceil(std::log2(span / target)));
}

// Adds sum_nodes w f(x) e^{i j x} (real part) into acc[j], j = 0..K.
inline void accumulate_cosine_moments(const std::vector<quad::Node>& nodes, const std::vector<double>& fvals,
                                      std::vector<double>& acc)
{
    const std::size_t K = acc.size() - 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double v = nodes[i].w * fvals[i];
        if (v == 0.0) continue;
        const double x = nodes[i].x;
        const std::complex<double> step(std::cos(x), std::sin(x));
        std::complex<double> z(1.0, 0.0);
        for (std::size_t j = 0; j <= K; ++j) {
            if (j % 128 == 0 && j > 0) z = std::polar(1.0, static_cast<double>(j) * x);
            acc[j] += v * z.real();
            z *= step;
        }
    }
}

} // namespace detail

/// f_j = (1/pi) int_0^pi f(phi) cos(j phi) dphi on a mesh graded toward each
/// theta_j (singular) and toward 0 / pi down to the distance of the mirrored
/// singularities -theta_1, 2pi - theta_m.
inline FourierSeries fourier_coeffs_graded(const SingularitySet& s, std::size_t K, const GradedOptions& opt = {})
{
    FourierSeries out{std::vector<double>(K + 1, 0.0)};
    if (s.alpha() == 0.0) {
        out.coeffs[0] = 1.0;
        return out;
    }
    const double pi = std::numbers::pi;
    const auto& th = s.thetas();
    const double h_min = std::pow(opt.tol, 1.0 / (1.0 + 2.0 * s.alpha()));
    const double max_width = std::min(0.5, 10.0 / static_cast<double>(std::max<std::size_t>(K, 1)));

    std::vector<double> ends{0.0};
    ends.insert(ends.end(), th.begin(), th.end());
    ends.push_back(pi);

    std::vector<quad::Node> nodes;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const double a = ends[i], b = ends[i + 1];
        const double half = 0.5 * (b - a);
        const double target_l = i == 0 ? th.front() : h_min;
        const double target_r = i + 2 == ends.size() ? pi - th.back() : h_min;
        quad::Grading g;
        g.depth_left = detail::halvings_to(half, target_l);
        g.depth_right = detail::halvings_to(half, target_r);
        // an ungraded end still gets a midpoint so both halves are graded independently
        if (g.depth_left == 0 && g.depth_right > 0) g.depth_left = 1;
        if (g.depth_right == 0 && g.depth_left > 0) g.depth_right = 1;
        g.max_width = max_width;
        quad::append_panel_nodes(quad::graded_breaks(a, b, g), opt.nodes_per_panel, nodes);
    }
    std::vector<double> fvals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) fvals[i] = symbol_eval(s, nodes[i].x);
    detail::accumulate_cosine_moments(nodes, fvals, out.coeffs);
    for (double& c : out.coeffs) c /= pi;
    return out;
}

// ---------------------------------------------------------------------------
// Uniform-grid discrete transform route
// ---------------------------------------------------------------------------

/// Imaginary residue above which the uniform-grid route reports an accuracy error.
inline constexpr double kImaginaryResidualLimit = 1e-8;

inline std::size_t minimum_grid_size(const SingularitySet& s, std::size_t K)
{
    const auto band = static_cast<std::size_t>(std::ceil(16.0 * s.m() * (1.0 + s.alpha())));
    return 8 * std::max(K, band);
}

/// f_j from N equispaced samples of the symbol (N a power of two).
inline FourierSeries fourier_coeffs_quadrature(const SingularitySet& s, std::size_t K, std::size_t grid_size)
{
    if (grid_size == 0 || (grid_size & (grid_size - 1)) != 0)
        throw PreconditionError("fourier_coeffs_quadrature: grid size must be a power of two");
    if (grid_size < minimum_grid_size(s, K))
        throw PreconditionError("fourier_coeffs_quadrature: grid too small for K, m and alpha");
    std::vector<double> samples(grid_size);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(grid_size);
    for (std::size_t l = 0; l < grid_size; ++l) samples[l] = symbol_eval(s, step * static_cast<double>(l));
    const auto spectrum = fft::real_forward(std::move(samples));
    FourierSeries out{std::vector<double>(K + 1)};
    const double inv = 1.0 / static_cast<double>(grid_size);
    double worst_imag = 0.0;
    for (std::size_t j = 0; j <= K; ++j) {
        out.coeffs[j] = spectrum[j].real() * inv;
        worst_imag = std::max(worst_imag, std::fabs(spectrum[j].imag() * inv));
    }
    if (worst_imag > kImaginaryResidualLimit)
        throw AccuracyError("fourier_coeffs_quadrature: imaginary residual " + std::to_string(worst_imag));
    return out;
}

// ---------------------------------------------------------------------------
// Convolution route
// ---------------------------------------------------------------------------

/// Coefficients c_0..c_L of |1 - e^{i phi}|^{2 alpha} = sum_k c_|k| e^{i k phi}:
///   c_k = (-1)^k Gamma(1+2a) / (Gamma(1+a+k) Gamma(1+a-k)),
/// evaluated as c_0 = Gamma(1+2a)/Gamma(1+a)^2 and c_{k+1} = c_k (k-a)/(k+1+a).
inline std::vector<double> single_factor_coeffs(double alpha, std::size_t L)
{
    std::vector<double> c(L + 1, 0.0);
    c[0] = std::exp(specfun::log_gamma(1.0 + 2.0 * alpha) - 2.0 * specfun::log_gamma(1.0 + alpha));
    for (std::size_t k = 0; k < L; ++k) {
        const double kk = static_cast<double>(k);
        c[k + 1] = c[k] * (kk - alpha) / (kk + 1.0 + alpha);
    }
    return c;
}

struct ConvolutionOptions {
    double tol = 1e-12;                ///< allowed truncation loss per coefficient
    std::size_t terms = 0;             ///< single-factor truncation L (0: choose from tol)
    std::size_t max_terms = 1u << 18;  ///< upper limit for the automatic choice
};

namespace detail {

inline bool is_integer(double x) { return std::floor(x) == x; }

// Loss on f_j (j <= K) from dropping |k| > L in one factor: the dropped
// coefficients ~ k^{-1-2a} meet the other factors' coefficients at index
// >= L-K, which decay the same way. With 2m factors and the remaining
// factors bounded by S = sum_k |c_k| each:
//   loss ~ 2m * 2 * S^{2m-2} * |c_L| |c_{L-K}| L / (1 + 4a).
inline double truncation_loss(const std::vector<double>& c, std::size_t K, int m, double alpha)
{
    const std::size_t L = c.size() - 1;
    double S = c[0];
    for (std::size_t k = 1; k <= L; ++k) S += 2.0 * std::fabs(c[k]);
    const std::size_t inner = L > K ? L - K : 1;
    return 4.0 * m * std::pow(S, 2 * m - 2) * std::fabs(c[L]) * std::fabs(c[inner]) * static_cast<double>(L)
           / (1.0 + 4.0 * alpha);
}

inline std::size_t next_pow2(std::size_t x)
{
    std::size_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

} // namespace detail

/// Estimated truncation loss of the convolution route for a given L.
inline double convolution_truncation_loss(const SingularitySet& s, std::size_t K, std::size_t L)
{
    return detail::truncation_loss(single_factor_coeffs(s.alpha(), L), K, s.m(), s.alpha());
}

/// f_j from the product of the 2m single-singularity series, each truncated at L.
inline FourierSeries fourier_coeffs_convolution(const SingularitySet& s, std::size_t K,
                                                const ConvolutionOptions& opt = {})
{
    if (K < 1) throw PreconditionError("fourier_coeffs_convolution: K must be at least 1");
    const double alpha = s.alpha();
    const int m = s.m();

    std::size_t L = opt.terms;
    std::vector<double> c;
    if (L == 0 && detail::is_integer(alpha) && alpha >= 0.0) {
        L = static_cast<std::size_t>(alpha) + 1;  // finite trigonometric polynomial
        c = single_factor_coeffs(alpha, L);
    } else if (L == 0) {
        L = detail::next_pow2(std::max<std::size_t>(K, 16));
        for (;;) {
            c = single_factor_coeffs(alpha, L);
            if (detail::truncation_loss(c, K, m, alpha) <= opt.tol) break;
            if (L >= opt.max_terms)
                throw AccuracyError("fourier_coeffs_convolution: truncation loss above tolerance at L = "
                                    + std::to_string(L));
            L *= 2;
        }
    } else {
        c = single_factor_coeffs(alpha, L);
        if (detail::truncation_loss(c, K, m, alpha) > opt.tol)
            throw AccuracyError("fourier_coeffs_convolution: truncation loss above tolerance");
    }

    const std::size_t M = detail::next_pow2(std::max(4 * static_cast<std::size_t>(m) * L + 1, 2 * K + 2));
    fft::cvec product(M, {1.0, 0.0});
    fft::cvec factor(M);
    for (double theta : s.thetas()) {
        std::fill(factor.begin(), factor.end(), std::complex<double>{});
        factor[0] = c[0];
        for (std::size_t k = 1; k <= L; ++k) {
            const double ph = static_cast<double>(k) * theta;
            factor[k] = c[k] * std::complex<double>(std::cos(ph), -std::sin(ph));
            factor[M - k] = c[k] * std::complex<double>(std::cos(ph), std::sin(ph));
        }
        fft::transform(factor, true);
        // the e^{-i theta} partner has conjugated coefficients: B(s) = conj(A(-s))
        for (std::size_t q = 0; q < M; ++q) product[q] *= factor[q] * std::conj(factor[(M - q) % M]);
    }
    fft::transform(product, false);
    FourierSeries out{std::vector<double>(K + 1)};
    const double inv = 1.0 / static_cast<double>(M);
    for (std::size_t j = 0; j <= K; ++j) out.coeffs[j] = product[j].real() * inv;
    return out;
}

// ---------------------------------------------------------------------------

enum class FourierMethod { Graded, Quadrature, Convolution };

struct FourierOptions {
    FourierMethod method = FourierMethod::Graded;
    GradedOptions graded{};
    ConvolutionOptions convolution{};
    std::size_t grid_size = 0;  ///< uniform-grid route; 0 picks max(minimum, 2^20)
};

/// Coefficients f_0..f_K by the selected route. Integer alpha always uses the
/// convolution route, which is exact there.
inline FourierSeries fourier_coeffs(const SingularitySet& s, std::size_t K, const FourierOptions& opt = {})
{
    if (s.alpha() >= 0.0 && detail::is_integer(s.alpha()) && opt.method == FourierMethod::Graded)
        return fourier_coeffs_convolution(s, K, opt.convolution);
    switch (opt.method) {
    case FourierMethod::Graded:
        return fourier_coeffs_graded(s, K, opt.graded);
    case FourierMethod::Convolution:
        return fourier_coeffs_convolution(s, K, opt.convolution);
    case FourierMethod::Quadrature: {
        std::size_t n = opt.grid_size;
        if (n == 0) n = std::max(detail::next_pow2(minimum_grid_size(s, K)), std::size_t{1} << 20);
        return fourier_coeffs_quadrature(s, K, n);
    }
    }
    throw PreconditionError("fourier_coeffs: unknown method");
}

} // namespace momlab
