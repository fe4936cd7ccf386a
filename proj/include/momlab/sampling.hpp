#pragma once

// Haar sampling of SO(N), SO^-(N) and Sp(2n), and recovery of eigenangles
// from the Hermitian part (U + U^dagger)/2, whose eigenvalues are cos(theta).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "th_determinant.hpp"

namespace momlab {

/// Reproducible generator identity. Distinct streams of one master seed are
/// independent; identical (master, stream) pairs replay bit for bit.
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;
};

inline std::mt19937_64 make_rng(const Seed& seed)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed.master), static_cast<std::uint32_t>(seed.master >> 32),
                      static_cast<std::uint32_t>(seed.stream), static_cast<std::uint32_t>(seed.stream >> 32)};
    return std::mt19937_64(seq);
}

/// splitmix64 finalizer, used to derive sub-seeds.
inline std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace detail {

template <class T>
inline double abs2(const T& x)
{
    if constexpr (std::is_same_v<T, double>)
        return x * x;
    else
        return std::norm(x);
}

template <class T>
inline T conj_of(const T& x)
{
    if constexpr (std::is_same_v<T, double>)
        return x;
    else
        return std::conj(x);
}

// <u, v> = sum conj(u_i) v_i
template <class T>
inline T dot(const std::vector<T>& u, const std::vector<T>& v)
{
    T s{};
    for (std::size_t i = 0; i < u.size(); ++i) s += conj_of(u[i]) * v[i];
    return s;
}

template <class T>
inline double norm(const std::vector<T>& v)
{
    double s = 0.0;
    for (const auto& x : v) s += abs2(x);
    return std::sqrt(s);
}

// Two passes of classical Gram-Schmidt against an orthonormal basis;
// returns the residual norm before normalization.
template <class T>
inline double orthonormalize(std::vector<T>& v, const std::vector<std::vector<T>>& basis)
{
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) {
            const T c = dot(b, v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
        }
    const double r = norm(v);
    if (r > 0.0)
        for (auto& x : v) x /= r;
    return r;
}

inline constexpr double kRankTolerance = 1e-10;

inline bool orthogonal_attempt(int N, const Seed& seed, Matrix<double>& q)
{
    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<std::vector<double>> cols;
    cols.reserve(N);
    for (int k = 0; k < N; ++k) {
        std::vector<double> v(N);
        for (auto& x : v) x = gauss(rng);
        const double before = norm(v);
        // the positive normalization fixes the sign of R's diagonal, making q Haar on O(N)
        if (orthonormalize(v, cols) <= kRankTolerance * before) return false;
        cols.push_back(std::move(v));
    }
    q = Matrix<double>(N, N);
    for (int k = 0; k < N; ++k)
        for (int i = 0; i < N; ++i) q(i, k) = cols[k][i];
    return true;
}

} // namespace detail

/// Haar-distributed matrix on SO(N) (want_det = +1) or SO^-(N) (want_det = -1).
inline Matrix<double> sample_orthogonal(int N, int want_det, const Seed& seed)
{
    if (N < 1) throw PreconditionError("sample_orthogonal: N must be at least 1");
    if (want_det != 1 && want_det != -1) throw PreconditionError("sample_orthogonal: want_det must be +1 or -1");
    Matrix<double> q;
    if (!detail::orthogonal_attempt(N, seed, q) &&
        !detail::orthogonal_attempt(N, Seed{seed.master, mix64(seed.stream)}, q))
        throw ConstructionError("sample_orthogonal: Gaussian matrix numerically rank deficient twice");
    if (log_det(q).sign != want_det)
        for (int k = 0; k < N; ++k) q(0, k) = -q(0, k);
    return q;
}

/// Largest entry of |U J U^T - J| for J = [[0, I], [-I, 0]].
inline double symplectic_residual(const Matrix<std::complex<double>>& u)
{
    const std::size_t N = u.rows(), n = N / 2;
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            // (U J U^T)_{ik} = sum_j U_ij (J U^T)_jk ; J U^T rows: top = U^T bottom rows, bottom = -U^T top rows
            std::complex<double> s{};
            for (std::size_t j = 0; j < n; ++j) s += u(i, j) * u(k, j + n) - u(i, j + n) * u(k, j);
            double target = 0.0;
            if (k == i + n) target = 1.0;
            if (i == k + n) target = -1.0;
            worst = std::max(worst, std::abs(s - target));
        }
    return worst;
}

/// Largest entry of |U^dagger U - I|.
template <class T>
inline double unitarity_residual(const Matrix<T>& u)
{
    const std::size_t N = u.rows();
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            T s{};
            for (std::size_t j = 0; j < N; ++j) s += detail::conj_of(u(j, i)) * u(j, k);
            worst = std::max(worst, std::abs(s - T(i == k ? 1.0 : 0.0)));
        }
    return worst;
}

inline constexpr double kStructureTolerance = 1e-10;

/// Haar-distributed 2n x 2n unitary symplectic matrix (U J U^T = J).
///
/// Columns come in pairs (u, J^T conj(u)); each new u is a complex Gaussian
/// vector orthonormalized against all previous pairs, which is Gram-Schmidt
/// on quaternionic Gaussian columns.
inline Matrix<std::complex<double>> sample_symplectic(int n, const Seed& seed)
{
    if (n < 1) throw PreconditionError("sample_symplectic: n must be at least 1");
    using cd = std::complex<double>;
    const int N = 2 * n;
    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<std::vector<cd>> basis;
    std::vector<std::vector<cd>> firsts, partners;
    for (int k = 0; k < n; ++k) {
        std::vector<cd> v(N);
        double before = 0.0;
        for (int attempt = 0;; ++attempt) {
            for (auto& x : v) {
                const double re = gauss(rng), im = gauss(rng);
                x = cd(re, im) * std::sqrt(0.5);
            }
            before = detail::norm(v);
            if (detail::orthonormalize(v, basis) > detail::kRankTolerance * before) break;
            if (attempt == 1) throw ConstructionError("sample_symplectic: rank deficient draw");
        }
        // J^T conj(a; b) = (-conj(b); conj(a))
        std::vector<cd> w(N);
        for (int i = 0; i < n; ++i) {
            w[i] = -std::conj(v[i + n]);
            w[i + n] = std::conj(v[i]);
        }
        basis.push_back(v);
        basis.push_back(w);
        firsts.push_back(std::move(v));
        partners.push_back(std::move(w));
    }
    Matrix<cd> u(N, N);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < N; ++i) {
            u(i, k) = firsts[k][i];
            u(i, k + n) = partners[k][i];
        }
    if (symplectic_residual(u) > kStructureTolerance || unitarity_residual(u) > kStructureTolerance)
        throw ConstructionError("sample_symplectic: structure residual above tolerance");
    return u;
}

/// Eigenvalues (ascending) of a Hermitian matrix by cyclic Jacobi rotations.
template <class T>
inline std::vector<double> hermitian_eigenvalues(Matrix<T> a)
{
    const std::size_t n = a.rows();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) total += detail::abs2(a(i, k));
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += detail::abs2(a(p, q));
        if (off <= 1e-32 * total || off == 0.0) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r == 0.0) continue;
                // rotate the phase of row/column q so that a(p, q) becomes real positive
                const T phase = a(p, q) / r;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == q) continue;
                    a(k, q) = a(k, q) * detail::conj_of(phase);
                    a(q, k) = detail::conj_of(a(k, q));
                }
                const double app = std::real(a(p, p)), aqq = std::real(a(q, q));
                const double theta = (aqq - app) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                a(p, p) = app - t * r;
                a(q, q) = aqq + t * r;
                a(p, q) = T{};
                a(q, p) = T{};
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const T g = a(k, p), h = a(k, q);
                    a(k, p) = c * g - s * h;
                    a(k, q) = s * g + c * h;
                    a(p, k) = detail::conj_of(a(k, p));
                    a(q, k) = detail::conj_of(a(k, q));
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = std::real(a(i, i));
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Spectrum of a sampled matrix: conjugate pairs e^{+-i theta} (theta in (0, pi))
/// plus eigenvalues fixed at +1 and -1.
struct EigenAngles {
    std::vector<double> free_angles;
    int fixed_plus = 0;
    int fixed_minus = 0;

    int dimension() const { return 2 * static_cast<int>(free_angles.size()) + fixed_plus + fixed_minus; }
};

inline constexpr double kFixedEigenvalueTolerance = 1e-7;
inline constexpr double kPairTolerance = 1e-6;

namespace detail {

// Minimum numbers of eigenvalues at +1 and -1 forced by determinant and parity.
inline std::pair<int, int> forced_fixed(Group g)
{
    switch (g) {
    case Group::SOOdd: return {1, 0};
    case Group::SOMinusOdd: return {0, 1};
    case Group::SOMinusEven: return {1, 1};
    default: return {0, 0};
    }
}

} // namespace detail

template <class T>
inline EigenAngles eigenangles(const Matrix<T>& u, const GroupLabel& group)
{
    if (!group.is_base()) throw PreconditionError("eigenangles: need a base ensemble");
    if (static_cast<int>(u.rows()) != group.dimension() || u.cols() != u.rows())
        throw PreconditionError("eigenangles: matrix size does not match the group");
    if (unitarity_residual(u) > 1e-8) throw PreconditionError("eigenangles: matrix is not unitary");
    const std::size_t N = u.rows();
    Matrix<T> h(N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) h(i, k) = 0.5 * (u(i, k) + detail::conj_of(u(k, i)));
    auto ev = hermitian_eigenvalues(std::move(h));  // ascending

    // The forced eigenvalues are the extreme ones; they only need to sit near
    // +-1 on the scale of the Hermitian part. A conjugate pair joins the fixed
    // ones when the eigenvalue itself is within the tolerance, |e^{i theta} -+ 1|
    // = sqrt(2 -+ 2 cos theta).
    const auto [need_plus, need_minus] = detail::forced_fixed(group.group);
    const std::size_t lo = static_cast<std::size_t>(need_minus), hi = N - static_cast<std::size_t>(need_plus);
    for (std::size_t i = 0; i < lo; ++i)
        if (!(ev[i] < -1.0 + kFixedEigenvalueTolerance))
            throw ExtractionError("eigenangles: forced eigenvalue at -1 is missing");
    for (std::size_t i = hi; i < N; ++i)
        if (!(ev[i] > 1.0 - kFixedEigenvalueTolerance))
            throw ExtractionError("eigenangles: forced eigenvalue at +1 is missing");
    if ((hi - lo) % 2 != 0) throw ExtractionError("eigenangles: odd number of paired eigenvalues");

    EigenAngles out;
    out.fixed_plus = need_plus;
    out.fixed_minus = need_minus;
    for (std::size_t i = lo; i < hi; i += 2) {
        if (std::fabs(ev[i] - ev[i + 1]) > kPairTolerance)
            throw ExtractionError("eigenangles: eigenvalues of the Hermitian part do not pair up");
        const double c = std::clamp(0.5 * (ev[i] + ev[i + 1]), -1.0, 1.0);
        if (std::sqrt(2.0 - 2.0 * c) <= kFixedEigenvalueTolerance)
            out.fixed_plus += 2;
        else if (std::sqrt(2.0 + 2.0 * c) <= kFixedEigenvalueTolerance)
            out.fixed_minus += 2;
        else
            out.free_angles.push_back(std::acos(c));
    }
    std::sort(out.free_angles.begin(), out.free_angles.end());
    return out;
}

} // namespace momlab
