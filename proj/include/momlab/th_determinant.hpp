#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "log_value.hpp"
#include "matrix.hpp"
#include "symbol.hpp"

namespace momlab {

enum class Group { Sp, SOEven, SOMinusEven, SOOdd, SOMinusOdd, OEven, OOdd };

/// A group together with its size parameter n:
/// Sp(2n), SO(2n), SO^-(2n), SO(2n+1), SO^-(2n+1), O(2n), O(2n+1).
struct GroupLabel {
    Group group;
    int n;

    int dimension() const
    {
        switch (group) {
        case Group::SOOdd:
        case Group::SOMinusOdd:
        case Group::OOdd:
            return 2 * n + 1;
        default:
            return 2 * n;
        }
    }

    bool is_base() const { return group != Group::OEven && group != Group::OOdd; }
    bool is_symplectic() const { return group == Group::Sp; }

    /// +1 for the orthogonal family, -1 for Sp.
    int family_sign() const { return is_symplectic() ? -1 : 1; }

    /// Components of an O(N) average; a base group maps to itself.
    std::pair<GroupLabel, GroupLabel> components() const
    {
        if (group == Group::OEven) return {{Group::SOEven, n}, {Group::SOMinusEven, n}};
        if (group == Group::OOdd) return {{Group::SOOdd, n}, {Group::SOMinusOdd, n}};
        return {*this, *this};
    }
};

inline std::string_view group_name(Group g)
{
    switch (g) {
    case Group::Sp: return "sp";
    case Group::SOEven: return "so-even";
    case Group::SOMinusEven: return "sominus-even";
    case Group::SOOdd: return "so-odd";
    case Group::SOMinusOdd: return "sominus-odd";
    case Group::OEven: return "o-even";
    case Group::OOdd: return "o-odd";
    }
    return "?";
}

inline Group parse_group(std::string_view name)
{
    for (Group g : {Group::Sp, Group::SOEven, Group::SOMinusEven, Group::SOOdd, Group::SOMinusOdd, Group::OEven,
                    Group::OOdd})
        if (group_name(g) == name) return g;
    throw PreconditionError("unknown group '" + std::string(name) + "'");
}

/// Toeplitz+Hankel kinds: entry (j,k) is
///   1: f_{j-k} + f_{j+k}     2: f_{j-k} - f_{j+k+2}
///   3: f_{j-k} - f_{j+k+1}   4: f_{j-k} + f_{j+k+1}
enum class THKind { One = 1, Two = 2, Three = 3, Four = 4 };

inline Matrix<double> build_th_matrix(const FourierSeries& fs, int n, THKind kind)
{
    if (n < 0) throw PreconditionError("build_th_matrix: negative order");
    if (fs.K() < static_cast<std::size_t>(2 * n))
        throw PreconditionError("build_th_matrix: Fourier series truncated below 2n");
    long shift = 0;
    double hankel_sign = 1.0;
    switch (kind) {
    case THKind::One: shift = 0; hankel_sign = 1.0; break;
    case THKind::Two: shift = 2; hankel_sign = -1.0; break;
    case THKind::Three: shift = 1; hankel_sign = -1.0; break;
    case THKind::Four: shift = 1; hankel_sign = 1.0; break;
    }
    Matrix<double> a(n, n);
    for (long j = 0; j < n; ++j)
        for (long k = 0; k < n; ++k) a(j, k) = fs[j - k] + hankel_sign * fs[j + k + shift];
    return a;
}

/// Sign and ln|det| by LU with row pivoting. A zero pivot gives the exact zero.
inline LogValue log_det(Matrix<double> a)
{
    const std::size_t n = a.rows();
    if (a.cols() != n) throw PreconditionError("log_det: matrix must be square");
    int sign = 1;
    double log_abs = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > best) {
                best = std::fabs(a(r, col));
                piv = r;
            }
        if (best == 0.0) return LogValue::zero();
        if (piv != col) {
            std::swap_ranges(a.row(col), a.row(col) + n, a.row(piv));
            sign = -sign;
        }
        const double p = a(col, col);
        if (p < 0.0) sign = -sign;
        log_abs += std::log(std::fabs(p));
        const double* prow = a.row(col);
        for (std::size_t r = col + 1; r < n; ++r) {
            double* row = a.row(r);
            const double factor = row[col] / p;
            if (factor == 0.0) continue;
            for (std::size_t k = col + 1; k < n; ++k) row[k] -= factor * prow[k];
        }
    }
    return {sign, log_abs};
}

struct JointOptions {
    FourierOptions fourier{};
    std::size_t guard = 2;  ///< extra Fourier modes beyond 2n
};

/// Relative size below which a negative determinant is treated as rounding noise.
inline constexpr double kNegativeClampRelative = 1e-8;

namespace detail {

// sum_i ln ||row_i||, the Hadamard bound on ln|det|.
inline double log_hadamard_bound(const Matrix<double>& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double r = 0.0;
        for (std::size_t k = 0; k < a.cols(); ++k) r += a(i, k) * a(i, k);
        s += 0.5 * std::log(r);
    }
    return s;
}

inline LogValue checked_positive(const LogValue& d, const Matrix<double>& a)
{
    if (d.sign >= 0) return d;
    if (d.log_abs - log_hadamard_bound(a) < std::log(kNegativeClampRelative)) return {1, d.log_abs};
    throw ConsistencyError("joint_moment_exact: determinant is negative beyond rounding");
}

} // namespace detail

/// D_n^{T+H,kind}(f) for the symbol of s, as a LogValue.
inline LogValue th_determinant(const SingularitySet& s, int n, THKind kind, const JointOptions& opt = {})
{
    const auto fs = fourier_coeffs(s, 2 * static_cast<std::size_t>(std::max(n, 0)) + opt.guard, opt.fourier);
    return log_det(build_th_matrix(fs, n, kind));
}

/// E_{U in H(n)} prod_j |p(theta_j; U)|^{2 alpha} for the five base ensembles,
/// from the Toeplitz+Hankel determinant of the matching kind times the
/// contribution of the eigenvalues fixed at +1 / -1.
inline LogValue joint_moment_exact(const GroupLabel& group, double alpha, std::vector<double> thetas,
                                   const JointOptions& opt = {})
{
    if (!group.is_base()) throw PreconditionError("joint_moment_exact: O(N) is not a base ensemble");
    if (group.n < 1) throw PreconditionError("joint_moment_exact: n must be at least 1");
    const auto s = SingularitySet::from_unordered(alpha, std::move(thetas));

    int order = group.n;
    THKind kind = THKind::Two;
    LogValue prefactor = LogValue::one();
    auto fixed_factor = [&](auto per_angle) {
        double l = 0.0;
        for (double t : s.thetas()) l += 2.0 * alpha * std::log(per_angle(t));
        prefactor *= LogValue::from_log(l);
    };
    switch (group.group) {
    case Group::SOEven:
        kind = THKind::One;
        prefactor = LogValue::from_double(0.5);
        break;
    case Group::SOMinusEven:
        kind = THKind::Two;
        order = group.n - 1;
        fixed_factor([](double t) { return 2.0 * std::sin(t); });
        break;
    case Group::SOOdd:
        kind = THKind::Three;
        fixed_factor([](double t) { return 2.0 * std::sin(0.5 * t); });
        break;
    case Group::SOMinusOdd:
        kind = THKind::Four;
        fixed_factor([](double t) { return 2.0 * std::cos(0.5 * t); });
        break;
    case Group::Sp:
        kind = THKind::Two;
        break;
    default:
        break;
    }
    if (order == 0) return prefactor;
    const auto fs = fourier_coeffs(s, 2 * static_cast<std::size_t>(order) + opt.guard, opt.fourier);
    const auto a = build_th_matrix(fs, order, kind);
    return detail::checked_positive(log_det(a), a) * prefactor;
}

} // namespace momlab
