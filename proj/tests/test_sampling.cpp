#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <momlab/sampling.hpp>

using namespace momlab;

namespace {

constexpr double pi = std::numbers::pi;

double trace(const Matrix<double>& a)
{
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

Matrix<double> transpose(const Matrix<double>& a)
{
    Matrix<double> t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

// two-sample Kolmogorov-Smirnov statistic
double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

} // namespace

TEST(SampleOrthogonal, SmallCases)
{
    const auto one = sample_orthogonal(1, 1, Seed{1, 2});
    EXPECT_NEAR(one(0, 0), 1.0, 1e-15);
    const auto r = sample_orthogonal(2, -1, Seed{3, 4});
    const auto ea = eigenangles(r, {Group::SOMinusEven, 1});
    EXPECT_EQ(ea.fixed_plus, 1);
    EXPECT_EQ(ea.fixed_minus, 1);
    EXPECT_TRUE(ea.free_angles.empty());
    EXPECT_THROW(sample_orthogonal(0, 1, Seed{}), PreconditionError);
    EXPECT_THROW(sample_orthogonal(3, 0, Seed{}), PreconditionError);
}

TEST(SampleOrthogonal, OrthogonalWithRequestedDeterminant)
{
    for (int N : {2, 3, 6, 9})
        for (int det : {1, -1}) {
            const auto q = sample_orthogonal(N, det, Seed{5, static_cast<std::uint64_t>(N)});
            EXPECT_LT(unitarity_residual(q), 1e-12);
            EXPECT_EQ(log_det(q).sign, det);
        }
}

TEST(SampleOrthogonal, MeanTraceOfSO3IsZero)
{
    const std::size_t samples = 100000;
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = trace(sample_orthogonal(3, 1, Seed{21, i}));
        sum += t;
        sq += t * t;
    }
    const double mean = sum / samples, sd = std::sqrt(sq / samples - mean * mean);
    EXPECT_LT(std::fabs(mean), 4.0 * sd / std::sqrt(static_cast<double>(samples)));
    // E tr(U)^2 = 1 on SO(3)
    EXPECT_NEAR(sq / samples, 1.0, 0.03);
}

TEST(SampleOrthogonal, TraceDistributionIsConjugationInvariant)
{
    const std::size_t samples = 100000;
    const auto v = sample_orthogonal(4, 1, Seed{999, 0});
    const auto vt = transpose(v);
    std::vector<double> plain(samples), conj(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        plain[i] = trace(sample_orthogonal(4, 1, Seed{31, i}));
        conj[i] = trace(v * sample_orthogonal(4, 1, Seed{32, i}) * vt);
    }
    const double d = ks_statistic(plain, conj);
    // asymptotic two-sample critical value at the 1% level
    const double crit = 1.628 * std::sqrt(2.0 / samples);
    EXPECT_LT(d, crit);
}

TEST(SampleSymplectic, Structure)
{
    for (int n : {1, 2, 5}) {
        const auto u = sample_symplectic(n, Seed{8, static_cast<std::uint64_t>(n)});
        EXPECT_LE(symplectic_residual(u), 1e-10);
        EXPECT_LE(unitarity_residual(u), 1e-10);
    }
    const auto u = sample_symplectic(1, Seed{2, 2});
    const auto ea = eigenangles(u, {Group::Sp, 1});
    EXPECT_EQ(ea.free_angles.size(), 1u);
    EXPECT_EQ(ea.fixed_plus + ea.fixed_minus, 0);
}

TEST(SampleSymplectic, Sp2AngleDensity)
{
    // density of theta' on Sp(2) = SU(2) is (2/pi) sin^2; CDF F(t) = (t - sin t cos t)/pi
    const std::size_t samples = 100000;
    const int bins = 20;
    std::vector<double> counts(bins, 0.0);
    for (std::size_t i = 0; i < samples; ++i) {
        const auto ea = eigenangles(sample_symplectic(1, Seed{55, i}), {Group::Sp, 1});
        ASSERT_EQ(ea.free_angles.size(), 1u);
        const int b = std::min(bins - 1, static_cast<int>(ea.free_angles[0] / pi * bins));
        counts[b] += 1.0;
    }
    auto cdf = [](double t) { return (t - std::sin(t) * std::cos(t)) / pi; };
    double chi2 = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double expected = samples * (cdf(pi * (b + 1) / bins) - cdf(pi * b / bins));
        chi2 += (counts[b] - expected) * (counts[b] - expected) / expected;
    }
    const boost::math::chi_squared dist(bins - 1);
    EXPECT_LT(chi2, boost::math::quantile(dist, 0.99));
}

TEST(EigenAngles, Examples)
{
    const auto id = eigenangles(Matrix<double>::identity(4), {Group::SOEven, 2});
    EXPECT_EQ(id.fixed_plus, 4);
    EXPECT_TRUE(id.free_angles.empty());

    const double phi = 0.77;
    Matrix<double> rot(2, 2);
    rot(0, 0) = std::cos(phi);
    rot(0, 1) = -std::sin(phi);
    rot(1, 0) = std::sin(phi);
    rot(1, 1) = std::cos(phi);
    const auto ea = eigenangles(rot, {Group::SOEven, 1});
    ASSERT_EQ(ea.free_angles.size(), 1u);
    EXPECT_NEAR(ea.free_angles[0], phi, 1e-12);

    const auto s4 = eigenangles(sample_orthogonal(4, -1, Seed{6, 6}), {Group::SOMinusEven, 2});
    EXPECT_EQ(s4.fixed_plus, 1);
    EXPECT_EQ(s4.fixed_minus, 1);
    EXPECT_EQ(s4.free_angles.size(), 1u);
}

TEST(EigenAngles, Preconditions)
{
    Matrix<double> bad(2, 2);
    bad(0, 0) = 2.0;
    bad(1, 1) = 1.0;
    EXPECT_THROW(eigenangles(bad, {Group::SOEven, 1}), PreconditionError);
    EXPECT_THROW(eigenangles(Matrix<double>::identity(3), {Group::SOEven, 1}), PreconditionError);
    // a reflection claimed to lie in SO(3): its -1 has no partner
    Matrix<double> refl = Matrix<double>::identity(3);
    refl(2, 2) = -1.0;
    EXPECT_THROW(eigenangles(refl, {Group::SOOdd, 1}), ExtractionError);
}

TEST(EigenAngles, ForcedStructure)
{
    struct Case {
        Group g;
        int det;
        int need_plus, need_minus;
    };
    for (const Case& c : {Case{Group::SOOdd, 1, 1, 0}, Case{Group::SOMinusOdd, -1, 0, 1},
                          Case{Group::SOMinusEven, -1, 1, 1}, Case{Group::SOEven, 1, 0, 0}})
        for (std::uint64_t i = 0; i < 50; ++i) {
            const GroupLabel g{c.g, 3};
            const auto ea = eigenangles(sample_orthogonal(g.dimension(), c.det, Seed{12, i}), g);
            EXPECT_EQ(ea.dimension(), g.dimension());
            EXPECT_GE(ea.fixed_plus, c.need_plus);
            EXPECT_GE(ea.fixed_minus, c.need_minus);
        }
}

TEST(EigenAngles, PairingHoldsAlmostSurely)
{
    int bad = 0;
    const int samples = 20000;
    for (int i = 0; i < samples; ++i) {
        const auto sp = eigenangles(sample_symplectic(3, Seed{13, static_cast<std::uint64_t>(i)}), {Group::Sp, 3});
        const auto so = eigenangles(sample_orthogonal(6, 1, Seed{14, static_cast<std::uint64_t>(i)}),
                                    {Group::SOEven, 3});
        if (sp.free_angles.size() != 3) ++bad;
        if (so.free_angles.size() != 3) ++bad;
    }
    EXPECT_LE(bad, 2 * samples / 10000);
}

TEST(EigenAngles, EigenvaluesMatchComplexSpectrum)
{
    // cos of the free angles are the Hermitian-part eigenvalues; check via traces of powers
    const auto u = sample_symplectic(4, Seed{17, 3});
    const auto ea = eigenangles(u, {Group::Sp, 4});
    std::complex<double> tr{};
    for (std::size_t i = 0; i < u.rows(); ++i) tr += u(i, i);
    double expected = 0.0;
    for (double t : ea.free_angles) expected += 2.0 * std::cos(t);
    EXPECT_NEAR(tr.real(), expected, 1e-10);
    EXPECT_NEAR(tr.imag(), 0.0, 1e-10);
    const auto u2 = u * u;
    std::complex<double> tr2{};
    for (std::size_t i = 0; i < u2.rows(); ++i) tr2 += u2(i, i);
    double expected2 = 0.0;
    for (double t : ea.free_angles) expected2 += 2.0 * std::cos(2.0 * t);
    EXPECT_NEAR(tr2.real(), expected2, 1e-10);
}

TEST(Seed, Reproducible)
{
    const auto a = eigenangles(sample_symplectic(4, Seed{42, 7}), {Group::Sp, 4});
    const auto b = eigenangles(sample_symplectic(4, Seed{42, 7}), {Group::Sp, 4});
    EXPECT_EQ(a.free_angles, b.free_angles);
    const auto c = eigenangles(sample_symplectic(4, Seed{42, 8}), {Group::Sp, 4});
    EXPECT_NE(a.free_angles, c.free_angles);
    const auto o1 = sample_orthogonal(5, -1, Seed{1, 1});
    const auto o2 = sample_orthogonal(5, -1, Seed{1, 1});
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(o1(i, j), o2(i, j));
}

TEST(Jacobi, HermitianEigenvalues)
{
    Matrix<std::complex<double>> h(2, 2);
    h(0, 0) = 2.0;
    h(1, 1) = -1.0;
    h(0, 1) = {0.0, 1.5};
    h(1, 0) = {0.0, -1.5};
    const auto ev = hermitian_eigenvalues(h);
    const double mid = 0.5, rad = std::sqrt(1.5 * 1.5 + 2.25);
    EXPECT_NEAR(ev[0], mid - rad, 1e-14);
    EXPECT_NEAR(ev[1], mid + rad, 1e-14);
}
