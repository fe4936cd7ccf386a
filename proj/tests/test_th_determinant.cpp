#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <momlab/asymptotics.hpp>
#include <momlab/mom.hpp>
#include <momlab/th_determinant.hpp>

using namespace momlab;

namespace {

constexpr double pi = std::numbers::pi;

const Group kBase[] = {Group::Sp, Group::SOEven, Group::SOMinusEven, Group::SOOdd, Group::SOMinusOdd};

FourierSeries delta(std::size_t K)
{
    FourierSeries fs{std::vector<double>(K + 1, 0.0)};
    fs.coeffs[0] = 1.0;
    return fs;
}

} // namespace

TEST(GroupLabel, NamesRoundTrip)
{
    for (Group g : {Group::Sp, Group::SOEven, Group::SOMinusEven, Group::SOOdd, Group::SOMinusOdd, Group::OEven,
                    Group::OOdd})
        EXPECT_EQ(parse_group(group_name(g)), g);
    EXPECT_THROW(parse_group("u"), PreconditionError);
    EXPECT_EQ((GroupLabel{Group::SOOdd, 3}.dimension()), 7);
    EXPECT_EQ((GroupLabel{Group::Sp, 3}.dimension()), 6);
    EXPECT_FALSE((GroupLabel{Group::OEven, 3}.is_base()));
}

TEST(BuildThMatrix, DeltaSymbol)
{
    const auto k1 = build_th_matrix(delta(6), 3, THKind::One);
    EXPECT_EQ(k1(0, 0), 2.0);
    EXPECT_EQ(k1(1, 1), 1.0);
    EXPECT_EQ(k1(2, 2), 1.0);
    EXPECT_EQ(k1(0, 1), 0.0);
    EXPECT_NEAR(log_det(k1).value(), 2.0, 1e-15);

    const auto k2 = build_th_matrix(delta(6), 3, THKind::Two);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) EXPECT_EQ(k2(j, k), j == k ? 1.0 : 0.0);
    for (THKind kind : {THKind::Three, THKind::Four}) {
        const auto a = build_th_matrix(delta(4), 2, kind);
        EXPECT_NEAR(log_det(a).value(), 1.0, 1e-15);
    }
}

TEST(BuildThMatrix, EntryRules)
{
    FourierSeries fs{{5.0, 3.0, 2.0, 1.5, 0.5, 0.25, 0.125}};
    const auto a1 = build_th_matrix(fs, 3, THKind::One);
    const auto a2 = build_th_matrix(fs, 3, THKind::Two);
    const auto a3 = build_th_matrix(fs, 3, THKind::Three);
    const auto a4 = build_th_matrix(fs, 3, THKind::Four);
    for (long j = 0; j < 3; ++j)
        for (long k = 0; k < 3; ++k) {
            EXPECT_EQ(a1(j, k), fs[j - k] + fs[j + k]);
            EXPECT_EQ(a2(j, k), fs[j - k] - fs[j + k + 2]);
            EXPECT_EQ(a3(j, k), fs[j - k] - fs[j + k + 1]);
            EXPECT_EQ(a4(j, k), fs[j - k] + fs[j + k + 1]);
        }
    EXPECT_THROW(build_th_matrix(fs, 4, THKind::Two), PreconditionError);
}

TEST(LogDet, Examples)
{
    const auto id = log_det(Matrix<double>::identity(5));
    EXPECT_EQ(id.sign, 1);
    EXPECT_EQ(id.log_abs, 0.0);
    Matrix<double> d(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = 1.0;
    d(2, 2) = 1.0;
    EXPECT_NEAR(log_det(d).log_abs, std::log(2.0), 1e-15);
    Matrix<double> s(3, 3);
    for (int k = 0; k < 3; ++k) {
        s(0, k) = k + 1.0;
        s(1, k) = k + 1.0;
        s(2, k) = k * k - 1.0;
    }
    EXPECT_EQ(log_det(s).sign, 0);
    Matrix<double> neg(2, 2);
    neg(0, 1) = 1.0;
    neg(1, 0) = 1.0;
    EXPECT_EQ(log_det(neg).sign, -1);
}

TEST(LogDet, LargeOrderStaysFinite)
{
    const auto a = build_th_matrix(fourier_coeffs(SingularitySet(1.5, {0.8}), 802), 400, THKind::Two);
    const auto d = log_det(a);
    EXPECT_EQ(d.sign, 1);
    EXPECT_TRUE(std::isfinite(d.log_abs));
}

TEST(JointMoment, AlphaZeroIsOne)
{
    for (Group g : kBase)
        for (int n : {1, 2, 5})
            EXPECT_NEAR(joint_moment_exact({g, n}, 0.0, {0.4, 1.7, 2.9}).value(), 1.0, 1e-12)
                << group_name(g) << " n=" << n;
}

// E_{Sp(2)} |p(theta)|^2 against the eigenangle density (2/pi) sin^2 t of Sp(2) = SU(2):
// |p|^2 = |1 - e^{i(t - theta)}|^2 |1 - e^{-i(t + theta)}|^2 = (2cos t - 2cos theta)^2.
TEST(JointMoment, SymplecticTwoBruteForce)
{
    const double theta = pi / 3;
    auto integrand = [&](double t) {
        const double c = 2.0 * std::cos(t) - 2.0 * std::cos(theta);
        return (2.0 / pi) * c * c * std::sin(t) * std::sin(t);
    };
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, pi, 10, 1e-14);
    EXPECT_NEAR(oracle, 2.0, 1e-12);
    EXPECT_NEAR(joint_moment_exact({Group::Sp, 1}, 1.0, {theta}).value(), oracle, 1e-8);
}

TEST(JointMoment, PermutationInvariant)
{
    for (Group g : kBase) {
        const double a = joint_moment_exact({g, 4}, 0.7, {0.3, 1.2, 2.6}).value();
        const double b = joint_moment_exact({g, 4}, 0.7, {2.6, 0.3, 1.2}).value();
        EXPECT_NEAR(a, b, 1e-12 * a);
    }
}

TEST(JointMoment, Preconditions)
{
    EXPECT_THROW(joint_moment_exact({Group::Sp, 3}, 0.5, {1.0, 1.0}), PreconditionError);
    EXPECT_THROW(joint_moment_exact({Group::OEven, 3}, 0.5, {1.0}), PreconditionError);
    EXPECT_THROW(joint_moment_exact({Group::Sp, 0}, 0.5, {1.0}), PreconditionError);
}

TEST(JointMoment, SOMinusEvenOrderOneIsPrefactorOnly)
{
    // SO^-(2) = {diag reflection}: eigenvalues +1 and -1, so |p(theta)|^2 = (2 - 2cos)(2 + 2cos) = (2 sin theta)^2
    const double theta = 1.1, alpha = 0.8;
    EXPECT_NEAR(joint_moment_exact({Group::SOMinusEven, 1}, alpha, {theta}).value(),
                std::pow(2.0 * std::sin(theta), 2.0 * alpha), 1e-13);
}

TEST(JointMoment, PositivityProperty)
{
    std::mt19937_64 rng(314);
    std::uniform_int_distribution<int> un(1, 8), um(1, 3), ug(0, 4);
    std::uniform_real_distribution<double> ua(0.01, 1.5), ut(0.01, pi - 0.01);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = um(rng);
        std::vector<double> th(m);
        for (auto& t : th) t = ut(rng);
        std::sort(th.begin(), th.end());
        if (std::adjacent_find(th.begin(), th.end()) != th.end()) continue;
        const GroupLabel g{kBase[ug(rng)], un(rng)};
        const auto v = joint_moment_exact(g, ua(rng), th);
        EXPECT_EQ(v.sign, 1) << "trial " << trial;
    }
}

TEST(JointMoment, FourierPathIndependence)
{
    FourierOptions quad, conv;
    quad.method = FourierMethod::Quadrature;
    quad.grid_size = std::size_t{1} << 22;
    conv.method = FourierMethod::Convolution;
    for (Group g : kBase)
        for (double alpha : {0.5, 0.9, 1.3}) {
            JointOptions a, b;
            a.fourier = quad;
            b.fourier = conv;
            const double va = joint_moment_exact({g, 6}, alpha, {0.6, 2.0}, a).value();
            const double vb = joint_moment_exact({g, 6}, alpha, {0.6, 2.0}, b).value();
            EXPECT_NEAR(va / vb, 1.0, 1e-8) << group_name(g) << " alpha " << alpha;
        }
}

TEST(JointMoment, MatchesMonteCarlo)
{
    // E prod |p(theta_j)|^{2 alpha} sampled directly
    const std::vector<double> th{0.9, 2.3};
    for (Group g : kBase)
        for (int m : {1, 2})
            for (int n : {2, 4}) {
                const std::vector<double> angles(th.begin(), th.begin() + m);
                const GroupLabel label{g, n};
                const double alpha = 0.6;
                const double exact = joint_moment_exact(label, alpha, angles).value();
                const std::size_t samples = 200000;
                std::vector<double> vals(samples);
                for (std::size_t i = 0; i < samples; ++i) {
                    const auto ea = detail::sample_eigenangles(label, Seed{77, i});
                    double l = 0.0;
                    for (double t : angles) {
                        const double c = 2.0 * std::cos(t);
                        for (double f : ea.free_angles) l += 2.0 * std::log(std::fabs(c - 2.0 * std::cos(f)));
                        l += ea.fixed_plus * std::log(2.0 - c) + ea.fixed_minus * std::log(2.0 + c);
                    }
                    vals[i] = std::exp(alpha * l);
                }
                double mean = 0.0, se = 0.0;
                detail::mean_and_stderr(vals, mean, se);
                EXPECT_LT(std::fabs(mean - exact), 4.0 * se)
                    << group_name(g) << " m=" << m << " n=" << n << " exact " << exact << " mc " << mean;
            }
}

TEST(JointMoment, SeparatedAsymptotics)
{
    const double v = joint_moment_exact({Group::Sp, 200}, 0.5, {pi / 2}).value();
    const double p = predict_joint_moment_separated({Group::Sp, 200}, 0.5, {pi / 2});
    EXPECT_NEAR(v / p, 1.0, 0.1);
    const double v50 = joint_moment_exact({Group::Sp, 50}, 0.5, {pi / 2}).value();
    const double p50 = predict_joint_moment_separated({Group::Sp, 50}, 0.5, {pi / 2});
    EXPECT_LE(std::fabs(v / p - 1.0), std::fabs(v50 / p50 - 1.0));
}
