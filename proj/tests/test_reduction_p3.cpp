#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "mdclab/errors.hpp"
#include "mdclab/params.hpp"
#include "mdclab/reduction_p3.hpp"
#include "rational_oracle.hpp"

using namespace mdc;
using namespace mdc::reduction;
using oracle::Q;

namespace {

std::vector<double> sorted_cosines(const Mat4& M) {
    Eigen::EigenSolver<Mat4> es(M);
    std::vector<double> out;
    for (int k = 0; k < 4; ++k) out.push_back(es.eigenvalues()(k).real());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(PeriodThree, ExactBracketOfInvariantsVanishes) {
    for (Q s : {Q(1, 5), Q(-2, 7), Q(3, 4), Q(0)}) {
        const auto M = poisson_bracket_matrix(quad_I1<Q>(), quad_I2<Q>(s));
        for (const auto& row : M)
            for (const Q& v : row) EXPECT_EQ(v, Q(0));
    }
}

TEST(PeriodThree, BracketDetectsNonInvolutivePair) {
    Quad4<double> G = quad_I2<double>(0.2);
    G[0][2] = G[2][0] = 0.3;
    EXPECT_GT(poisson_bracket(quad_I1<double>(), G), 1e-3);
}

TEST(PeriodThree, MapsCommuteOnSamples) {
    for (const auto& p : sample_params(31, 300)) {
        const DerivedParams d = derive(p);
        EXPECT_LE(p3_commutator_residual(d.s, d.t, d.tprime), 1e-11);
    }
}

TEST(PeriodThree, OddSublatticeShiftDoesNotMatter) {
    const DerivedParams d = derive({3, 2, 1});
    EXPECT_LE(p3_section_dependence(d.s, d.t, d.tprime, 0.7), 1e-12);
}

TEST(PeriodThree, SecondOrderEquationsHold) {
    const DerivedParams d = derive({3, 2, 1});
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-1, 1);
    for (int k = 0; k < 20; ++k) {
        const Vec4 z(dist(rng), dist(rng), dist(rng), dist(rng));
        EXPECT_LE(p3_equation_residuals(z, d.s, d.t, d.tprime).max(), 1e-10);
    }
}

TEST(PeriodThree, InvariantsAreConservedByBothMaps) {
    const DerivedParams d = derive({5, 2, 1.5});
    const Vec4 z(0.3, -0.1, 0.8, 0.2);
    const auto [I1, I2] = p3_invariants(z, d.s);
    for (const Vec4& w : {p3_hat(z, d.s), p3_bar(z, d.t, d.tprime)}) {
        const auto [J1, J2] = p3_invariants(w, d.s);
        EXPECT_NEAR(I1, J1, 1e-10);
        EXPECT_NEAR(I2, J2, 1e-10);
    }
}

TEST(PeriodThree, MomentaComeFromHatLagrangian) {
    const double s = 0.2, h = 1e-6;
    const Vec4 z(0.3, -0.4, 0.5, 0.1);
    const Vec4 zh = p3_hat(z, s);
    const Eigen::Vector2d x(z(0), z(1)), xh(zh(0), zh(1));
    const Eigen::Vector2d X = p3_momenta(z, s);
    for (int i = 0; i < 2; ++i) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(i) = h;
        const double dL =
            (p3_lagrangian_hat(x + e, xh, s) - p3_lagrangian_hat(x - e, xh, s)) / (2 * h);
        EXPECT_NEAR(X(i), -dL, 1e-8);
    }
}

TEST(PeriodThree, AnglesMatchEigenvalues) {
    const DerivedParams d = derive({3, 2, 1});
    const P3Angles g = p3_angles(d.s, d.t, d.tprime);
    const auto ch = sorted_cosines(p3_hat_matrix(d.s));
    std::vector<double> mu{g.cos_mu_minus, g.cos_mu_minus, g.cos_mu_plus, g.cos_mu_plus};
    std::sort(mu.begin(), mu.end());
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(ch[k], mu[k], 1e-10);

    const auto cb = sorted_cosines(p3_bar_matrix(d.t, d.tprime));
    std::vector<double> nu{g.cos_nu_minus, g.cos_nu_minus, g.cos_nu_plus, g.cos_nu_plus};
    std::sort(nu.begin(), nu.end());
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(cb[k], nu[k], 1e-10);
}

TEST(PeriodThree, SquaredPrefactorCosineIsOffUnlessPrefactorIsOne) {
    const DerivedParams d = derive({3, 2, 1});
    const P3Angles g = p3_angles(d.s, d.t, d.tprime);
    const auto [cp, cm] = p3_squared_prefactor_cos_nu(d.t, d.tprime);
    EXPECT_GT(std::abs(cp - g.cos_nu_plus), 1e-3);
    EXPECT_GT(std::abs(cm - g.cos_nu_minus), 1e-3);
    const auto [zp, zm] = p3_squared_prefactor_cos_nu(0.0, 0.0);
    const P3Angles z = p3_angles(0.0, 0.0, 0.0);
    EXPECT_NEAR(zp, z.cos_nu_plus, 1e-15);
    EXPECT_NEAR(zm, z.cos_nu_minus, 1e-15);
}

TEST(PeriodThree, JointSolutionAndPerturbedAngle) {
    const DerivedParams d = derive({3, 2, 1});
    const P3Amplitudes amps{0.4, -0.3, 0.2, 0.5};
    EXPECT_LE(p3_joint_solution_residual(amps, d.s, d.t, d.tprime), 1e-9);
    EXPECT_GT(p3_joint_solution_residual(amps, d.s, d.t, d.tprime, 5, 1e-3), 1e-5);
}

TEST(PeriodThree, ComplexAnglesThrow) {
    EXPECT_THROW(p3_angles(1.5, 0.0, 0.0), OutOfRegime);
}
