#include "mdclab/reduction_p3.hpp"

#include <algorithm>
#include <cmath>

#include "mdclab/errors.hpp"
#include "mdclab/reduction.hpp"

namespace mdc::reduction {

namespace {

Eigen::Matrix<double, 6, 4> section() {
    Eigen::Matrix<double, 6, 4> L = Eigen::Matrix<double, 6, 4>::Zero();
    // columns: x1, x2, y1, y2
    L(2, 0) = 1;
    L(3, 2) = 1;
    L(4, 0) = 1;
    L(4, 1) = 1;
    L(5, 2) = 1;
    L(5, 3) = 1;
    return L;
}

Eigen::Matrix<double, 6, 1> odd_offset(double w) {
    Eigen::Matrix<double, 6, 1> o;
    o << 0, w, 0, w, 0, w;
    return o;
}

Eigen::Matrix<double, 4, 6> projection() {
    Eigen::Matrix<double, 4, 6> Pi = Eigen::Matrix<double, 4, 6>::Zero();
    Pi(0, 2) = 1;
    Pi(0, 0) = -1;
    Pi(1, 4) = 1;
    Pi(1, 2) = -1;
    Pi(2, 3) = 1;
    Pi(2, 1) = -1;
    Pi(3, 5) = 1;
    Pi(3, 3) = -1;
    return Pi;
}

Mat4 reduce6(const Eigen::MatrixXd& M) { return projection() * M * section(); }

Eigen::MatrixXd hat6(double s) { return staircase_matrix({s, 0.0, s, 0.0, s, 0.0}); }

Eigen::MatrixXd bar6(double t, double tp) { return staircase_matrix({t, tp, t, tp, t, tp}); }

}  // namespace

Mat4 p3_hat_matrix(double s) { return reduce6(hat6(s)); }

Mat4 p3_bar_matrix(double t, double tprime) { return reduce6(bar6(t, tprime)); }

Vec4 p3_hat(const Vec4& state, double s) { return p3_hat_matrix(s) * state; }

Vec4 p3_bar(const Vec4& state, double t, double tprime) {
    return p3_bar_matrix(t, tprime) * state;
}

double p3_commutator_residual(double s, double t, double tprime) {
    const Mat4 H = p3_hat_matrix(s);
    const Mat4 B = p3_bar_matrix(t, tprime);
    return (H * B - B * H).cwiseAbs().maxCoeff();
}

double p3_section_dependence(double s, double t, double tprime, double w) {
    const auto Pi = projection();
    const auto L = section();
    const auto o = odd_offset(w);
    double worst = 0;
    for (const auto& M : {hat6(s), bar6(t, tprime)}) {
        for (int k = 0; k < 4; ++k) {
            Vec4 e = Vec4::Zero();
            e(k) = 1;
            const Vec4 base = Pi * M * (L * e);
            const Vec4 shifted = Pi * M * (L * e + o);
            worst = std::max(worst, (base - shifted).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

double P3EquationResiduals::max() const {
    return std::max({hat_first, hat_second, bar_first, bar_second});
}

P3EquationResiduals p3_equation_residuals(const Vec4& z, double s, double t, double tp) {
    const Mat4 H = p3_hat_matrix(s);
    const Mat4 B = p3_bar_matrix(t, tp);
    const Vec4 zh = H * z;
    const Vec4 zc = H.inverse() * z;
    const Vec4 zb = B * z;
    const Vec4 zu = B.inverse() * z;
    const double x1 = z(0), x2 = z(1);
    const double tt = t * tp;
    P3EquationResiduals r;
    r.hat_first = std::abs(zh(0) + zh(1) + zc(0) + s * (2 * x1 + x2));
    r.hat_second = std::abs(zh(1) + zc(0) + zc(1) + s * (x1 + 2 * x2));
    r.bar_first = std::abs((1 + tt) * (zb(0) + zu(0)) + zb(1) + tt * zu(1) +
                           (t + tp) * (2 * x1 + x2));
    r.bar_second = std::abs((1 + tt) * (zb(1) + zu(1)) + tt * zb(0) + zu(0) +
                            (t + tp) * (x1 + 2 * x2));
    return r;
}

Eigen::Vector2d p3_momenta(const Vec4& state, double s) {
    const Vec4 zh = p3_hat(state, s);
    const double x1 = state(0), x2 = state(1);
    return {-(zh(0) + zh(1) + 0.5 * s * (2 * x1 + x2)), -(zh(1) + 0.5 * s * (x1 + 2 * x2))};
}

double p3_lagrangian_hat(const Eigen::Vector2d& x, const Eigen::Vector2d& xh, double s) {
    return x(0) * (xh(0) + xh(1)) + x(1) * xh(1) +
           0.5 * s *
               (x(0) * x(0) + x(0) * x(1) + x(1) * x(1) + xh(0) * xh(0) + xh(0) * xh(1) +
                xh(1) * xh(1));
}

double p3_lagrangian_bar(const Eigen::Vector2d& x, const Eigen::Vector2d& xb, double t,
                         double tp) {
    const double tt = t * tp;
    const double den = 1.0 - tt;
    return (1 + tt) / den * (x(0) * xb(0) + x(1) * xb(1)) +
           (x(0) * xb(1) + tt * x(1) * xb(0)) / den +
           0.5 * (t + tp) / den *
               (x(0) * x(0) + x(0) * x(1) + x(1) * x(1) + xb(0) * xb(0) + xb(0) * xb(1) +
                xb(1) * xb(1));
}

std::pair<double, double> p3_invariants(const Vec4& state, double s) {
    const Eigen::Vector2d X = p3_momenta(state, s);
    const std::array<double, 4> z{state(0), state(1), X(0), X(1)};
    return {quad_eval(quad_I1<double>(), z), quad_eval(quad_I2<double>(s), z)};
}

double poisson_bracket(const Quad4<double>& F, const Quad4<double>& G) {
    const auto M = poisson_bracket_matrix(F, G);
    double worst = 0;
    for (const auto& row : M)
        for (double v : row) worst = std::max(worst, std::abs(v));
    return worst;
}

namespace {

double checked_acos(double c) {
    if (!(std::abs(c) <= 1.0)) throw OutOfRegime("complex angle in the period-three solution");
    return std::acos(c);
}

}  // namespace

P3Angles p3_angles(double s, double t, double tp) {
    const double disc_mu = 1.0 - 0.75 * s * s;
    const double tt = t * tp;
    const double D = 1.0 + tt + tt * tt;
    const double disc_nu = D - 0.75 * (t + tp) * (t + tp);
    if (disc_mu < 0 || disc_nu < 0) throw OutOfRegime("complex angle in the period-three solution");
    P3Angles g;
    g.cos_mu_plus = -0.75 * s + 0.5 * std::sqrt(disc_mu);
    g.cos_mu_minus = -0.75 * s - 0.5 * std::sqrt(disc_mu);
    const double centre = -3.0 * (t + tp) * (1.0 + tt) / (4.0 * D);
    const double half_width = 0.5 * (1.0 - tt) / D * std::sqrt(disc_nu);
    g.cos_nu_plus = centre + half_width;
    g.cos_nu_minus = centre - half_width;
    g.mu_plus = checked_acos(g.cos_mu_plus);
    g.mu_minus = checked_acos(g.cos_mu_minus);
    g.nu_plus = checked_acos(g.cos_nu_plus);
    g.nu_minus = checked_acos(g.cos_nu_minus);
    return g;
}

std::pair<double, double> p3_squared_prefactor_cos_nu(double t, double tp) {
    const double tt = t * tp;
    const double D = 1.0 + tt + tt * tt;
    const double disc = D - 0.75 * (t + tp) * (t + tp);
    const double centre = -3.0 * (t + tp) * (1.0 + tt) / (4.0 * D);
    const double ratio = (1.0 - tt) / D;
    const double half_width = 0.5 * ratio * ratio * std::sqrt(std::max(0.0, disc));
    return {centre + half_width, centre - half_width};
}

double p3_joint_solution_residual(const P3Amplitudes& amps, double s, double t, double tp,
                                  int grid, double cos_nu_plus_shift) {
    const P3Angles g = p3_angles(s, t, tp);
    const double nu_plus = checked_acos(g.cos_nu_plus + cos_nu_plus_shift);
    struct Mode {
        double A, B, mu, nu, denom;
    };
    const Mode modes[2] = {
        {amps.cos_plus, amps.sin_plus, g.mu_plus, nu_plus, 2 * g.cos_mu_plus + 2 * s},
        {amps.cos_minus, amps.sin_minus, g.mu_minus, g.nu_minus, 2 * g.cos_mu_minus + 2 * s},
    };
    for (const auto& md : modes)
        if (std::abs(md.denom) < 1e-12 && (md.A != 0 || md.B != 0))
            throw OutOfRegime("period-three mode cannot be reconstructed");

    auto mode_x2 = [](const Mode& md, int m, int n) {
        const double th = md.mu * m + md.nu * n;
        return md.A * std::cos(th) + md.B * std::sin(th);
    };
    auto x2 = [&](int m, int n) { return mode_x2(modes[0], m, n) + mode_x2(modes[1], m, n); };
    auto x1 = [&](int m, int n) {
        double acc = 0;
        for (const auto& md : modes) {
            if (md.A == 0 && md.B == 0) continue;
            acc -= (mode_x2(md, m + 1, n) + s * mode_x2(md, m, n)) / md.denom;
        }
        return acc;
    };

    const double tt = t * tp;
    double worst = 0;
    for (int m = 0; m < grid; ++m) {
        for (int n = 0; n < grid; ++n) {
            const double a1 = x1(m, n), a2 = x2(m, n);
            const double r1 = x1(m + 1, n) + x2(m + 1, n) + x1(m - 1, n) + s * (2 * a1 + a2);
            const double r2 = x2(m + 1, n) + x1(m - 1, n) + x2(m - 1, n) + s * (a1 + 2 * a2);
            const double r3 = (1 + tt) * (x1(m, n + 1) + x1(m, n - 1)) + x2(m, n + 1) +
                              tt * x2(m, n - 1) + (t + tp) * (2 * a1 + a2);
            const double r4 = (1 + tt) * (x2(m, n + 1) + x2(m, n - 1)) + tt * x1(m, n + 1) +
                              x1(m, n - 1) + (t + tp) * (a1 + 2 * a2);
            worst = std::max({worst, std::abs(r1), std::abs(r2), std::abs(r3), std::abs(r4)});
        }
    }
    return worst;
}

}  // namespace mdc::reduction
