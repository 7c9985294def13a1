#include "mdclab/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "mdclab/errors.hpp"

namespace mdc::reduction {

Eigen::MatrixXd staircase_matrix(const std::vector<double>& coeffs) {
    const int n = static_cast<int>(coeffs.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const int k1 = (k + 1) % n;
        A(k, k1) -= coeffs[k];
        D(k, k1) += 1.0;
        D(k, k) -= coeffs[k];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-13)
        throw DegenerateParams("staircase system is singular");
    return lu.solve(D);
}

namespace {

Mat2 reduce3(const Eigen::MatrixXd& M) {
    Eigen::Matrix<double, 3, 2> L;
    L << 0, 0, 1, 0, 1, 1;
    Eigen::Matrix<double, 2, 3> Pi;
    Pi << -1, 1, 0, 0, -1, 1;
    return Pi * M * L;
}

}  // namespace

Mat2 hat_matrix(double s) { return reduce3(staircase_matrix({s, s, 0.0})); }

Mat2 bar_matrix(double t, double tprime) { return reduce3(staircase_matrix({t, t, tprime})); }

Vec2 hat_map(const Vec2& state, double s) { return hat_matrix(s) * state; }

Vec2 bar_map(const Vec2& state, double t, double tprime) {
    return bar_matrix(t, tprime) * state;
}

double commutator_residual(double s, double t, double tprime) {
    const Mat2 S = hat_matrix(s);
    const Mat2 T = bar_matrix(t, tprime);
    return (S * T - T * S).cwiseAbs().maxCoeff();
}

double commutator_residual(const LatticeParams& params) {
    const DerivedParams d = derive(params);
    return commutator_residual(d.s, d.t, d.tprime);
}

std::pair<double, double> corner_residuals(double x, double xh, double xb, double xhb,
                                           const DerivedParams& d) {
    const double lhs = (d.P - d.Q) / d.q - (d.P - d.R) / d.r;
    const double ca = (d.P + d.R) / d.r;
    const double cb = (d.P + d.Q) / d.q;
    const double first = lhs * x - (ca * xb - cb * xh);
    const double second = lhs * xhb - (ca * xh - cb * xb);
    return {std::abs(first), std::abs(second)};
}

double invariant_eval(double x, double xnext, double coeff) {
    return x * x + xnext * xnext + 2.0 * coeff * x * xnext;
}

double invariant_common(double x, double X, double P) { return 0.5 * X * X + 2.0 * P * x * x; }

double momentum_a(double x, double xb, const DerivedParams& d) {
    return -(d.P + d.R) / d.r * xb - (d.P - d.R) / d.r * x;
}

double momentum_b(double x, double xh, const DerivedParams& d) {
    return -(d.P + d.Q) / d.q * xh - (d.P - d.Q) / d.q * x;
}

OscLagrangianCoeffs closure_coeffs(const DerivedParams& d, double gamma, double f) {
    OscLagrangianCoeffs c;
    c.a = d.a;
    c.b = d.b;
    c.alpha = (d.P + d.R) / d.r * gamma;
    c.beta = (d.P + d.Q) / d.q * gamma;
    c.a0 = d.r / (d.P + d.R) * f + 0.5 * d.a;
    c.b0 = d.q / (d.P + d.Q) * f + 0.5 * d.b;
    return c;
}

double lagrangian_a(double x, double xb, const OscLagrangianCoeffs& c) {
    return c.alpha * (x * xb + (c.a - c.a0) * x * x + c.a0 * xb * xb);
}

double lagrangian_b(double x, double xh, const OscLagrangianCoeffs& c) {
    return c.beta * (x * xh + (c.b - c.b0) * x * x + c.b0 * xh * xh);
}

double lagrangian_a(double x, double xb, const DerivedParams& d) {
    return ((d.P + d.R) * x * xb + 0.5 * (d.P - d.R) * (x * x + xb * xb)) / d.r;
}

double lagrangian_b(double x, double xh, const DerivedParams& d) {
    return ((d.P + d.Q) * x * xh + 0.5 * (d.P - d.Q) * (x * x + xh * xh)) / d.q;
}

double oneform_closure_residual(const Vec2& state, const DerivedParams& d,
                                const OscLagrangianCoeffs& c) {
    const Mat2 S = hat_matrix(d.s);
    const Mat2 T = bar_matrix(d.t, d.tprime);
    const double x = state(0);
    const double xh = (S * state)(0);
    const double xb = (T * state)(0);
    const double xhb = (S * T * state)(0);
    const double box = lagrangian_a(xh, xhb, c) - lagrangian_a(x, xb, c) -
                       lagrangian_b(xb, xhb, c) + lagrangian_b(x, xh, c);
    return std::abs(box);
}

double oneform_closure_residual(const Vec2& state, const DerivedParams& d) {
    const Mat2 S = hat_matrix(d.s);
    const Mat2 T = bar_matrix(d.t, d.tprime);
    const double x = state(0);
    const double xh = (S * state)(0);
    const double xb = (T * state)(0);
    const double xhb = (S * T * state)(0);
    const double box = lagrangian_a(xh, xhb, d) - lagrangian_a(x, xb, d) -
                       lagrangian_b(xb, xhb, d) + lagrangian_b(x, xh, d);
    return std::abs(box);
}

double explicit_solution(int m, int n, double c1, double c2, double mu, double nu) {
    const double th = mu * m + nu * n;
    return c1 * std::sin(th) + c2 * std::cos(th);
}

double SolutionResiduals::max() const {
    return std::max({hat_recurrence, bar_recurrence, corner_first, corner_second});
}

SolutionResiduals solution_residuals(double c1, double c2, const DerivedParams& d, int grid) {
    if (d.hyperbolic) throw OutOfRegime("explicit trigonometric solution needs real angles");
    auto x = [&](int m, int n) { return explicit_solution(m, n, c1, c2, d.mu, d.nu); };
    SolutionResiduals res;
    for (int m = 0; m < grid; ++m) {
        for (int n = 0; n < grid; ++n) {
            res.hat_recurrence = std::max(
                res.hat_recurrence, std::abs(x(m + 1, n) + 2.0 * d.b * x(m, n) + x(m - 1, n)));
            res.bar_recurrence = std::max(
                res.bar_recurrence, std::abs(x(m, n + 1) + 2.0 * d.a * x(m, n) + x(m, n - 1)));
            const auto [c1r, c2r] = corner_residuals(x(m, n), x(m + 1, n), x(m, n + 1),
                                                     x(m + 1, n + 1), d);
            res.corner_first = std::max(res.corner_first, c1r);
            res.corner_second = std::max(res.corner_second, c2r);
        }
    }
    return res;
}

double hyperbolic_solution_residual(double b, double A, double B, int steps) {
    if (std::abs(b) <= 1.0) throw OutOfRegime("hyperbolic form needs |b| > 1");
    const double lambda = -b + std::sqrt(b * b - 1.0);
    auto x = [&](int m) { return A * std::pow(lambda, m) + B * std::pow(lambda, -m); };
    double worst = 0;
    for (int m = -steps; m <= steps; ++m) {
        const double scale = std::max({1.0, std::abs(x(m - 1)), std::abs(x(m + 1))});
        worst = std::max(worst, std::abs(x(m + 1) + 2.0 * b * x(m) + x(m - 1)) / scale);
    }
    return worst;
}

}  // namespace mdc::reduction
