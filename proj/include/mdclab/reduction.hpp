#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mdclab/params.hpp"

namespace mdc::reduction {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Linear map on the periodic staircase (u_0..u_{n-1}) -> shifted values.
// Step k obeys w_k - c_k w_{k+1} = u_{k+1} - c_k u_k with indices mod n.
Eigen::MatrixXd staircase_matrix(const std::vector<double>& coeffs);

// Reduced 2x2 maps on (x, y) = (u1 - u0, u2 - u1).
Mat2 hat_matrix(double s);
Mat2 bar_matrix(double t, double tprime);

Vec2 hat_map(const Vec2& state, double s);
Vec2 bar_map(const Vec2& state, double t, double tprime);

double commutator_residual(double s, double t, double tprime);
double commutator_residual(const LatticeParams& params);

std::pair<double, double> corner_residuals(double x, double xh, double xb, double xhb,
                                           const DerivedParams& d);

double invariant_eval(double x, double xnext, double coeff);
double invariant_common(double x, double X, double P);

double momentum_a(double x, double xb, const DerivedParams& d);
double momentum_b(double x, double xh, const DerivedParams& d);

// General quadratic oscillator Lagrangians
//   L_a = alpha (x xb + (a - a0) x^2 + a0 xb^2),  L_b = beta (x xh + (b - b0) x^2 + b0 xh^2).
struct OscLagrangianCoeffs {
    double alpha = 1, beta = 1;
    double a0 = 0, b0 = 0;
    double a = 0, b = 0;
};

OscLagrangianCoeffs closure_coeffs(const DerivedParams& d, double gamma = 1.0, double f = 0.0);

double lagrangian_a(double x, double xb, const OscLagrangianCoeffs& c);
double lagrangian_b(double x, double xh, const OscLagrangianCoeffs& c);

// Closed-form Lagrangians written directly through (P, Q, R).
double lagrangian_a(double x, double xb, const DerivedParams& d);
double lagrangian_b(double x, double xh, const DerivedParams& d);

double oneform_closure_residual(const Vec2& state, const DerivedParams& d,
                                const OscLagrangianCoeffs& c);
double oneform_closure_residual(const Vec2& state, const DerivedParams& d);

double explicit_solution(int m, int n, double c1, double c2, double mu, double nu);

struct SolutionResiduals {
    double hat_recurrence = 0;
    double bar_recurrence = 0;
    double corner_first = 0;
    double corner_second = 0;
    double max() const;
};

SolutionResiduals solution_residuals(double c1, double c2, const DerivedParams& d, int grid = 5);

// x_m = A lambda^m + B lambda^-m for |b| > 1; returns the max recurrence residual.
double hyperbolic_solution_residual(double b, double A, double B, int steps);

}  // namespace mdc::reduction
