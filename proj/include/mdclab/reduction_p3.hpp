#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "mdclab/params.hpp"

namespace mdc::reduction {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Period-three staircase, state (x1, x2, y1, y2).
Mat4 p3_hat_matrix(double s);
Mat4 p3_bar_matrix(double t, double tprime);

Vec4 p3_hat(const Vec4& state, double s);
Vec4 p3_bar(const Vec4& state, double t, double tprime);

double p3_commutator_residual(double s, double t, double tprime);

// Largest change of the reduced maps when the odd sublattice is shifted by w.
double p3_section_dependence(double s, double t, double tprime, double w);

// Residuals of the three second-order equations at a state.
struct P3EquationResiduals {
    double hat_first = 0, hat_second = 0;
    double bar_first = 0, bar_second = 0;
    double max() const;
};

P3EquationResiduals p3_equation_residuals(const Vec4& state, double s, double t, double tprime);

// Momenta X_i = -dL1/dx_i from the hat Lagrangian.
Eigen::Vector2d p3_momenta(const Vec4& state, double s);

double p3_lagrangian_hat(const Eigen::Vector2d& x, const Eigen::Vector2d& xh, double s);
double p3_lagrangian_bar(const Eigen::Vector2d& x, const Eigen::Vector2d& xb, double t,
                         double tprime);

std::pair<double, double> p3_invariants(const Vec4& state, double s);

// Quadratic observable z^T F z in canonical coordinates z = (x1, x2, X1, X2).
template <class T>
using Quad4 = std::array<std::array<T, 4>, 4>;

template <class T>
Quad4<T> quad_I1() {
    Quad4<T> F{};
    const T half = T(1) / T(2);
    // x1 X1 - 2 x1 X2 + 2 x2 X1 - x2 X2
    F[0][2] = F[2][0] = half;
    F[0][3] = F[3][0] = T(-1);
    F[1][2] = F[2][1] = T(1);
    F[1][3] = F[3][1] = -half;
    return F;
}

template <class T>
Quad4<T> quad_I2(const T& s) {
    Quad4<T> F{};
    const T half = T(1) / T(2);
    const T k = T(1) - T(3) * s * s / T(4);
    F[0][0] = k;
    F[1][1] = k;
    F[0][1] = F[1][0] = k * half;
    F[2][2] = T(1);
    F[3][3] = T(1);
    F[2][3] = F[3][2] = -half;
    return F;
}

// Matrix of the quadratic {F, G} = z^T M z with {x_i, X_j} = delta_ij, M = 2(F J G - G J F).
template <class T>
Quad4<T> poisson_bracket_matrix(const Quad4<T>& F, const Quad4<T>& G) {
    Quad4<T> J{};
    J[0][2] = T(1);
    J[1][3] = T(1);
    J[2][0] = T(-1);
    J[3][1] = T(-1);
    auto mul = [](const Quad4<T>& A, const Quad4<T>& B) {
        Quad4<T> C{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                T acc = T(0);
                for (int k = 0; k < 4; ++k) acc += A[i][k] * B[k][j];
                C[i][j] = acc;
            }
        return C;
    };
    const Quad4<T> FJG = mul(mul(F, J), G);
    const Quad4<T> GJF = mul(mul(G, J), F);
    Quad4<T> M{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) M[i][j] = T(2) * (FJG[i][j] - GJF[i][j]);
    return M;
}

template <class T>
T quad_eval(const Quad4<T>& F, const std::array<T, 4>& z) {
    T acc = T(0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) acc += z[i] * F[i][j] * z[j];
    return acc;
}

// Max-norm of the bracket quadratic.
double poisson_bracket(const Quad4<double>& F, const Quad4<double>& G);

struct P3Angles {
    double cos_mu_plus = 0, cos_mu_minus = 0;
    double cos_nu_plus = 0, cos_nu_minus = 0;
    double mu_plus = 0, mu_minus = 0, nu_plus = 0, nu_minus = 0;
};

P3Angles p3_angles(double s, double t, double tprime);

// Bar cosines with the (1 - t t')/D prefactor squared.
std::pair<double, double> p3_squared_prefactor_cos_nu(double t, double tprime);

// Amplitudes of cos/sin for the (+) and (-) modes of x2.
struct P3Amplitudes {
    double cos_plus = 0, sin_plus = 0, cos_minus = 0, sin_minus = 0;
};

// Max residual of the three second-order systems on a grid x grid block of (m, n).
// cos_nu_plus_shift perturbs the (+) bar cosine for probing.
double p3_joint_solution_residual(const P3Amplitudes& amps, double s, double t, double tprime,
                                  int grid = 5, double cos_nu_plus_shift = 0.0);

}  // namespace mdc::reduction
