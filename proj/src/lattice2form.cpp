#include "mdclab/lattice2form.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mdclab/errors.hpp"
#include "mdclab/params.hpp"

namespace mdc::lattice {

double quad_solve(double u, double ui, double uj, double pi, double pj) {
    return u - edge_coeff(pi, pj) * (ui - uj);
}

double lagrangian_2form(double u, double ui, double uj, double pi, double pj) {
    const double d = ui - uj;
    return u * d - 0.5 * edge_coeff(pi, pj) * d * d;
}

double CubeRoutes::spread() const {
    return std::max({via1, via2, via3}) - std::min({via1, via2, via3});
}

CubeRoutes cube_routes(double u, double u1, double u2, double u3, double p1, double p2,
                       double p3) {
    const double u12 = quad_solve(u, u1, u2, p1, p2);
    const double u23 = quad_solve(u, u2, u3, p2, p3);
    const double u31 = quad_solve(u, u3, u1, p3, p1);
    CubeRoutes r;
    r.via1 = quad_solve(u1, u12, u31, p2, p3);
    r.via2 = quad_solve(u2, u23, u12, p3, p1);
    r.via3 = quad_solve(u3, u31, u23, p1, p2);
    return r;
}

CubeSample complete_cube(double u, double u1, double u2, double u3, double p1, double p2,
                         double p3) {
    CubeSample c{u, u1, u2, u3};
    c.u12 = quad_solve(u, u1, u2, p1, p2);
    c.u23 = quad_solve(u, u2, u3, p2, p3);
    c.u31 = quad_solve(u, u3, u1, p3, p1);
    c.u123 = quad_solve(u1, c.u12, c.u31, p2, p3);
    return c;
}

double closure_sum(const CubeSample& c, double p1, double p2, double p3) {
    const double l23_1 = lagrangian_2form(c.u1, c.u12, c.u31, p2, p3);
    const double l23_0 = lagrangian_2form(c.u, c.u2, c.u3, p2, p3);
    const double l31_2 = lagrangian_2form(c.u2, c.u23, c.u12, p3, p1);
    const double l31_0 = lagrangian_2form(c.u, c.u3, c.u1, p3, p1);
    const double l12_3 = lagrangian_2form(c.u3, c.u31, c.u23, p1, p2);
    const double l12_0 = lagrangian_2form(c.u, c.u1, c.u2, p1, p2);
    return l23_1 - l23_0 + l31_2 - l31_0 + l12_3 - l12_0;
}

double closure_residual(const CubeSample& c, double p1, double p2, double p3) {
    return std::abs(closure_sum(c, p1, p2, p3));
}

double el_corner_residual(double u, double ui, double uj, double uij, double pi, double pj) {
    return u - uij - edge_coeff(pi, pj) * (ui - uj);
}

QuadLagrangianCoeffs canonical_quad_coeffs(double p1, double p2, double p3,
                                           const std::array<double, 3>& a) {
    const EdgeParams e = edge_params(p1, p2, p3);
    QuadLagrangianCoeffs k;
    k.a = a;
    k.c = {1.0, 1.0, 1.0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            k.delta[i][j] = e.s[i][j];
            k.b[i][j] = a[j] - e.s[i][j];
        }
    return k;
}

double general_lagrangian(const QuadLagrangianCoeffs& k, int i, int j, double u, double ui,
                          double uj) {
    return (0.5 * k.a[i] * u * u + k.c[i] * u * ui) - (0.5 * k.a[j] * u * u + k.c[j] * u * uj) +
           (0.5 * k.b[i][j] * ui * ui - 0.5 * k.b[j][i] * uj * uj + k.delta[i][j] * ui * uj);
}

namespace {

// c_i u - c_j u_ij = (a_j - b_ij) u_i - delta_ij u_j solved for u_ij.
double general_solve(const QuadLagrangianCoeffs& k, int i, int j, double u, double ui,
                     double uj) {
    if (std::abs(k.c[j]) < 1e-14) throw DegenerateParams("vanishing c coefficient");
    return (k.c[i] * u - (k.a[j] - k.b[i][j]) * ui + k.delta[i][j] * uj) / k.c[j];
}

}  // namespace

QuadClassification classify_general_quad_lagrangian(const QuadLagrangianCoeffs& k,
                                                    std::uint64_t seed, int cubes, double tol) {
    QuadClassification out;
    const double scale = 1.0 + std::max({std::abs(k.c[0]), std::abs(k.c[1]), std::abs(k.c[2])});
    bool sym = std::abs(k.c[0] - k.c[1]) <= tol * scale && std::abs(k.c[1] - k.c[2]) <= tol * scale;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            if (std::abs(k.a[j] - k.b[i][j] - k.delta[i][j]) > tol * scale) sym = false;
            if (std::abs(k.delta[i][j] + k.delta[j][i]) > tol * scale) sym = false;
        }
    out.symmetric_quad = sym;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0;
    for (int n = 0; n < cubes; ++n) {
        const double u = dist(rng), u1 = dist(rng), u2 = dist(rng), u3 = dist(rng);
        const double u12 = general_solve(k, 0, 1, u, u1, u2);
        const double u23 = general_solve(k, 1, 2, u, u2, u3);
        const double u31 = general_solve(k, 2, 0, u, u3, u1);
        const double sum =
            general_lagrangian(k, 1, 2, u1, u12, u31) - general_lagrangian(k, 1, 2, u, u2, u3) +
            general_lagrangian(k, 2, 0, u2, u23, u12) - general_lagrangian(k, 2, 0, u, u3, u1) +
            general_lagrangian(k, 0, 1, u3, u31, u23) - general_lagrangian(k, 0, 1, u, u1, u2);
        worst = std::max(worst, std::abs(sum));
    }
    out.closure_max = worst;
    out.closure_ok = worst <= tol;
    return out;
}

}  // namespace mdc::lattice
