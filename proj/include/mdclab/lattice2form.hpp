#pragma once

#include <array>
#include <cstdint>

namespace mdc::lattice {

double quad_solve(double u, double ui, double uj, double pi, double pj);

double lagrangian_2form(double u, double ui, double uj, double pi, double pj);

struct CubeSample {
    double u = 0, u1 = 0, u2 = 0, u3 = 0;
    double u12 = 0, u23 = 0, u31 = 0, u123 = 0;
};

// The far corner reached through each of the three faces adjacent to it.
struct CubeRoutes {
    double via1 = 0, via2 = 0, via3 = 0;
    double spread() const;
};

CubeRoutes cube_routes(double u, double u1, double u2, double u3, double p1, double p2,
                       double p3);

CubeSample complete_cube(double u, double u1, double u2, double u3, double p1, double p2,
                         double p3);

double closure_sum(const CubeSample& c, double p1, double p2, double p3);
double closure_residual(const CubeSample& c, double p1, double p2, double p3);

double el_corner_residual(double u, double ui, double uj, double uij, double pi, double pj);

// L_ij = (a_i u^2/2 + c_i u u_i) - (a_j u^2/2 + c_j u u_j)
//        + (b_ij u_i^2/2 - b_ji u_j^2/2 + delta_ij u_i u_j)
struct QuadLagrangianCoeffs {
    std::array<double, 3> a{};
    std::array<double, 3> c{1.0, 1.0, 1.0};
    std::array<std::array<double, 3>, 3> b{};
    std::array<std::array<double, 3>, 3> delta{};
};

// c = 1, delta_ij = s_ij, b_ij = a_j - delta_ij.
QuadLagrangianCoeffs canonical_quad_coeffs(double p1, double p2, double p3,
                                           const std::array<double, 3>& a = {});

double general_lagrangian(const QuadLagrangianCoeffs& k, int i, int j, double u, double ui,
                          double uj);

struct QuadClassification {
    bool symmetric_quad = false;
    bool closure_ok = false;
    double closure_max = 0;
};

QuadClassification classify_general_quad_lagrangian(const QuadLagrangianCoeffs& k,
                                                    std::uint64_t seed = 7, int cubes = 64,
                                                    double tol = 1e-10);

}  // namespace mdc::lattice
