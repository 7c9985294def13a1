#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdclab/oscgauss.hpp"
#include "mdclab/params.hpp"

namespace mdc::surface {

using osc::OscKernel;
using Vertex = std::array<int, 3>;

// Directions are 1, 2, 3. Planes are stored as (1,2), (2,3) or (3,1).
struct OrientedPlaquette {
    Vertex base{};
    int i = 1, j = 2;
    int sign = 1;
};

// Rewrites the plane into cyclic order, flipping the sign when needed.
OrientedPlaquette canonical(const OrientedPlaquette& p);
bool same_face(const OrientedPlaquette& a, const OrientedPlaquette& b);

struct Surface {
    std::vector<OrientedPlaquette> plaquettes;
    std::vector<Vertex> interior;  // integration order
    std::vector<Vertex> boundary;
};

// L_ij = a_ij u^2/2 + b_ij u_i^2/2 - b_ji u_j^2/2 + c_ij u u_i - c_ji u u_j + d_ij u_i u_j,
// tables indexed [i-1][j-1].
struct LatticeLagrangianCoeffs {
    std::array<std::array<double, 3>, 3> a{};
    std::array<std::array<double, 3>, 3> b{};
    std::array<std::array<double, 3>, 3> c{};
    std::array<std::array<double, 3>, 3> d{};
};

LatticeLagrangianCoeffs canonical_coeffs(double p1, double p2, double p3);
bool antisymmetric(const LatticeLagrangianCoeffs& k, double tol = 1e-14);

std::string vertex_label(const Vertex& v);
Vertex shift(const Vertex& v, int dir, int amount = 1);

// The three points entering the plaquette Lagrangian.
std::array<Vertex, 3> lagrangian_points(const OrientedPlaquette& p);
std::array<Vertex, 4> corners(const OrientedPlaquette& p);

double plaquette_lagrangian(const LatticeLagrangianCoeffs& k, int i, int j, double u, double ui,
                            double uj);

double surface_action(const Surface& s, const std::map<Vertex, double>& field,
                      const LatticeLagrangianCoeffs& k);

// Checks the interior/boundary partition of the referenced vertices.
void validate(const Surface& s);

OscKernel action_kernel(const Surface& s, const LatticeLagrangianCoeffs& k);
OscKernel surface_kernel(const Surface& s, const LatticeLagrangianCoeffs& k,
                         double tol = osc::kDefaultTol);

// Directions (i, j, k) used to lay out a local configuration.
using Frame = std::array<int, 3>;
std::vector<Frame> all_frames();

enum class Move { A, B, C, PopUp };

struct MovePair {
    Surface first;
    Surface second;
};

MovePair move_surfaces(Move m, const Frame& f = {1, 2, 3});
osc::KernelDiff elementary_move_check(Move m, const LatticeLagrangianCoeffs& k,
                                      const Frame& f = {1, 2, 3});
osc::KernelDiff elementary_move_check(Move m, const LatticeParams& params,
                                      const Frame& f = {1, 2, 3});

// Hessian of the second configuration of move A over (u_ij, u_jk, u_ki).
Eigen::Matrix3d move_a_hessian(const LatticeLagrangianCoeffs& k, const Frame& f = {1, 2, 3});
Eigen::Matrix3d move_a_matrix(const LatticeLagrangianCoeffs& k, const Frame& f = {1, 2, 3});

struct TwoFormReport {
    double a_sum = 0;
    double det_a = 0;
    double lambda = 0;
    bool critical_branch = false;
    bool c_constant = false;
    bool a_zero = false;
    bool lambda_matches = false;
    bool b_antisymmetric = false;
    bool c_symmetric = false;
    double move_a_mismatch = 0;
    bool delta_failure = false;
    bool pass = false;
};

TwoFormReport uniqueness_scan_2form(const LatticeLagrangianCoeffs& k, double tol = 1e-10);

struct PerturbationResult {
    std::string label;
    double mismatch = 0;
    bool delta_failure = false;
    bool rejected = false;
};

std::vector<PerturbationResult> perturbation_grid(const LatticeLagrangianCoeffs& base,
                                                  double eps = 1e-2, double threshold = 1e-5);

// Local surface deformations: a subset of the faces of a unit cube is swapped for
// the complementary faces with the induced orientation.
struct CubeFlip {
    Vertex cube{};
    int orientation = 1;
};

Surface flat_patch(int nx, int ny);
std::vector<CubeFlip> applicable_flips(const Surface& s);
Surface apply_flip(const Surface& s, const CubeFlip& flip);
Surface random_deformation(const Surface& s, std::uint64_t seed, int steps);

Surface reversed(const Surface& s);

nlohmann::json to_json(const Surface& s);
Surface surface_from_json(const nlohmann::json& j);

}  // namespace mdc::surface
