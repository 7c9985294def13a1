#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numbers>
#include <set>

#include "mdclab/errors.hpp"
#include "mdclab/lattice2form.hpp"
#include "mdclab/qsurface.hpp"

using namespace mdc;
using namespace mdc::surface;

namespace {

constexpr double P1 = 3, P2 = 2, P3 = 1;

double p_of(int dir) { return dir == 1 ? P1 : dir == 2 ? P2 : P3; }

// Action of the canonical theory written directly through the two-form.
double reference_action(const Surface& s, const std::map<Vertex, double>& f) {
    double total = 0;
    for (const auto& p : s.plaquettes) {
        const Vertex v = p.base;
        total += p.sign * lattice::lagrangian_2form(f.at(v), f.at(shift(v, p.i)), f.at(shift(v, p.j)),
                                                    p_of(p.i), p_of(p.j));
    }
    return total;
}

struct Stationary {
    Eigen::MatrixXd H;  // interior Hessian
    Eigen::MatrixXd C;  // interior-boundary block
    Eigen::MatrixXd Bb; // boundary block
};

std::map<Vertex, double> field_of(const Surface& s, const std::vector<double>& vals) {
    std::map<Vertex, double> f;
    std::size_t k = 0;
    for (const auto& v : s.interior) f[v] = vals[k++];
    for (const auto& v : s.boundary) f[v] = vals[k++];
    return f;
}

// Hessian of a quadratic action by polarization.
Eigen::MatrixXd hessian(const Surface& s) {
    const std::size_t n = s.interior.size() + s.boundary.size();
    auto S = [&](const std::vector<double>& x) { return reference_action(s, field_of(s, x)); };
    Eigen::MatrixXd H(n, n);
    std::vector<double> zero(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto ei = zero, ej = zero, eij = zero;
            ei[i] = 1;
            ej[j] = 1;
            eij[i] += 1;
            eij[j] += 1;
            H(i, j) = S(eij) - S(ei) - S(ej);
            if (i == j) H(i, j) = S(ei) * 2;
        }
    return H;
}

const LatticeLagrangianCoeffs& base() {
    static const LatticeLagrangianCoeffs k = canonical_coeffs(P1, P2, P3);
    return k;
}

}  // namespace

TEST(Surface, CanonicalCoefficientsReproduceTwoForm) {
    const auto& k = base();
    EXPECT_TRUE(antisymmetric(k));
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            EXPECT_NEAR(plaquette_lagrangian(k, i, j, 0.3, -0.7, 1.1),
                        lattice::lagrangian_2form(0.3, -0.7, 1.1, p_of(i), p_of(j)), 1e-13);
        }
}

TEST(Surface, FlatPatchKernelMatchesSchurComplement) {
    for (auto [nx, ny] : {std::pair{2, 2}, {3, 3}, {3, 2}}) {
        const Surface s = flat_patch(nx, ny);
        const Eigen::MatrixXd H = hessian(s);
        const int ni = static_cast<int>(s.interior.size());
        const int nb = static_cast<int>(s.boundary.size());
        const Eigen::MatrixXd Hii = H.topLeftCorner(ni, ni);
        const Eigen::MatrixXd Hib = H.topRightCorner(ni, nb);
        const Eigen::MatrixXd Hbb = H.bottomRightCorner(nb, nb);
        const Eigen::MatrixXd red = Hbb - Hib.transpose() * Hii.ldlt().solve(Hib);

        const OscKernel K = surface_kernel(s, base());
        ASSERT_EQ(K.size(), static_cast<std::size_t>(nb));
        for (int a = 0; a < nb; ++a)
            for (int b = 0; b < nb; ++b) {
                const int ka = K.index_of(vertex_label(s.boundary[a]));
                const int kb = K.index_of(vertex_label(s.boundary[b]));
                EXPECT_NEAR(K.A(ka, kb), red(a, b), 1e-10);
            }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hii);
        int sig = 0;
        for (int k = 0; k < ni; ++k) sig += es.eigenvalues()(k) > 0 ? 1 : -1;
        const osc::cplx amp =
            std::polar(1.0 / std::sqrt(std::abs(es.eigenvalues().prod())), sig * std::numbers::pi / 4);
        EXPECT_LE(std::abs(K.amp - amp), 1e-10);
        EXPECT_DOUBLE_EQ(K.pihbar_pow, 0.5 * ni);
    }
}

TEST(Surface, ActionMatchesReference) {
    const Surface s = flat_patch(2, 3);
    std::vector<double> vals;
    for (std::size_t k = 0; k < s.interior.size() + s.boundary.size(); ++k)
        vals.push_back(0.1 * static_cast<double>(k) - 0.4);
    const auto f = field_of(s, vals);
    EXPECT_NEAR(surface_action(s, f, base()), reference_action(s, f), 1e-13);
    EXPECT_NEAR(surface_action(reversed(s), f, base()), -reference_action(s, f), 1e-13);
    auto missing = f;
    missing.erase(s.interior.front());
    EXPECT_THROW(surface_action(s, missing, base()), MissingVertex);
}

TEST(Surface, ReversedSurfaceConjugatesKernel) {
    const Surface s = flat_patch(2, 2);
    const OscKernel K = surface_kernel(s, base());
    const OscKernel R = surface_kernel(reversed(s), base());
    EXPECT_LE((K.A + R.A).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(std::abs(K.amp - std::conj(R.amp)), 1e-12);
}

TEST(Surface, ElementaryMovesInEveryFrame) {
    for (const Frame& f : all_frames())
        for (Move m : {Move::A, Move::B, Move::C, Move::PopUp}) {
            const auto d = elementary_move_check(m, LatticeParams{P1, P2, P3}, f);
            EXPECT_TRUE(d.constraints_match);
            EXPECT_LE(d.exponent_diff, 1e-10);
        }
}

TEST(Surface, MoveFactorsAtBasePoint) {
    const auto a = elementary_move_check(Move::A, base());
    EXPECT_EQ(a.vol_diff, -1);
    EXPECT_DOUBLE_EQ(a.pihbar_diff, -1.0);
    const auto pop = elementary_move_check(Move::PopUp, base());
    // the popped-up side carries V^2 (2 pi hbar) / |s23| relative to the flat plaquette
    EXPECT_EQ(pop.vol_diff, -2);
    EXPECT_DOUBLE_EQ(pop.pihbar_diff, -1.0);
    EXPECT_NEAR(std::abs(pop.amp_ratio), 3.0, 1e-12);
}

TEST(Surface, MoveHessianMatchesMatrixFormula) {
    for (const Frame& f : all_frames())
        EXPECT_LE((move_a_hessian(base(), f) - move_a_matrix(base(), f)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Surface, UniquenessScanAcceptsCanonical) {
    const TwoFormReport r = uniqueness_scan_2form(base());
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.c_constant);
    EXPECT_TRUE(r.a_zero);
    EXPECT_TRUE(r.b_antisymmetric);
    EXPECT_TRUE(r.lambda_matches);
    EXPECT_FALSE(r.delta_failure);
    EXPECT_LE(r.move_a_mismatch, 1e-10);
}

TEST(Surface, PerturbationGridIsRejected) {
    const auto grid = perturbation_grid(base());
    EXPECT_EQ(grid.size(), 36u);
    std::set<std::string> labels;
    for (const auto& g : grid) {
        labels.insert(g.label);
        EXPECT_TRUE(g.rejected) << g.label;
        if (!g.delta_failure) EXPECT_GT(g.mismatch, 1e-5) << g.label;
    }
    EXPECT_EQ(labels.size(), 36u);
}

TEST(Surface, DeformationsPreserveKernel) {
    const Surface flat = flat_patch(3, 3);
    const OscKernel K0 = surface_kernel(flat, base());
    EXPECT_FALSE(applicable_flips(flat).empty());
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const Surface s = random_deformation(flat, seed, 6);
        EXPECT_EQ(std::set<Vertex>(s.boundary.begin(), s.boundary.end()),
                  std::set<Vertex>(flat.boundary.begin(), flat.boundary.end()));
        const auto d = osc::compare(surface_kernel(s, base()), K0);
        EXPECT_LE(d.exponent_diff, 1e-9);
    }
}

TEST(Surface, SingleFlipIsReversible) {
    const Surface flat = flat_patch(2, 2);
    const auto flips = applicable_flips(flat);
    ASSERT_FALSE(flips.empty());
    const Surface up = apply_flip(flat, flips.front());
    EXPECT_NE(up.plaquettes.size(), flat.plaquettes.size());
    const auto d = osc::compare(surface_kernel(up, base()), surface_kernel(flat, base()));
    EXPECT_LE(d.exponent_diff, 1e-10);
}

TEST(Surface, JsonRoundTripAndErrors) {
    const Surface s = random_deformation(flat_patch(2, 2), 3, 3);
    const Surface r = surface_from_json(to_json(s));
    EXPECT_EQ(to_json(r).dump(), to_json(s).dump());
    EXPECT_THROW(surface_from_json(nlohmann::json::parse(R"({"interior": []})")), ConfigError);
    EXPECT_THROW(surface_from_json(nlohmann::json::parse(
                     R"({"plaquettes": [{"base": [0,0,0], "plane": [1,2]}], "boundary": [[0,0,0]]})")),
                 ConfigError);
}

TEST(Surface, ValidationAndDeltaErrors) {
    Surface s = flat_patch(1, 1);
    s.interior.push_back(s.boundary.front());
    EXPECT_THROW(validate(s), VariableMismatch);

    Surface bad = flat_patch(1, 1);
    bad.plaquettes.front().sign = 2;
    EXPECT_THROW(validate(bad), Error);

    const Surface ok = flat_patch(1, 1);
    EXPECT_EQ(surface_kernel(ok, base()).size(), 4u);
    EXPECT_THROW(canonical({{0, 0, 0}, 1, 1, 1}), Error);
}

TEST(Surface, CanonicalPlaneOrientation) {
    const OrientedPlaquette p = canonical({{0, 0, 0}, 2, 1, 1});
    EXPECT_EQ(p.i, 1);
    EXPECT_EQ(p.j, 2);
    EXPECT_EQ(p.sign, -1);
    EXPECT_TRUE(same_face(p, {{0, 0, 0}, 1, 2, -1}));
    const OrientedPlaquette q = canonical({{0, 0, 0}, 1, 3, 1});
    EXPECT_EQ(q.i, 3);
    EXPECT_EQ(q.j, 1);
    EXPECT_EQ(q.sign, -1);
}
