#include "mdclab/qsurface.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>

#include "mdclab/errors.hpp"

namespace mdc::surface {

namespace {

constexpr int kBoxLo = -1;
constexpr int kBoxHi = 4;

int normal_of(int i, int j) { return 6 - i - j; }

std::pair<int, int> plane_with_normal(int n) {
    switch (n) {
        case 1: return {2, 3};
        case 2: return {3, 1};
        default: return {1, 2};
    }
}

Vertex add(const Vertex& a, const Vertex& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

Vertex unit(int dir) {
    Vertex e{0, 0, 0};
    e[dir - 1] = 1;
    return e;
}

Vertex sum_units(std::initializer_list<int> dirs) {
    Vertex v{0, 0, 0};
    for (int d : dirs) v = add(v, unit(d));
    return v;
}

void check_dirs(int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3 || i == j) throw Error("invalid plaquette plane");
}

}  // namespace

OrientedPlaquette canonical(const OrientedPlaquette& p) {
    check_dirs(p.i, p.j);
    OrientedPlaquette out = p;
    const bool cyclic = (p.j - p.i + 3) % 3 == 1;
    if (!cyclic) {
        std::swap(out.i, out.j);
        out.sign = -p.sign;
    }
    return out;
}

bool same_face(const OrientedPlaquette& a, const OrientedPlaquette& b) {
    const auto ca = canonical(a), cb = canonical(b);
    return ca.base == cb.base && ca.i == cb.i && ca.j == cb.j;
}

LatticeLagrangianCoeffs canonical_coeffs(double p1, double p2, double p3) {
    const EdgeParams e = edge_params(p1, p2, p3);
    LatticeLagrangianCoeffs k;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            k.b[i][j] = -e.s[i][j];
            k.c[i][j] = 1.0;
            k.d[i][j] = e.s[i][j];
        }
    }
    return k;
}

bool antisymmetric(const LatticeLagrangianCoeffs& k, double tol) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && (std::abs(k.a[i][j] + k.a[j][i]) > tol ||
                           std::abs(k.d[i][j] + k.d[j][i]) > tol))
                return false;
    return true;
}

std::string vertex_label(const Vertex& v) {
    return "u[" + std::to_string(v[0]) + "," + std::to_string(v[1]) + "," + std::to_string(v[2]) +
           "]";
}

Vertex shift(const Vertex& v, int dir, int amount) {
    Vertex out = v;
    out[dir - 1] += amount;
    return out;
}

std::array<Vertex, 3> lagrangian_points(const OrientedPlaquette& p) {
    check_dirs(p.i, p.j);
    return {p.base, shift(p.base, p.i), shift(p.base, p.j)};
}

std::array<Vertex, 4> corners(const OrientedPlaquette& p) {
    check_dirs(p.i, p.j);
    return {p.base, shift(p.base, p.i), shift(p.base, p.j), shift(shift(p.base, p.i), p.j)};
}

double plaquette_lagrangian(const LatticeLagrangianCoeffs& k, int i, int j, double u, double ui,
                            double uj) {
    check_dirs(i, j);
    const int a = i - 1, b = j - 1;
    return 0.5 * k.a[a][b] * u * u + 0.5 * k.b[a][b] * ui * ui - 0.5 * k.b[b][a] * uj * uj +
           k.c[a][b] * u * ui - k.c[b][a] * u * uj + k.d[a][b] * ui * uj;
}

double surface_action(const Surface& s, const std::map<Vertex, double>& field,
                      const LatticeLagrangianCoeffs& k) {
    auto value = [&](const Vertex& v) {
        auto it = field.find(v);
        if (it == field.end()) throw MissingVertex("no field value at " + vertex_label(v));
        return it->second;
    };
    double total = 0;
    for (const auto& p : s.plaquettes) {
        const auto pts = lagrangian_points(p);
        total += p.sign *
                 plaquette_lagrangian(k, p.i, p.j, value(pts[0]), value(pts[1]), value(pts[2]));
    }
    return total;
}

void validate(const Surface& s) {
    const std::set<Vertex> in(s.interior.begin(), s.interior.end());
    const std::set<Vertex> bd(s.boundary.begin(), s.boundary.end());
    if (in.size() != s.interior.size() || bd.size() != s.boundary.size())
        throw VariableMismatch("repeated vertex in the interior or boundary list");
    for (const auto& v : in)
        if (bd.count(v)) throw VariableMismatch("vertex both interior and boundary: " + vertex_label(v));
    for (const auto& p : s.plaquettes) {
        if (p.sign != 1 && p.sign != -1) throw Error("plaquette sign must be +1 or -1");
        for (const auto& v : lagrangian_points(p))
            if (!in.count(v) && !bd.count(v)) throw MissingVertex("unlisted vertex " + vertex_label(v));
    }
}

OscKernel action_kernel(const Surface& s, const LatticeLagrangianCoeffs& k) {
    OscKernel K;
    for (const auto& v : s.boundary) K.ensure(vertex_label(v));
    for (const auto& v : s.interior) K.ensure(vertex_label(v));
    for (const auto& p : s.plaquettes) {
        const auto pts = lagrangian_points(p);
        const std::string u = vertex_label(pts[0]), ui = vertex_label(pts[1]),
                          uj = vertex_label(pts[2]);
        const int a = p.i - 1, b = p.j - 1;
        const double sg = p.sign;
        K.add_quadratic(u, u, sg * 0.5 * k.a[a][b]);
        K.add_quadratic(ui, ui, sg * 0.5 * k.b[a][b]);
        K.add_quadratic(uj, uj, -sg * 0.5 * k.b[b][a]);
        K.add_quadratic(u, ui, sg * k.c[a][b]);
        K.add_quadratic(u, uj, -sg * k.c[b][a]);
        K.add_quadratic(ui, uj, sg * k.d[a][b]);
    }
    return K;
}

OscKernel surface_kernel(const Surface& s, const LatticeLagrangianCoeffs& k, double tol) {
    validate(s);
    std::vector<std::string> order;
    for (const auto& v : s.interior) order.push_back(vertex_label(v));
    OscKernel K = osc::marginalize_all(action_kernel(s, k), order, tol);
    if (!K.constraints.empty())
        throw DeltaConstraintError("surface integral leaves a delta between boundary values");
    std::set<std::string> bd;
    for (const auto& v : s.boundary) bd.insert(vertex_label(v));
    for (const auto& v : K.vars)
        if (!bd.count(v)) throw VariableMismatch("kernel depends on non-boundary vertex " + v);
    return K;
}

std::vector<Frame> all_frames() {
    return {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}, {2, 1, 3}, {1, 3, 2}, {3, 2, 1}};
}

MovePair move_surfaces(Move m, const Frame& f) {
    const int i = f[0], j = f[1], k = f[2];
    if (std::set<int>{i, j, k} != std::set<int>{1, 2, 3}) throw Error("frame must permute 1,2,3");
    const Vertex o{0, 0, 0};
    auto at = [&](std::initializer_list<int> dirs) { return sum_units(dirs); };
    auto plaq = [](const Vertex& base, int a, int b, int sign) {
        return OrientedPlaquette{base, a, b, sign};
    };
    MovePair mp;
    switch (m) {
        case Move::A:
            mp.first.plaquettes = {plaq(o, i, j, 1), plaq(o, j, k, 1), plaq(o, k, i, 1)};
            mp.first.interior = {o};
            mp.first.boundary = {at({i}), at({j}), at({k})};
            mp.second.plaquettes = {plaq(at({k}), i, j, 1), plaq(at({i}), j, k, 1),
                                    plaq(at({j}), k, i, 1)};
            mp.second.interior = {at({i, j}), at({j, k}), at({k, i}), at({i, j, k})};
            mp.second.boundary = mp.first.boundary;
            break;
        case Move::B:
            mp.first.plaquettes = {plaq(o, i, j, 1), plaq(o, k, i, 1), plaq(at({i}), j, k, -1)};
            mp.first.interior = {at({i})};
            mp.first.boundary = {o, at({j}), at({k}), at({i, j}), at({i, k})};
            mp.second.plaquettes = {plaq(at({k}), i, j, 1), plaq(at({j}), k, i, 1),
                                    plaq(o, j, k, -1)};
            mp.second.interior = {at({j, k})};
            mp.second.boundary = mp.first.boundary;
            break;
        case Move::C:
            mp.first.plaquettes = {plaq(at({k}), i, j, 1), plaq(at({j}), k, i, 1)};
            mp.first.interior = {at({j, k}), at({i, j, k})};
            mp.first.boundary = {at({k}), at({i, k}), at({j}), at({i, j})};
            mp.second.plaquettes = {plaq(o, i, j, 1), plaq(o, j, k, 1), plaq(o, k, i, 1),
                                    plaq(at({i}), j, k, -1)};
            mp.second.interior = {o, at({i})};
            mp.second.boundary = mp.first.boundary;
            break;
        case Move::PopUp:
            mp.first.plaquettes = {plaq(o, i, j, 1)};
            mp.first.boundary = {o, at({i}), at({j}), at({i, j})};
            mp.second.plaquettes = {plaq(at({i}), j, k, 1), plaq(at({j}), k, i, 1),
                                    plaq(at({k}), i, j, 1), plaq(o, j, k, -1),
                                    plaq(o, k, i, -1)};
            mp.second.interior = {at({k}), at({k, i}), at({j, k}), at({i, j, k})};
            mp.second.boundary = mp.first.boundary;
            break;
    }
    return mp;
}

osc::KernelDiff elementary_move_check(Move m, const LatticeLagrangianCoeffs& k, const Frame& f) {
    const MovePair mp = move_surfaces(m, f);
    return osc::compare(surface_kernel(mp.first, k), surface_kernel(mp.second, k));
}

osc::KernelDiff elementary_move_check(Move m, const LatticeParams& params, const Frame& f) {
    return elementary_move_check(m, canonical_coeffs(params.p, params.q, params.r), f);
}

Eigen::Matrix3d move_a_hessian(const LatticeLagrangianCoeffs& k, const Frame& f) {
    const MovePair mp = move_surfaces(Move::A, f);
    const OscKernel K = action_kernel(mp.second, k);
    const int i = f[0], j = f[1], l = f[2];
    const std::array<Vertex, 3> order{sum_units({i, j}), sum_units({j, l}), sum_units({l, i})};
    Eigen::Matrix3d H;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            H(r, c) = K.A(K.index_of(vertex_label(order[r])), K.index_of(vertex_label(order[c])));
    return H;
}

Eigen::Matrix3d move_a_matrix(const LatticeLagrangianCoeffs& k, const Frame& f) {
    const int i = f[0] - 1, j = f[1] - 1, l = f[2] - 1;
    const auto& b = k.b;
    const auto& d = k.d;
    Eigen::Matrix3d A;
    A << b[j][l] - b[i][l], d[l][i], d[j][l],
         d[l][i], b[l][i] - b[j][i], d[i][j],
         d[j][l], d[i][j], b[i][j] - b[l][j];
    return A;
}

namespace {

struct MoveAOutcome {
    double mismatch = 0;
    bool delta_failure = false;
};

MoveAOutcome move_a_all_frames(const LatticeLagrangianCoeffs& k) {
    MoveAOutcome out;
    for (const auto& f : all_frames()) {
        try {
            out.mismatch = std::max(out.mismatch, elementary_move_check(Move::A, k, f).exponent_diff);
        } catch (const DeltaConstraintError&) {
            out.delta_failure = true;
        }
    }
    return out;
}

double coeff_scale(const LatticeLagrangianCoeffs& k) {
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
                s = std::max({s, std::abs(k.a[i][j]), std::abs(k.b[i][j]), std::abs(k.c[i][j]),
                              std::abs(k.d[i][j])});
    return s > 0 ? s : 1.0;
}

}  // namespace

TwoFormReport uniqueness_scan_2form(const LatticeLagrangianCoeffs& k, double tol) {
    if (!antisymmetric(k)) throw Error("a and d tables must be antisymmetric");
    TwoFormReport r;
    const double scale = coeff_scale(k);
    const auto& d = k.d;
    r.a_sum = k.a[0][1] + k.a[1][2] + k.a[2][0];
    r.det_a = move_a_matrix(k).determinant();
    r.lambda = d[0][1] * d[1][2] + d[1][2] * d[2][0] + d[2][0] * d[0][1] + 1.0;
    r.critical_branch = std::abs(r.a_sum) <= tol * scale &&
                        std::abs(r.det_a) <= tol * scale * scale * scale;
    r.c_constant = r.a_zero = r.b_antisymmetric = r.c_symmetric = true;
    const double c0 = k.c[0][1];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            r.c_constant = r.c_constant && std::abs(k.c[i][j] - c0) <= tol * scale;
            r.a_zero = r.a_zero && std::abs(k.a[i][j]) <= tol * scale;
            r.b_antisymmetric = r.b_antisymmetric && std::abs(k.b[i][j] + d[i][j]) <= tol * scale;
            r.c_symmetric = r.c_symmetric && std::abs(k.c[i][j] - k.c[j][i]) <= tol * scale;
        }
    }
    r.lambda_matches = std::abs(r.lambda - (1.0 - c0 * c0)) <= tol * scale * scale;
    const MoveAOutcome mo = move_a_all_frames(k);
    r.move_a_mismatch = mo.mismatch;
    r.delta_failure = mo.delta_failure;
    r.pass = r.critical_branch && r.c_constant && r.a_zero && r.lambda_matches &&
             r.b_antisymmetric && r.c_symmetric && !r.delta_failure && r.move_a_mismatch <= tol;
    return r;
}

std::vector<PerturbationResult> perturbation_grid(const LatticeLagrangianCoeffs& base, double eps,
                                                  double threshold) {
    std::vector<PerturbationResult> out;
    auto record = [&](const std::string& label, const LatticeLagrangianCoeffs& k) {
        const MoveAOutcome mo = move_a_all_frames(k);
        PerturbationResult pr;
        pr.label = label;
        pr.mismatch = mo.mismatch;
        pr.delta_failure = mo.delta_failure;
        pr.rejected = mo.delta_failure || mo.mismatch > threshold;
        out.push_back(pr);
    };
    const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {1, 2}, {2, 0}}};
    for (double sg : {1.0, -1.0}) {
        const double h = sg * eps;
        const std::string tag = sg > 0 ? "+" : "-";
        for (auto [i, j] : pairs) {
            const std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
            LatticeLagrangianCoeffs k = base;
            k.a[i][j] += h;
            k.a[j][i] -= h;
            record("a" + ij + tag, k);
            k = base;
            k.d[i][j] += h;
            k.d[j][i] -= h;
            record("d" + ij + tag, k);
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                const std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
                LatticeLagrangianCoeffs k = base;
                k.b[i][j] += h;
                record("b" + ij + tag, k);
                k = base;
                k.c[i][j] += h;
                record("c" + ij + tag, k);
            }
        }
    }
    return out;
}

Surface flat_patch(int nx, int ny) {
    if (nx < 1 || ny < 1) throw Error("patch needs at least one plaquette");
    Surface s;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) s.plaquettes.push_back({{x, y, 0}, 1, 2, 1});
    for (int x = 0; x <= nx; ++x) {
        for (int y = 0; y <= ny; ++y) {
            const bool edge = x == 0 || y == 0 || x == nx || y == ny;
            (edge ? s.boundary : s.interior).push_back({x, y, 0});
        }
    }
    return s;
}

namespace {

OrientedPlaquette cube_face(const Vertex& cube, int normal, bool far) {
    const auto [i, j] = plane_with_normal(normal);
    return {far ? shift(cube, normal) : cube, i, j, far ? 1 : -1};
}

std::set<Vertex> all_corners(const std::vector<OrientedPlaquette>& ps) {
    std::set<Vertex> out;
    for (const auto& p : ps)
        for (const auto& v : corners(p)) out.insert(v);
    return out;
}

// Vertices integrated by the local identity behind each allowed flip pattern.
std::optional<std::set<Vertex>> pattern_vertices(const Vertex& v,
                                                 const std::vector<std::pair<int, bool>>& small) {
    auto at = [&](std::initializer_list<int> dirs) { return add(v, sum_units(dirs)); };
    if (small.size() == 1) {
        const auto [n, far] = small[0];
        if (far) return std::nullopt;
        const int a = n % 3 + 1, b = a % 3 + 1;
        return std::set<Vertex>{at({n}), at({n, a}), at({n, b}), at({1, 2, 3})};
    }
    std::set<int> normals;
    int far_count = 0;
    for (const auto& [n, far] : small) {
        normals.insert(n);
        far_count += far ? 1 : 0;
    }
    if (normals.size() != small.size()) return std::nullopt;
    if (small.size() == 2) {
        if (far_count != 2) return std::nullopt;
        const int j = small[0].first, k = small[1].first, i = 6 - j - k;
        return std::set<Vertex>{at({j, k}), at({1, 2, 3}), v, at({i})};
    }
    if (small.size() == 3) {
        if (far_count == 0 || far_count == 3)
            return std::set<Vertex>{v, at({1, 2}), at({2, 3}), at({3, 1}), at({1, 2, 3})};
        int n = 0;
        for (const auto& [m, far] : small)
            if (far == (far_count == 1)) n = m;
        const int a = n % 3 + 1, b = a % 3 + 1;
        return std::set<Vertex>{at({n}), at({a, b})};
    }
    return std::nullopt;
}

std::optional<Surface> try_flip(const Surface& s, const CubeFlip& flip) {
    const Vertex& v = flip.cube;
    for (int c = 0; c < 3; ++c)
        if (v[c] < kBoxLo || v[c] + 1 > kBoxHi) return std::nullopt;
    std::vector<OrientedPlaquette> rest, added;
    std::vector<std::pair<int, bool>> in_surface, absent;
    std::vector<bool> used(s.plaquettes.size(), false);
    for (int n = 1; n <= 3; ++n) {
        for (bool far : {false, true}) {
            const OrientedPlaquette f = cube_face(v, n, far);
            bool found = false;
            for (std::size_t q = 0; q < s.plaquettes.size(); ++q) {
                if (!same_face(s.plaquettes[q], f)) continue;
                if (canonical(s.plaquettes[q]).sign != -flip.orientation * f.sign) return std::nullopt;
                used[q] = true;
                found = true;
            }
            if (found) {
                in_surface.push_back({n, far});
            } else {
                absent.push_back({n, far});
                OrientedPlaquette g = f;
                g.sign = flip.orientation * f.sign;
                added.push_back(g);
            }
        }
    }
    if (in_surface.empty() || absent.empty()) return std::nullopt;
    const auto& small = in_surface.size() <= 3 ? in_surface : absent;
    const auto white = pattern_vertices(v, small);
    if (!white) return std::nullopt;

    for (std::size_t q = 0; q < s.plaquettes.size(); ++q)
        if (!used[q]) rest.push_back(s.plaquettes[q]);
    const std::set<Vertex> bd(s.boundary.begin(), s.boundary.end());
    for (const auto& w : *white) {
        if (bd.count(w)) return std::nullopt;
        for (const auto& p : rest)
            for (const auto& x : lagrangian_points(p))
                if (x == w) return std::nullopt;
    }
    Surface out;
    out.plaquettes = rest;
    out.plaquettes.insert(out.plaquettes.end(), added.begin(), added.end());
    const std::set<Vertex> before = all_corners(s.plaquettes);
    const std::set<Vertex> after = all_corners(out.plaquettes);
    for (const auto& x : before)
        if (!after.count(x) && !white->count(x)) return std::nullopt;
    for (const auto& x : after)
        if (!before.count(x) && !white->count(x)) return std::nullopt;
    for (const auto& x : bd)
        if (!after.count(x)) return std::nullopt;
    out.boundary = s.boundary;
    for (const auto& x : after)
        if (!bd.count(x)) out.interior.push_back(x);
    return out;
}

}  // namespace

std::vector<CubeFlip> applicable_flips(const Surface& s) {
    std::set<Vertex> cubes;
    for (const auto& p : s.plaquettes) {
        const auto c = canonical(p);
        const int n = normal_of(c.i, c.j);
        cubes.insert(c.base);
        cubes.insert(shift(c.base, n, -1));
    }
    std::vector<CubeFlip> out;
    for (const auto& v : cubes)
        for (int eps : {1, -1})
            if (try_flip(s, {v, eps})) out.push_back({v, eps});
    return out;
}

Surface apply_flip(const Surface& s, const CubeFlip& flip) {
    auto out = try_flip(s, flip);
    if (!out) throw Error("cube flip does not apply at " + vertex_label(flip.cube));
    return *out;
}

Surface random_deformation(const Surface& s, std::uint64_t seed, int steps) {
    std::mt19937_64 rng(seed);
    Surface cur = s;
    for (int n = 0; n < steps; ++n) {
        const auto flips = applicable_flips(cur);
        if (flips.empty()) break;
        const auto pick = std::uniform_int_distribution<std::size_t>(0, flips.size() - 1)(rng);
        cur = apply_flip(cur, flips[pick]);
    }
    return cur;
}

Surface reversed(const Surface& s) {
    Surface out = s;
    for (auto& p : out.plaquettes) p.sign = -p.sign;
    return out;
}

nlohmann::json to_json(const Surface& s) {
    nlohmann::json j;
    j["plaquettes"] = nlohmann::json::array();
    for (const auto& p : s.plaquettes)
        j["plaquettes"].push_back({{"base", p.base}, {"plane", {p.i, p.j}}, {"sign", p.sign}});
    j["interior"] = s.interior;
    j["boundary"] = s.boundary;
    return j;
}

Surface surface_from_json(const nlohmann::json& j) {
    try {
        Surface s;
        for (const auto& p : j.at("plaquettes")) {
            OrientedPlaquette q;
            q.base = p.at("base").get<Vertex>();
            const auto plane = p.at("plane").get<std::array<int, 2>>();
            q.i = plane[0];
            q.j = plane[1];
            q.sign = p.value("sign", 1);
            check_dirs(q.i, q.j);
            s.plaquettes.push_back(q);
        }
        s.interior = j.value("interior", std::vector<Vertex>{});
        s.boundary = j.value("boundary", std::vector<Vertex>{});
        validate(s);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed surface: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid surface: ") + e.what());
    }
}

}  // namespace mdc::surface
