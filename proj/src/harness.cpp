#include "mdclab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "mdclab/errors.hpp"
#include "mdclab/flows.hpp"
#include "mdclab/lattice2form.hpp"
#include "mdclab/qprop1d.hpp"
#include "mdclab/qsurface.hpp"
#include "mdclab/reduction.hpp"
#include "mdclab/reduction_p3.hpp"
#include "mdclab/sweep.hpp"

namespace mdc::harness {

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> names = {"params",  "lattice",      "reduction",
                                                   "p3",      "prop1d",       "uniqueness1d",
                                                   "surface", "uniqueness2d"};
    return names;
}

const std::vector<std::string>& known_probes() {
    static const std::vector<std::string> names = {"perturbed-lagrangian", "perturbed-2form",
                                                   "unhalved-b", "squared-prefactor-cos-nu"};
    return names;
}

std::map<std::string, double> default_tolerances() {
    return {
        {"identity", 1e-12},     {"exact", 1e-15},          {"consistency", 1e-12},
        {"closure", 1e-10},      {"offshell", 1e-3},        {"det", 1e-12},
        {"commutator", 1e-12},   {"orbit", 1e-9},           {"corner", 1e-10},
        {"oneform", 1e-10},      {"necessity", 1e-4},       {"solution", 1e-10},
        {"flow", 1e-10},         {"multiform", 1e-8},       {"p3_commutator", 1e-12},
        {"p3_invariant", 1e-9},  {"p3_solution", 1e-8},     {"tridiag", 1e-12},
        {"nstep", 1e-9},         {"factorization", 1e-11},  {"path", 1e-9},
        {"corner_swap", 1e-10},  {"amplitude", 1e-10},      {"uniqueness", 1e-10},
        {"sensitivity", 1e-5},   {"qinvariant", 1e-12},     {"move", 1e-12},
        {"deformation", 1e-10},  {"surface_sensitivity", 1e-4},
    };
}

namespace {

LatticeParams parse_params(const nlohmann::json& j) {
    LatticeParams p;
    if (j.is_array()) {
        if (j.size() != 3) throw ConfigError("parameter triples need three entries");
        p.p = j[0].get<double>();
        p.q = j[1].get<double>();
        p.r = j[2].get<double>();
    } else {
        p.p = j.at("p").get<double>();
        p.q = j.at("q").get<double>();
        p.r = j.at("r").get<double>();
    }
    return p;
}

}  // namespace

Config config_from_json(const nlohmann::json& j) {
    Config c;
    try {
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        c.seed = j.value("seed", c.seed);
        c.trials = j.value("trials", c.trials);
        c.hbar = j.value("hbar", c.hbar);
        if (j.contains("params")) {
            const auto& p = j.at("params");
            if (p.is_array()) {
                for (const auto& e : p) c.params.push_back(parse_params(e));
            } else if (p.is_object()) {
                c.range.lo = p.value("lo", c.range.lo);
                c.range.hi = p.value("hi", c.range.hi);
                c.range.min_gap = p.value("min_gap", c.range.min_gap);
            } else {
                throw ConfigError("params must be a list of triples or a sampling range");
            }
        }
        if (j.contains("tolerances"))
            for (const auto& [name, value] : j.at("tolerances").items())
                c.tolerances[name] = value.get<double>();
        if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
        if (j.contains("probes")) c.probes = j.at("probes").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    for (auto& p : c.params) p.hbar = c.hbar;
    validate(c);
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void validate(const Config& c) {
    if (c.trials < 1) throw ConfigError("trials must be at least 1");
    if (!(c.hbar > 0)) throw ConfigError("hbar must be positive");
    if (!(c.range.lo > 0 && c.range.hi > c.range.lo && c.range.min_gap > 0))
        throw ConfigError("sampling range must satisfy 0 < lo < hi and min_gap > 0");
    const std::set<std::string> suites(known_suites().begin(), known_suites().end());
    for (const auto& s : c.suites)
        if (!suites.count(s)) throw ConfigError("unknown suite " + s);
    const std::set<std::string> probes(known_probes().begin(), known_probes().end());
    for (const auto& p : c.probes)
        if (!probes.count(p)) throw ConfigError("unknown probe " + p);
    const auto defaults = default_tolerances();
    for (const auto& [name, value] : c.tolerances) {
        if (!defaults.count(name)) throw ConfigError("unknown tolerance " + name);
        if (!(value > 0)) throw ConfigError("tolerance " + name + " must be positive");
    }
    for (auto p : c.params) {
        p.hbar = c.hbar;
        try {
            derive(p);
        } catch (const DegenerateParams& e) {
            throw ConfigError(std::string("degenerate parameter triple: ") + e.what());
        }
    }
}

bool Report::ok() const { return failures() == 0; }

std::size_t Report::failures() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return !c.pass; }));
}

namespace {

struct SuiteOutput {
    std::vector<CheckRecord> checks;
    std::vector<CsvRow> rows;
};

class Suite {
public:
    Suite(std::string name, const Config& c) : name_(std::move(name)), cfg_(c) {}

    double tol(const std::string& key) const { return cfg_.tolerances.at(key); }

    void upper(const std::string& check, const std::string& ref, double residual,
               const std::string& key) {
        push(check, ref, residual, tol(key), Bound::Upper);
    }
    void lower(const std::string& check, const std::string& ref, double residual,
               const std::string& key) {
        push(check, ref, residual, tol(key), Bound::Lower);
    }
    void flag(const std::string& check, const std::string& ref, bool ok) {
        push(check, ref, ok ? 0.0 : 1.0, 0.5, Bound::Upper);
    }
    void probe(const std::string& check, const std::string& ref, double residual,
               const std::string& key) {
        push(check, ref, residual, tol(key), Bound::ExpectedFail);
    }
    void row(const DerivedParams& d, const std::string& name, double value) {
        out_.rows.push_back({d, name, value});
    }

    SuiteOutput take() { return std::move(out_); }

private:
    void push(const std::string& check, const std::string& ref, double residual, double tolerance,
              Bound bound) {
        CheckRecord r{name_, check, ref, residual, tolerance, bound, false};
        const bool finite = std::isfinite(residual);
        switch (bound) {
            case Bound::Upper: r.pass = finite && residual <= tolerance; break;
            case Bound::Lower: r.pass = finite && residual >= tolerance; break;
            case Bound::ExpectedFail: r.pass = !finite || residual > tolerance; break;
        }
        out_.checks.push_back(r);
    }

    std::string name_;
    const Config& cfg_;
    SuiteOutput out_;
};

std::vector<LatticeParams> samples_for(const Config& c) {
    if (!c.params.empty()) return c.params;
    return sample_params(c.seed, static_cast<std::size_t>(c.trials), c.range, c.hbar);
}

std::vector<DerivedParams> elliptic(const std::vector<LatticeParams>& ps) {
    std::vector<DerivedParams> out;
    for (const auto& p : ps) {
        try {
            const DerivedParams d = derive(p);
            if (!d.hyperbolic) out.push_back(d);
        } catch (const DegenerateParams&) {
        }
    }
    return out;
}

DerivedParams base_point(double hbar) { return derive({3.0, 2.0, 1.0, hbar}); }

std::mt19937_64 suite_rng(const Config& c, std::uint64_t salt) {
    return std::mt19937_64(c.seed * 0x9e3779b97f4a7c15ULL + salt);
}

void params_suite(Suite& s, const Config& c, const std::vector<LatticeParams>& ps) {
    const auto ident = sweep::parameter_identity_sweep(ps, sweep::Mode::Parallel);
    s.upper("identities", "edge-parameter-identities", sweep::summarize(ident).max, "identity");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        try {
            s.row(derive(ps[i]), "parameter_identity", ident[i]);
        } catch (const DegenerateParams&) {
        }
    }
    const DerivedParams d = base_point(c.hbar);
    s.upper("stt_value_321", "edge-parameter-identities",
            std::abs(d.s * d.t * d.tprime - 1.0 / 30.0), "exact");
    const EdgeParams e = edge_params(3, 2, 1);
    s.upper("edge_values_321", "edge-parameter-identities",
            std::max({std::abs(e.s[0][1] - 5.0), std::abs(e.s[1][2] - 3.0),
                      std::abs(e.s[2][0] + 2.0)}),
            "exact");
}

void lattice_suite(Suite& s, const Config& c) {
    const auto n = static_cast<std::size_t>(c.trials);
    const auto spreads = sweep::cube_consistency_sweep(c.seed, n, sweep::Mode::Parallel);
    s.upper("cube_consistency", "consistency-around-the-cube", sweep::summarize(spreads).max,
            "consistency");
    auto rng = suite_rng(c, 2);
    std::uniform_real_distribution<double> field(-2.0, 2.0);
    const auto ps = sample_params(c.seed + 2, n, c.range, c.hbar);
    double on = 0;
    std::vector<double> off;
    for (const auto& p : ps) {
        const lattice::CubeSample cube =
            lattice::complete_cube(field(rng), field(rng), field(rng), field(rng), p.p, p.q, p.r);
        on = std::max(on, lattice::closure_residual(cube, p.p, p.q, p.r));
        lattice::CubeSample moved = cube;
        moved.u12 += 0.1;
        off.push_back(lattice::closure_residual(moved, p.p, p.q, p.r));
    }
    s.upper("closure_on_shell", "two-form-closure", on, "closure");
    s.lower("closure_off_shell_median", "two-form-closure", sweep::summarize(off).median,
            "offshell");
    const auto general =
        lattice::classify_general_quad_lagrangian(lattice::canonical_quad_coeffs(3, 2, 1, {0.3, -0.7, 1.1}));
    s.upper("general_quadratic_closure", "general-quadratic-lagrangian", general.closure_max,
            "closure");
}

void reduction_suite(Suite& s, const Config& c, const std::vector<LatticeParams>& ps) {
    using namespace reduction;
    auto rng = suite_rng(c, 3);
    std::uniform_real_distribution<double> field(-1.0, 1.0);
    double det = 0, comm = 0, orbit = 0, corner = 0, common = 0, closure = 0, solution = 0;
    std::vector<double> nec_alpha, nec_beta, nec_a0, nec_b0;
    for (const auto& p : ps) {
        DerivedParams d;
        try {
            d = derive(p);
        } catch (const DegenerateParams&) {
            continue;
        }
        const Mat2 S = hat_matrix(d.s), T = bar_matrix(d.t, d.tprime);
        det = std::max({det, std::abs(S.determinant() - 1.0), std::abs(T.determinant() - 1.0)});
        const double cr = commutator_residual(d.s, d.t, d.tprime);
        comm = std::max(comm, cr);
        s.row(d, "commutator", cr);
        if (d.hyperbolic) continue;

        Vec2 state(field(rng), field(rng));
        double orbit_here = 0;
        {
            Vec2 h = state, b = state;
            const double Ib0 = invariant_eval(h(0), (S * h)(0), d.b);
            const double Ia0 = invariant_eval(b(0), (T * b)(0), d.a);
            for (int k = 0; k < 100; ++k) {
                h = S * h;
                b = T * b;
                const double Ib = invariant_eval(h(0), (S * h)(0), d.b);
                const double Ia = invariant_eval(b(0), (T * b)(0), d.a);
                orbit_here = std::max({orbit_here, std::abs(Ib - Ib0) / std::max(1.0, std::abs(Ib0)),
                                       std::abs(Ia - Ia0) / std::max(1.0, std::abs(Ia0))});
            }
        }
        orbit = std::max(orbit, orbit_here);
        s.row(d, "orbit_invariant", orbit_here);

        const double x = state(0), xh = (S * state)(0), xb = (T * state)(0);
        const double Xa = momentum_a(x, xb, d), Xb = momentum_b(x, xh, d);
        corner = std::max(corner, std::abs(Xa - Xb) / std::max(1.0, std::abs(Xb)));
        {
            const double Ib = invariant_eval(x, xh, d.b);
            const double k = invariant_common(x, Xb, d.P) / Ib;
            const Vec2 other(field(rng), field(rng));
            const double xo = other(0), xho = (S * other)(0);
            const double lhs = invariant_common(xo, momentum_b(xo, xho, d), d.P);
            common = std::max(common, std::abs(lhs - k * invariant_eval(xo, xho, d.b)) /
                                          std::max(1.0, std::abs(lhs)));
        }
        const OscLagrangianCoeffs cc = closure_coeffs(d);
        closure = std::max({closure, oneform_closure_residual(state, d, cc),
                            oneform_closure_residual(state, d)});
        auto perturbed = [&](double OscLagrangianCoeffs::*field_ptr, std::vector<double>& sink) {
            OscLagrangianCoeffs k = cc;
            k.*field_ptr += 1e-2;
            sink.push_back(oneform_closure_residual(state, d, k));
        };
        perturbed(&OscLagrangianCoeffs::alpha, nec_alpha);
        perturbed(&OscLagrangianCoeffs::beta, nec_beta);
        perturbed(&OscLagrangianCoeffs::a0, nec_a0);
        perturbed(&OscLagrangianCoeffs::b0, nec_b0);
        solution = std::max(solution, solution_residuals(field(rng), field(rng), d).max());
    }
    s.upper("map_determinants", "symplectic-reduced-maps", det, "det");
    s.upper("map_commutator", "commuting-reduced-maps", comm, "commutator");
    s.upper("orbit_invariants", "map-invariants", orbit, "orbit");
    s.upper("corner_momenta", "corner-momenta", corner, "corner");
    s.upper("common_invariant", "common-invariant", common, "orbit");
    s.upper("oneform_closure", "one-form-closure", closure, "oneform");
    s.lower("closure_needs_alpha", "one-form-closure", sweep::summarize(nec_alpha).median, "necessity");
    s.lower("closure_needs_beta", "one-form-closure", sweep::summarize(nec_beta).median, "necessity");
    s.lower("closure_needs_a0", "one-form-closure", sweep::summarize(nec_a0).median, "necessity");
    s.lower("closure_needs_b0", "one-form-closure", sweep::summarize(nec_b0).median, "necessity");
    s.upper("explicit_solution", "explicit-solution", solution, "solution");

    double flow = 0, multi = 0;
    for (double b : {-0.8, -0.3, 0.2, 0.68, 0.9}) {
        for (int m : {1, 2, 5}) {
            const auto f = continuous_flow_residual(b, m, 0.7, -0.4);
            flow = std::max({flow, f.forward, f.backward, f.ode});
            const auto [r1, r2] = continuous_multiform_residual(0.3, b, m, m + 1, 0.7, -0.4);
            multi = std::max({multi, r1, r2});
        }
    }
    s.upper("continuous_flows", "continuous-flows", flow, "flow");
    s.upper("continuous_multiform", "continuous-multiform", multi, "multiform");
}

void p3_suite(Suite& s, const Config& c, const std::vector<LatticeParams>& ps) {
    using namespace reduction;
    auto rng = suite_rng(c, 4);
    std::uniform_real_distribution<double> field(-1.0, 1.0);
    double comm = 0, inv = 0;
    for (const auto& p : ps) {
        DerivedParams d;
        try {
            d = derive(p);
        } catch (const DegenerateParams&) {
            continue;
        }
        comm = std::max(comm, p3_commutator_residual(d.s, d.t, d.tprime));
        Vec4 z(field(rng), field(rng), field(rng), field(rng));
        const auto [I1, I2] = p3_invariants(z, d.s);
        for (const Vec4& w : {p3_hat(z, d.s), p3_bar(z, d.t, d.tprime)}) {
            const auto [J1, J2] = p3_invariants(w, d.s);
            inv = std::max({inv, std::abs(J1 - I1) / std::max(1.0, std::abs(I1)),
                            std::abs(J2 - I2) / std::max(1.0, std::abs(I2))});
        }
    }
    s.upper("p3_commutator", "period-three-maps", comm, "p3_commutator");
    s.upper("p3_invariants", "period-three-invariants", inv, "p3_invariant");
    const DerivedParams d = base_point(c.hbar);
    s.upper("p3_involution", "period-three-involution",
            poisson_bracket(quad_I1<double>(), quad_I2<double>(d.s)), "p3_commutator");
    s.upper("p3_joint_solution", "period-three-solution",
            p3_joint_solution_residual({0.4, -0.3, 0.2, 0.5}, d.s, d.t, d.tprime), "p3_solution");
}

void prop1d_suite(Suite& s, const Config& c, const std::vector<LatticeParams>& ps) {
    using namespace qprop;
    const DerivedParams d = base_point(c.hbar);
    const auto ds = elliptic(ps);

    s.upper("tridiag_n2_value", "tridiagonal-determinant",
            std::abs(tridiagonal_det(2, base_point(1.0)) - cplx(0.0, -8.5)), "tridiag");
    double tri = 0;
    for (const auto& e : ds) {
        for (int N = 2; N <= 20; ++N) {
            const cplx rec = tridiagonal_det(N, e), closed = tridiagonal_det_closed_form(N, e);
            const double scale = std::pow((e.P + e.Q) / (2.0 * e.hbar * e.q), N - 1);
            tri = std::max(tri, std::abs(rec - closed) / scale);
        }
    }
    s.upper("tridiag_recursion", "tridiagonal-determinant", tri, "tridiag");

    double nstep = 0;
    int caustic_mismatch = 0;
    for (int N = 1; N <= 20; ++N) {
        bool iter_caustic = false, closed_caustic = false;
        osc::OscKernel it, cl;
        try {
            it = n_step_kernel(N, d);
        } catch (const CausticError&) {
            iter_caustic = true;
        }
        try {
            cl = n_step_closed_form(N, d);
        } catch (const CausticError&) {
            closed_caustic = true;
        }
        if (iter_caustic != closed_caustic) ++caustic_mismatch;
        if (!iter_caustic && !closed_caustic) nstep = std::max(nstep, osc::compare(it, cl).exponent_diff);
    }
    s.upper("n_step_closed_form", "n-step-propagator", nstep, "nstep");
    s.flag("caustics_agree", "n-step-propagator", caustic_mismatch == 0);

    const auto fact = sweep::factorization_sweep(ps, sweep::Mode::Parallel);
    s.upper("factorization", "one-step-factorization", sweep::summarize(fact).max, "factorization");
    for (const auto& e : ds)
        s.row(e, "factorization", osc::compare(ub_factorization_kernel(e),
                                               one_step_kernel(Direction::Hat, e)).exponent_diff);

    const OneFormModel model = closed_form_model(d);
    auto path = [](std::initializer_list<Step> steps) { return TimePath{std::vector<Step>(steps)}; };
    double swap = 0, amp = 0;
    auto compare_paths = [&](const TimePath& x, const TimePath& y) {
        const auto diff = osc::compare(path_kernel(x, model), path_kernel(y, model));
        swap = std::max(swap, diff.exponent_diff);
        amp = std::max(amp, std::abs(diff.amp_ratio - 1.0) + std::abs(diff.pihbar_diff));
    };
    compare_paths(path({Step::HatForward, Step::BarForward}),
                  path({Step::BarForward, Step::HatForward}));
    compare_paths(path({Step::BarForward, Step::HatForward, Step::BarBackward}),
                  path({Step::HatForward}));
    compare_paths(path({Step::HatForward, Step::BarForward, Step::HatForward, Step::BarBackward,
                        Step::HatBackward, Step::HatForward}),
                  path({Step::HatForward, Step::HatForward}));
    s.upper("corner_paths", "time-path-independence", swap, "corner_swap");
    s.upper("corner_amplitudes", "time-path-independence", amp, "amplitude");

    double paths = 0;
    const std::pair<int, int> ends[] = {{3, 2}, {2, 1}, {1, 3}};
    for (const auto& [N, M] : ends) {
        for (int detours : {0, 2}) {
            const auto v = sweep::path_sweep(d, N, M, detours, c.seed + 100 * N + 10 * M + detours, 50,
                                             sweep::Mode::Parallel);
            paths = std::max(paths, sweep::summarize(v).max);
        }
    }
    s.upper("random_paths", "multi-time-propagator", paths, "path");

    double qinv = 0;
    for (int N = 1; N <= 10; ++N) {
        for (Direction dir : {Direction::Hat, Direction::Bar}) {
            try {
                qinv = std::max(qinv, invariant_kernel_residual(N, d, dir));
            } catch (const CausticError&) {
            }
        }
    }
    s.upper("operator_invariant", "operator-invariant", qinv, "qinvariant");
}

void uniqueness1d_suite(Suite& s, const Config& c) {
    using namespace qprop;
    double pass = 0;
    double sensitivity = 1e300;
    const std::pair<double, double> grid[] = {{0.3, -0.5}, {-0.7, 0.2}, {0.9, 0.1},
                                              {1.5, 2.5},  {-1.8, 1.2}, {0.5, 0.5}};
    for (const auto& [a, b] : grid) {
        for (double f : {0.0, 0.7}) {
            const OscLagrangianCoeffs k = pathindep_coeffs(a, b, 1.3, f);
            pass = std::max(pass, uniqueness_scan_1form(k, c.tolerances.at("uniqueness")).mismatch);
            for (double OscLagrangianCoeffs::*m :
                 {&OscLagrangianCoeffs::alpha, &OscLagrangianCoeffs::beta, &OscLagrangianCoeffs::a0,
                  &OscLagrangianCoeffs::b0}) {
                OscLagrangianCoeffs q = k;
                q.*m += 1e-3;
                sensitivity = std::min(sensitivity, uniqueness_scan_1form(q).mismatch);
            }
        }
    }
    s.upper("pathindep_coeffs_pass", "one-form-uniqueness", pass, "uniqueness");
    s.lower("pathindep_coeffs_necessary", "one-form-uniqueness", sensitivity, "sensitivity");
    const DerivedParams d = base_point(c.hbar);
    s.upper("closure_coeffs_pass", "one-form-uniqueness",
            uniqueness_scan_1form(reduction::closure_coeffs(d)).mismatch, "uniqueness");
}

void surface_suite(Suite& s, const Config& c) {
    using namespace surface;
    const auto k = canonical_coeffs(3, 2, 1);
    const std::pair<Move, const char*> moves[] = {
        {Move::A, "move_a"}, {Move::B, "move_b"}, {Move::C, "move_c"}, {Move::PopUp, "pop_up"}};
    for (const auto& [m, label] : moves) {
        double worst = 0;
        for (const auto& f : all_frames())
            worst = std::max(worst, elementary_move_check(m, k, f).exponent_diff);
        s.upper(label, "surface-independence", worst, "move");
    }
    auto perturbed = k;
    perturbed.d[0][1] += 1e-2;
    perturbed.d[1][0] -= 1e-2;
    s.lower("move_a_detects_perturbation", "surface-independence",
            elementary_move_check(Move::A, perturbed).exponent_diff, "surface_sensitivity");
    const auto v = sweep::deformation_sweep(k, c.seed, 20, 8, sweep::Mode::Parallel);
    s.upper("random_deformations", "surface-independence", sweep::summarize(v).max, "deformation");
}

void uniqueness2d_suite(Suite& s, const Config&) {
    using namespace surface;
    const auto k = canonical_coeffs(3, 2, 1);
    const TwoFormReport r = uniqueness_scan_2form(k);
    s.flag("canonical_critical_pass", "two-form-uniqueness", r.pass);
    s.upper("canonical_move_a", "two-form-uniqueness", r.move_a_mismatch, "move");
    auto asym = k;
    asym.c[0][1] += 1e-2;
    s.flag("asymmetric_c_rejected", "two-form-uniqueness", uniqueness_scan_2form(asym).delta_failure);
    double weakest = 1e300;
    bool all_rejected = true;
    for (const auto& g : perturbation_grid(k)) {
        all_rejected = all_rejected && g.rejected;
        if (!g.delta_failure) weakest = std::min(weakest, g.mismatch);
    }
    s.flag("perturbations_rejected", "two-form-uniqueness", all_rejected);
    s.lower("perturbation_mismatch", "two-form-uniqueness", weakest, "sensitivity");
}

void probes_suite(Suite& s, const Config& c) {
    const DerivedParams d = base_point(c.hbar);
    for (const auto& name : c.probes) {
        if (name == "perturbed-lagrangian") {
            auto k = reduction::closure_coeffs(d);
            k.alpha *= 1.01;
            s.probe(name, "one-form-closure",
                    reduction::oneform_closure_residual(reduction::Vec2(0.3, -0.8), d, k), "oneform");
        } else if (name == "perturbed-2form") {
            auto k = surface::canonical_coeffs(3, 2, 1);
            k.d[0][1] += 1e-2;
            k.d[1][0] -= 1e-2;
            s.probe(name, "surface-independence",
                    surface::elementary_move_check(surface::Move::A, k).exponent_diff, "move");
        } else if (name == "unhalved-b") {
            s.probe(name, "reduction-coefficients", unhalved_b_residual(d), "identity");
        } else if (name == "squared-prefactor-cos-nu") {
            const auto g = reduction::p3_angles(d.s, d.t, d.tprime);
            const auto alt = reduction::p3_squared_prefactor_cos_nu(d.t, d.tprime);
            s.probe(name, "period-three-angles",
                    std::max(std::abs(alt.first - g.cos_nu_plus),
                             std::abs(alt.second - g.cos_nu_minus)),
                    "identity");
        }
    }
}

SuiteOutput run_suite(const std::string& name, const Config& c,
                      const std::vector<LatticeParams>& ps) {
    Suite s(name, c);
    if (name == "params") params_suite(s, c, ps);
    else if (name == "lattice") lattice_suite(s, c);
    else if (name == "reduction") reduction_suite(s, c, ps);
    else if (name == "p3") p3_suite(s, c, ps);
    else if (name == "prop1d") prop1d_suite(s, c, ps);
    else if (name == "uniqueness1d") uniqueness1d_suite(s, c);
    else if (name == "surface") surface_suite(s, c);
    else if (name == "uniqueness2d") uniqueness2d_suite(s, c);
    else if (name == "probes") probes_suite(s, c);
    return s.take();
}

}  // namespace

Report run(const Config& c) {
    validate(c);
    const auto ps = samples_for(c);
    std::vector<std::string> names;
    for (const auto& s : known_suites())
        if (std::find(c.suites.begin(), c.suites.end(), s) != c.suites.end()) names.push_back(s);
    if (!c.probes.empty()) names.push_back("probes");

    std::vector<SuiteOutput> outputs(names.size());
    std::vector<std::string> errors(names.size());
    const auto count = static_cast<std::int64_t>(names.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            outputs[i] = run_suite(names[i], c, ps);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }

    Report r;
    r.seed = c.seed;
    r.trials = c.trials;
    r.hbar = c.hbar;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!errors[i].empty()) {
            r.checks.push_back({names[i], "suite_error: " + errors[i], "harness", 1.0, 0.0,
                                Bound::Upper, false});
        }
        for (auto& ck : outputs[i].checks) r.checks.push_back(std::move(ck));
        for (auto& row : outputs[i].rows) r.sweep.push_back(std::move(row));
    }
    return r;
}

nlohmann::json to_json(const Report& r) {
    nlohmann::json j;
    j["schema"] = 1;
    j["environment"] = {{"seed", r.seed}, {"trials", r.trials}, {"hbar", r.hbar},
                        {"version", kVersion}};
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
        const char* kind = c.bound == Bound::Upper   ? "upper"
                           : c.bound == Bound::Lower ? "lower"
                                                     : "expected-fail";
        j["checks"].push_back({{"suite", c.suite},
                               {"name", c.name},
                               {"ref", c.ref},
                               {"residual", std::isfinite(c.residual) ? nlohmann::json(c.residual)
                                                                      : nlohmann::json("non-finite")},
                               {"tolerance", c.tolerance},
                               {"kind", kind},
                               {"pass", c.pass}});
    }
    const std::size_t failed = r.failures();
    j["summary"] = {{"total", r.checks.size()},
                    {"passed", r.checks.size() - failed},
                    {"failed", failed}};
    return j;
}

std::string report_text(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::string csv_text(const Report& r) {
    std::ostringstream out;
    out.precision(17);
    out << "p,q,r,s,t,tprime,b,a,P,mu,nu,residual_name,residual\n";
    for (const auto& row : r.sweep) {
        const auto& d = row.d;
        out << d.p << ',' << d.q << ',' << d.r << ',' << d.s << ',' << d.t << ',' << d.tprime << ','
            << d.b << ',' << d.a << ',' << d.P << ',' << d.mu << ',' << d.nu << ','
            << row.residual_name << ',' << row.residual << '\n';
    }
    return out.str();
}

}  // namespace mdc::harness
