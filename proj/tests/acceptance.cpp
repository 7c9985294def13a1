#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mdclab/errors.hpp"
#include "mdclab/flows.hpp"
#include "mdclab/lattice2form.hpp"
#include "mdclab/params.hpp"
#include "mdclab/qprop1d.hpp"
#include "mdclab/qsurface.hpp"
#include "mdclab/reduction.hpp"
#include "mdclab/reduction_p3.hpp"
#include "mdclab/sweep.hpp"

using namespace mdc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void upper(const char* what, double value, double tol) {
        note(what, value, "<=", tol);
        pass = pass && std::isfinite(value) && value <= tol;
    }
    void lower(const char* what, double value, double tol) {
        note(what, value, ">=", tol);
        pass = pass && std::isfinite(value) && value >= tol;
    }
    void flag(const char* what, bool ok) {
        append(std::string(what) + (ok ? "=yes" : "=no"));
        pass = pass && ok;
    }

private:
    void note(const char* what, double value, const char* op, double tol) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s=%.3g%s%.2g", what, value, op, tol);
        append(buf);
    }
    void append(const std::string& s) { detail += (detail.empty() ? "" : " ") + s; }
};

constexpr std::uint64_t kSeed = 20240601;

DerivedParams base() { return derive({3, 2, 1}); }

std::vector<DerivedParams> elliptic_samples(std::uint64_t seed, std::size_t n) {
    std::vector<DerivedParams> out;
    for (const auto& p : sample_params(seed, n)) {
        const DerivedParams d = derive(p);
        if (!d.hyperbolic) out.push_back(d);
    }
    return out;
}

Outcome parameter_identities() {
    Outcome o;
    double stt = 0, sij = 0;
    for (const auto& p : sample_params(kSeed, 1000)) {
        stt = std::max(stt, check_stt_identity(p));
        sij = std::max(sij, check_sij_identity(p.p, p.q, p.r));
    }
    o.upper("stt", stt, 1e-12);
    o.upper("sij", sij, 1e-12);
    const DerivedParams d = base();
    const EdgeParams e = edge_params(3, 2, 1);
    o.flag("stt_321_exact", d.s * d.t * d.tprime == 1.0 / 30.0);
    o.flag("edges_321_exact", e.s[0][1] == 5.0 && e.s[1][2] == 3.0 && e.s[2][0] == -2.0);
    return o;
}

Outcome cube_consistency() {
    Outcome o;
    const auto spread = sweep::cube_consistency_sweep(kSeed, 1000, sweep::Mode::Parallel);
    o.upper("spread", sweep::summarize(spread).max, 1e-12);
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_real_distribution<double> field(-2.0, 2.0);
    double on = 0;
    std::vector<double> off;
    for (const auto& p : sample_params(kSeed + 1, 1000)) {
        const auto c = lattice::complete_cube(field(rng), field(rng), field(rng), field(rng), p.p,
                                              p.q, p.r);
        on = std::max(on, lattice::closure_residual(c, p.p, p.q, p.r));
        auto moved = c;
        moved.u12 += 0.1;
        off.push_back(lattice::closure_residual(moved, p.p, p.q, p.r));
    }
    o.upper("closure_on", on, 1e-10);
    const auto st = sweep::summarize(off);
    o.lower("closure_off_median", st.median, 1e-3);
    char buf[64];
    std::snprintf(buf, sizeof buf, "(off_min=%.2g)", *std::min_element(off.begin(), off.end()));
    o.detail += std::string(" ") + buf;
    return o;
}

Outcome reduction_checks() {
    using namespace reduction;
    Outcome o;
    std::mt19937_64 rng(kSeed + 2);
    std::uniform_real_distribution<double> field(-1.0, 1.0);
    double det = 0, comm = 0, orbit = 0, corner = 0, common = 0;
    for (const auto& d : elliptic_samples(kSeed + 2, 200)) {
        const Mat2 S = hat_matrix(d.s), T = bar_matrix(d.t, d.tprime);
        det = std::max({det, std::abs(S.determinant() - 1), std::abs(T.determinant() - 1)});
        comm = std::max(comm, commutator_residual(d.s, d.t, d.tprime));
        const Vec2 z(field(rng), field(rng));
        Vec2 h = z, b = z;
        const double Ib0 = invariant_eval(h(0), (S * h)(0), d.b);
        const double Ia0 = invariant_eval(b(0), (T * b)(0), d.a);
        for (int k = 0; k < 100; ++k) {
            h = S * h;
            b = T * b;
            orbit = std::max({orbit, std::abs(invariant_eval(h(0), (S * h)(0), d.b) - Ib0),
                              std::abs(invariant_eval(b(0), (T * b)(0), d.a) - Ia0)});
        }
        const double x = z(0), xh = (S * z)(0), xb = (T * z)(0);
        corner = std::max(corner, std::abs(momentum_a(x, xb, d) - momentum_b(x, xh, d)));
        // constant fixed at one point, then compared at another
        const double k = invariant_common(x, momentum_b(x, xh, d), d.P) / invariant_eval(x, xh, d.b);
        const Vec2 w(field(rng), field(rng));
        const double xo = w(0), xho = (S * w)(0), xbo = (T * w)(0);
        const double lhs = invariant_common(xo, momentum_b(xo, xho, d), d.P);
        common = std::max(common, std::abs(lhs - k * invariant_eval(xo, xho, d.b)) / std::max(1.0, std::abs(lhs)));
        const double ka = invariant_common(x, momentum_a(x, xb, d), d.P) / invariant_eval(x, xb, d.a);
        const double lhs_a = invariant_common(xo, momentum_a(xo, xbo, d), d.P);
        common = std::max(common, std::abs(lhs_a - ka * invariant_eval(xo, xbo, d.a)) / std::max(1.0, std::abs(lhs_a)));
    }
    o.upper("det", det, 1e-12);
    o.upper("commutator", comm, 1e-12);
    o.upper("orbit", orbit, 1e-9);
    o.upper("corner_momenta", corner, 1e-10);
    o.upper("common_invariant", common, 1e-10);
    return o;
}

Outcome oneform_closure() {
    using namespace reduction;
    Outcome o;
    std::mt19937_64 rng(kSeed + 3);
    std::uniform_real_distribution<double> field(-1.0, 1.0);
    double on = 0;
    std::vector<double> nec[4];
    double OscLagrangianCoeffs::*fields[4] = {&OscLagrangianCoeffs::alpha, &OscLagrangianCoeffs::beta,
                                              &OscLagrangianCoeffs::a0, &OscLagrangianCoeffs::b0};
    for (const auto& d : elliptic_samples(kSeed + 3, 200)) {
        const Vec2 z(field(rng), field(rng));
        on = std::max(on, oneform_closure_residual(z, d));
        const OscLagrangianCoeffs c = closure_coeffs(d);
        on = std::max(on, oneform_closure_residual(z, d, c));
        for (int f = 0; f < 4; ++f) {
            OscLagrangianCoeffs k = c;
            k.*fields[f] += 1e-2;
            nec[f].push_back(oneform_closure_residual(z, d, k));
        }
    }
    o.upper("closure", on, 1e-10);
    const char* names[4] = {"need_alpha", "need_beta", "need_a0", "need_b0"};
    for (int f = 0; f < 4; ++f) o.lower(names[f], sweep::summarize(nec[f]).median, 1e-4);
    return o;
}

Outcome period_three() {
    using namespace reduction;
    Outcome o;
    std::mt19937_64 rng(kSeed + 4);
    std::uniform_real_distribution<double> field(-1.0, 1.0);
    double comm = 0, inv = 0;
    for (const auto& p : sample_params(kSeed + 4, 200)) {
        const DerivedParams d = derive(p);
        comm = std::max(comm, p3_commutator_residual(d.s, d.t, d.tprime));
        const Vec4 z(field(rng), field(rng), field(rng), field(rng));
        const auto [I1, I2] = p3_invariants(z, d.s);
        for (const Vec4& w : {p3_hat(z, d.s), p3_bar(z, d.t, d.tprime)}) {
            const auto [J1, J2] = p3_invariants(w, d.s);
            inv = std::max({inv, std::abs(J1 - I1), std::abs(J2 - I2)});
        }
    }
    o.upper("commutator", comm, 1e-12);
    bool exact = true;
    for (double s : {0.2, -0.35, 0.8}) {
        for (const auto& row : poisson_bracket_matrix(quad_I1<double>(), quad_I2<double>(s)))
            for (double v : row) exact = exact && v == 0.0;
    }
    o.flag("bracket_exactly_zero", exact);
    o.upper("invariants", inv, 1e-9);
    const DerivedParams d = base();
    o.upper("joint_solution", p3_joint_solution_residual({0.4, -0.3, 0.2, 0.5}, d.s, d.t, d.tprime, 5), 1e-8);
    return o;
}

Outcome propagators() {
    using namespace qprop;
    Outcome o;
    const DerivedParams d = base();
    // exact up to rounding of b and P
    const double ulp = 8.5 * std::numeric_limits<double>::epsilon();
    o.upper("det_n2_ulps", std::abs(tridiagonal_det(2, d) - cplx(0.0, -8.5)) / ulp, 2.0);
    double tri = 0;
    for (int N = 2; N <= 20; ++N) {
        const cplx closed = tridiagonal_det_closed_form(N, d);
        tri = std::max(tri, std::abs(tridiagonal_det(N, d) - closed) / std::abs(closed));
    }
    o.upper("det_recursion_rel", tri, 1e-12);
    double nstep = 0;
    int skipped = 0;
    for (int N = 1; N <= 20; ++N) {
        try {
            nstep = std::max(nstep, osc::compare(n_step_kernel(N, d), n_step_closed_form(N, d)).exponent_diff);
        } catch (const CausticError&) {
            ++skipped;
        }
    }
    o.upper("n_step", nstep, 1e-9);
    o.flag("no_caustic_skips", skipped == 0);
    double fact = 0;
    for (const auto& e : elliptic_samples(kSeed + 5, 200))
        fact = std::max(fact, osc::compare(ub_factorization_kernel(e), one_step_kernel(Direction::Hat, e)).exponent_diff);
    o.upper("factorization", fact, 1e-11);
    return o;
}

Outcome path_independence() {
    using namespace qprop;
    Outcome o;
    const DerivedParams d = base();
    auto path = [](std::initializer_list<Step> s) { return TimePath{std::vector<Step>(s)}; };
    double ex = 0, amp = 0;
    auto check = [&](const TimePath& x, const TimePath& y) {
        const auto diff = osc::compare(path_kernel(x, d), path_kernel(y, d));
        ex = std::max(ex, diff.exponent_diff);
        amp = std::max(amp, std::abs(diff.amp_ratio - 1.0) + std::abs(diff.pihbar_diff));
    };
    using enum Step;
    check(path({HatForward, BarForward}), path({BarForward, HatForward}));
    check(path({BarForward, HatForward, BarBackward}), path({HatForward}));
    check(path({HatForward, BarForward, HatForward, BarBackward, HatBackward, HatForward}),
          path({HatForward, HatForward}));
    o.upper("exponent", ex, 1e-10);
    o.upper("amp_ratio", amp, 1e-10);
    double worst = 0;
    const std::pair<int, int> ends[] = {{1, 1}, {2, 1}, {1, 2}, {3, 2}};
    for (const auto& [N, M] : ends) {
        const auto v = sweep::path_sweep(d, N, M, 2, kSeed + 10 * N + M, 50, sweep::Mode::Parallel);
        worst = std::max(worst, sweep::summarize(v).max);
    }
    o.upper("random_paths", worst, 1e-9);
    return o;
}

Outcome oneform_uniqueness() {
    using namespace qprop;
    Outcome o;
    double pass = 0, sens = 1e300;
    const std::pair<double, double> grid[] = {{0.3, -0.5}, {-0.7, 0.2}, {10.0 / 11.0, 0.68}, {1.5, 2.5}};
    for (const auto& [a, b] : grid) {
        for (double f : {0.0, 0.7}) {
            const auto k = pathindep_coeffs(a, b, 1.3, f);
            pass = std::max(pass, uniqueness_scan_1form(k).mismatch);
            for (double reduction::OscLagrangianCoeffs::*m :
                 {&reduction::OscLagrangianCoeffs::alpha, &reduction::OscLagrangianCoeffs::beta,
                  &reduction::OscLagrangianCoeffs::a0, &reduction::OscLagrangianCoeffs::b0}) {
                auto q = k;
                q.*m += 1e-3;
                sens = std::min(sens, uniqueness_scan_1form(q).mismatch);
            }
        }
    }
    o.upper("corner_swap", pass, 1e-10);
    o.lower("min_perturbed_mismatch", sens, 1e-5);
    return o;
}

Outcome surface_independence() {
    using namespace surface;
    Outcome o;
    const auto k = canonical_coeffs(3, 2, 1);
    double pop = 0, moves = 0;
    for (const auto& f : all_frames()) {
        pop = std::max(pop, elementary_move_check(Move::PopUp, k, f).exponent_diff);
        for (Move m : {Move::A, Move::B, Move::C})
            moves = std::max(moves, elementary_move_check(m, k, f).exponent_diff);
    }
    o.upper("pop_up", pop, 1e-12);
    o.upper("moves_abc", moves, 1e-12);
    const auto v = sweep::deformation_sweep(k, kSeed, 20, 8, sweep::Mode::Parallel);
    o.upper("deformations", sweep::summarize(v).max, 1e-10);
    return o;
}

Outcome twoform_uniqueness() {
    using namespace surface;
    Outcome o;
    const auto k = canonical_coeffs(3, 2, 1);
    o.flag("canonical_pass", uniqueness_scan_2form(k).pass);
    bool rejected = true;
    double weakest = 1e300;
    for (const auto& g : perturbation_grid(k, 1e-2, 1e-5)) {
        rejected = rejected && g.rejected;
        if (!g.delta_failure) weakest = std::min(weakest, g.mismatch);
    }
    o.flag("grid_rejected", rejected);
    o.lower("min_mismatch", weakest, 1e-5);
    auto asym = k;
    asym.c[0][1] += 1e-2;
    o.flag("asymmetric_c_delta", uniqueness_scan_2form(asym).delta_failure);
    return o;
}

Outcome quantum_invariant() {
    using namespace qprop;
    Outcome o;
    const DerivedParams d = base();
    double worst = 0;
    for (int N = 1; N <= 10; ++N)
        for (Direction dir : {Direction::Hat, Direction::Bar})
            worst = std::max(worst, invariant_kernel_residual(N, d, dir));
    o.upper("kernel_identity", worst, 1e-12);
    return o;
}

Outcome continuous_flows() {
    using namespace reduction;
    Outcome o;
    double flow = 0;
    for (double b : {-0.8, -0.3, 0.2, 0.68, 0.9})
        for (int m = -3; m <= 6; ++m) {
            const auto f = continuous_flow_residual(b, m, 0.7, -0.4);
            const auto g = continuous_flow_residual(b, m, -0.2, 1.1);
            flow = std::max({flow, f.forward, f.backward, f.ode, g.forward, g.backward, g.ode});
        }
    o.upper("flows", flow, 1e-10);

    double fd = 0, order_lo = 1e300, order_hi = 0;
    for (double b : {-0.3, 0.2, 0.68})
        for (int m : {1, 3, 5}) {
            fd = std::max(fd, flow_fd_errors(b, m, 0.7, -0.4, 1e-5).first);
            const double e1 = flow_fd_errors(b, m, 0.7, -0.4, 2e-3).first;
            const double e2 = flow_fd_errors(b, m, 0.7, -0.4, 1e-3).first;
            order_lo = std::min(order_lo, e1 / e2);
            order_hi = std::max(order_hi, e1 / e2);
        }
    o.upper("fd_first_h1e-5", fd, 1e-8);
    o.lower("halving_ratio_min", order_lo, 3.9);
    o.upper("halving_ratio_max", order_hi, 4.1);

    double multi = 0;
    for (double a : {-0.5, 0.3, 10.0 / 11.0})
        for (double b : {-0.3, 0.68})
            for (int m : {1, 2, -3})
                for (int n : {1, 4}) {
                    const auto [r1, r2] = continuous_multiform_residual(a, b, m, n, 0.7, -0.4);
                    multi = std::max({multi, r1, r2});
                }
    o.upper("multiform", multi, 1e-8);
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"parameter identities", parameter_identities},
        {"cube consistency and two-form closure", cube_consistency},
        {"reduced maps and invariants", reduction_checks},
        {"one-form closure", oneform_closure},
        {"period-three reduction", period_three},
        {"propagators", propagators},
        {"time-path independence", path_independence},
        {"one-form uniqueness", oneform_uniqueness},
        {"surface independence", surface_independence},
        {"two-form uniqueness", twoform_uniqueness},
        {"operator invariant", quantum_invariant},
        {"continuous flows", continuous_flows},
    };
    int failed = 0, index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("error: ") + e.what();
        }
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        if (!o.pass) ++failed;
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
