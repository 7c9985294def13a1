#include "mdclab/qprop1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mdclab/errors.hpp"

namespace mdc::qprop {

namespace {

cplx step_amplitude(double cross) {
    const double phase = (cross > 0 ? 1.0 : -1.0) * std::numbers::pi / 4.0;
    return std::polar(std::sqrt(std::abs(cross)), phase);
}

StepLagrangian closed_step(double P, double K, double k) {
    StepLagrangian L;
    L.from = 0.5 * (P - K) / k;
    L.to = L.from;
    L.cross = (P + K) / k;
    L.amp = step_amplitude(L.cross);
    return L;
}

StepLagrangian general_step(double coef, double shift, double total) {
    StepLagrangian L;
    L.from = coef * (total - shift);
    L.to = coef * shift;
    L.cross = coef;
    L.amp = step_amplitude(L.cross);
    return L;
}

void require_nonzero_steps(const DerivedParams& d) {
    if (d.q == 0.0 || d.r == 0.0) throw DegenerateParams("q and r must be nonzero");
}

std::string visit(std::size_t k) { return "v" + std::to_string(k); }

OscKernel two_point_kernel(const OscKernel& K) {
    if (K.size() != 2 || !K.has(kStart) || !K.has(kEnd))
        throw VariableMismatch("expected a two-point kernel");
    return K;
}

double sin_mu_of(const OscKernel& one_step) {
    const int i = one_step.index_of(kStart);
    const int j = one_step.index_of(kEnd);
    const double b1 = one_step.A(i, i) / one_step.A(i, j);
    return std::sqrt(std::max(0.0, 1.0 - b1 * b1));
}

}  // namespace

std::pair<int, int> TimePath::endpoint() const {
    int n = 0, m = 0;
    for (Step s : steps) {
        switch (s) {
            case Step::HatForward: ++n; break;
            case Step::HatBackward: --n; break;
            case Step::BarForward: ++m; break;
            case Step::BarBackward: --m; break;
        }
    }
    return {n, m};
}

OneFormModel closed_form_model(const DerivedParams& d) {
    require_nonzero_steps(d);
    return {closed_step(d.P, d.Q, d.q), closed_step(d.P, d.R, d.r)};
}

OneFormModel general_model(const OscLagrangianCoeffs& c) {
    if (c.alpha == 0.0 || c.beta == 0.0) throw DegenerateCoeffs("vanishing cross coupling");
    return {general_step(c.beta, c.b0, c.b), general_step(c.alpha, c.a0, c.a)};
}

OscKernel path_kernel(const TimePath& path, const OneFormModel& model, double tol) {
    if (path.steps.empty()) throw DegenerateParams("empty time path");
    OscKernel K;
    const std::size_t n = path.steps.size();
    for (std::size_t k = 0; k <= n; ++k) K.ensure(visit(k));
    for (std::size_t k = 0; k < n; ++k) {
        const Step s = path.steps[k];
        const bool hat = s == Step::HatForward || s == Step::HatBackward;
        const bool forward = s == Step::HatForward || s == Step::BarForward;
        const StepLagrangian& L = hat ? model.hat : model.bar;
        // earlier-time value first
        const std::string early = forward ? visit(k) : visit(k + 1);
        const std::string late = forward ? visit(k + 1) : visit(k);
        const double sign = forward ? 1.0 : -1.0;
        K.add_quadratic(early, early, sign * L.from);
        K.add_quadratic(late, late, sign * L.to);
        K.add_quadratic(early, late, sign * L.cross);
        K.amp *= forward ? L.amp : std::conj(L.amp);
        K.pihbar_pow -= 0.5;
    }
    std::vector<std::string> interior;
    for (std::size_t k = 1; k < n; ++k) interior.push_back(visit(k));
    K = osc::marginalize_all(K, interior, tol);
    return osc::rename(K, {{visit(0), kStart}, {visit(n), kEnd}});
}

OscKernel path_kernel(const TimePath& path, const DerivedParams& d) {
    return path_kernel(path, closed_form_model(d));
}

OscKernel one_step_kernel(Direction dir, const DerivedParams& d) {
    if (d.hyperbolic) throw OutOfRegime("one-step kernel needs the elliptic regime");
    TimePath path;
    path.steps = {dir == Direction::Hat ? Step::HatForward : Step::BarForward};
    return path_kernel(path, d);
}

OscKernel ub_factorization_kernel(const DerivedParams& d) {
    if (d.hyperbolic) throw OutOfRegime("factorization needs the elliptic regime");
    require_nonzero_steps(d);
    // plane waves <x_end|X><X|x_start> with the kinetic phase X^2 q / (2(P+Q))
    OscKernel K({kStart, "X", kEnd});
    K.add_quadratic("X", "X", 0.5 * d.q / (d.P + d.Q));
    K.add_quadratic(kStart, "X", -1.0);
    K.add_quadratic(kEnd, "X", 1.0);
    // half potential on each side
    K.add_quadratic(kStart, kStart, d.P / d.q);
    K.add_quadratic(kEnd, kEnd, d.P / d.q);
    K.pihbar_pow = -1.0;
    return osc::marginalize(K, "X");
}

OscKernel zero_potential_kernel(const DerivedParams& d) {
    if (d.hyperbolic) throw OutOfRegime("factorization needs the elliptic regime");
    require_nonzero_steps(d);
    OscKernel K({kStart, "X", kEnd});
    K.add_quadratic("X", "X", 0.5 * d.q / (d.P + d.Q));
    K.add_quadratic(kStart, "X", -1.0);
    K.add_quadratic(kEnd, "X", 1.0);
    K.pihbar_pow = -1.0;
    return osc::marginalize(K, "X");
}

OscKernel free_kernel(const DerivedParams& d) {
    require_nonzero_steps(d);
    const double k = (d.P + d.Q) / d.q;
    OscKernel K({kStart, kEnd});
    K.add_quadratic(kStart, kStart, -0.5 * k);
    K.add_quadratic(kEnd, kEnd, -0.5 * k);
    K.add_quadratic(kStart, kEnd, k);
    K.amp = step_amplitude(k);
    K.pihbar_pow = -0.5;
    return K;
}

OscKernel n_step_kernel(int N, const DerivedParams& d, Direction dir) {
    if (N < 1) throw DegenerateParams("N must be positive");
    const OscKernel one = one_step_kernel(dir, d);
    if (N == 1) return one;
    TimePath path;
    path.steps.assign(N, dir == Direction::Hat ? Step::HatForward : Step::BarForward);
    OscKernel K;
    try {
        K = path_kernel(path, d);
    } catch (const NearCaustic& e) {
        throw CausticError(std::string("iterated kernel: ") + e.what());
    }
    if (!K.constraints.empty() || K.size() != 2)
        throw CausticError("iterated kernel degenerates to a delta function");
    const int i = one.index_of(kStart), j = one.index_of(kEnd);
    const double cross = std::abs(one.A(i, j));
    const double det = std::pow(std::pow(std::abs(one.amp), N) / std::abs(K.amp), 2);
    const double sin_eff = det * sin_mu_of(one) / std::pow(cross, N - 1);
    if (sin_eff < 1e-6) throw CausticError("iterated kernel at a caustic");
    return two_point_kernel(K);
}

OscKernel multi_time_closed_form(int N, int M, const DerivedParams& d) {
    if (d.hyperbolic) throw OutOfRegime("closed form needs the elliptic regime");
    if (!(d.q > 0 && d.r > 0)) throw OutOfRegime("closed form needs q, r > 0");
    const double theta = d.mu * N + d.nu * M;
    const double sn = std::sin(theta);
    if (std::abs(sn) < 1e-6) throw CausticError("closed form at a caustic");
    const double root = std::sqrt(d.P);
    OscKernel K({kStart, kEnd});
    K.A(0, 0) = K.A(1, 1) = -2.0 * root * std::cos(theta) / sn;
    K.A(0, 1) = K.A(1, 0) = 2.0 * root / sn;
    K.amp = std::sqrt(cplx(0.0, 2.0 * root / sn));
    K.pihbar_pow = -0.5;
    return K;
}

OscKernel n_step_closed_form(int N, const DerivedParams& d) {
    if (N < 1) throw DegenerateParams("N must be positive");
    return multi_time_closed_form(N, 0, d);
}

cplx tridiagonal_det(int N, const DerivedParams& d) {
    if (N < 2) throw DegenerateParams("tridiagonal determinant needs N >= 2");
    const cplx k(0.0, (d.P + d.Q) / (d.hbar * d.q));
    const cplx diag = -d.b * k;
    const cplx off = -0.5 * k;
    cplx prev(1.0, 0.0), cur = diag;
    for (int n = 2; n <= N - 1; ++n) {
        const cplx next = diag * cur - off * off * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx tridiagonal_det_closed_form(int N, const DerivedParams& d) {
    if (N < 2) throw DegenerateParams("tridiagonal determinant needs N >= 2");
    if (d.hyperbolic) throw OutOfRegime("closed form needs a real angle");
    const cplx k(0.0, (d.P + d.Q) / (2.0 * d.hbar * d.q));
    return std::pow(k, N - 1) * (std::sin(d.mu * N) / std::sin(d.mu));
}

cplx tridiagonal_det_explicit(int N, const DerivedParams& d) {
    if (N < 2) throw DegenerateParams("tridiagonal determinant needs N >= 2");
    const cplx k(0.0, (d.P + d.Q) / (d.hbar * d.q));
    const cplx diag = -d.b * k;
    const cplx off = -0.5 * k;
    // roots of l^2 - diag l + off^2 = 0
    const cplx disc = std::sqrt(diag * diag - 4.0 * off * off);
    const cplx lp = 0.5 * (diag + disc), lm = 0.5 * (diag - disc);
    if (std::abs(lp - lm) < 1e-14 * std::abs(diag))
        return cplx(N, 0.0) * std::pow(0.5 * diag, N - 1);
    return (std::pow(lp, N) - std::pow(lm, N)) / (lp - lm);
}

OscLagrangianCoeffs pathindep_coeffs(double a, double b, double gamma, double f) {
    const double ea = a * a - 1.0, eb = b * b - 1.0;
    if (ea == 0.0 || eb == 0.0) throw DegenerateCoeffs("a^2 = 1 or b^2 = 1");
    if ((ea > 0) != (eb > 0)) throw OutOfRegime("a and b lie in different regimes");
    OscLagrangianCoeffs c;
    c.a = a;
    c.b = b;
    c.alpha = gamma / std::sqrt(std::abs(ea));
    c.beta = gamma / std::sqrt(std::abs(eb));
    c.a0 = 0.5 * a + f / (2.0 * c.alpha);
    c.b0 = 0.5 * b + f / (2.0 * c.beta);
    return c;
}

UniquenessResult uniqueness_scan_1form(const OscLagrangianCoeffs& c, double tol) {
    const OneFormModel model = general_model(c);
    auto corner = [&](Step first, Step second) {
        TimePath path;
        path.steps = {first, second};
        OscKernel K;
        try {
            K = path_kernel(path, model);
        } catch (const NearCaustic&) {
            throw DegenerateCoeffs("corner pivot in the near-degenerate band");
        }
        if (!K.constraints.empty() || K.vol_pow != 0)
            throw DegenerateCoeffs("corner integral is not Gaussian");
        return K;
    };
    const OscKernel lower = corner(Step::HatForward, Step::BarForward);
    const OscKernel upper = corner(Step::BarForward, Step::HatForward);
    UniquenessResult out;
    out.mismatch = osc::compare(lower, upper).exponent_diff;
    out.pass = out.mismatch <= tol;
    return out;
}

double invariant_identity_residual(double ax, double ay, double g, double P, double hbar) {
    const double scale = std::max({g * g, ax * ax, ay * ay, 4.0 * std::abs(P)});
    if (scale == 0.0) return 0.0;
    const double root = std::sqrt(scale);
    const double constant = hbar * std::abs(ax - ay) / (hbar * root);
    const double sq_first = std::abs(ax * ax + 4.0 * P - g * g) / scale;
    const double mixed = 2.0 * std::abs(g) * std::abs(ax - ay) / scale;
    const double sq_second = std::abs(g * g - ay * ay - 4.0 * P) / scale;
    return std::max({constant, sq_first, mixed, sq_second});
}

namespace {

double kernel_identity(const OscKernel& K, const DerivedParams& d) {
    const int i = K.index_of(kStart), j = K.index_of(kEnd);
    return invariant_identity_residual(K.A(i, i), K.A(j, j), K.A(i, j), d.P, d.hbar);
}

}  // namespace

double invariant_kernel_residual(int N, const DerivedParams& d, Direction dir) {
    if (d.hyperbolic) throw OutOfRegime("invariant identity needs the elliptic regime");
    return kernel_identity(n_step_kernel(N, d, dir), d);
}

double invariant_closed_form_residual(int N, const DerivedParams& d) {
    return kernel_identity(n_step_closed_form(N, d), d);
}

TimePath random_path(std::uint64_t seed, int N, int M, int detours) {
    if (N < 0 || M < 0 || detours < 0) throw DegenerateParams("negative path counts");
    std::mt19937_64 rng(seed);
    TimePath path;
    path.steps.assign(N, Step::HatForward);
    path.steps.insert(path.steps.end(), M, Step::BarForward);
    std::shuffle(path.steps.begin(), path.steps.end(), rng);
    static const std::vector<std::vector<Step>> inserts = {
        {Step::HatForward, Step::HatBackward},
        {Step::HatBackward, Step::HatForward},
        {Step::BarForward, Step::BarBackward},
        {Step::BarBackward, Step::BarForward},
        {Step::HatForward, Step::BarForward, Step::HatBackward, Step::BarBackward},
        {Step::BarForward, Step::HatForward, Step::BarBackward, Step::HatBackward},
    };
    for (int k = 0; k < detours; ++k) {
        const auto& piece = inserts[std::uniform_int_distribution<std::size_t>(0, inserts.size() - 1)(rng)];
        const auto at = std::uniform_int_distribution<std::size_t>(0, path.steps.size())(rng);
        path.steps.insert(path.steps.begin() + static_cast<std::ptrdiff_t>(at), piece.begin(),
                          piece.end());
    }
    return path;
}

}  // namespace mdc::qprop
