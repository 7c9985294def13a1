#include "mdclab/params.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mdclab/errors.hpp"
#include "mdclab/reduction.hpp"

namespace mdc {

namespace {

constexpr double kZero = 1e-14;

bool vanishes(double x, double scale) { return std::abs(x) <= kZero * std::max(1.0, scale); }

}  // namespace

double edge_coeff(double pi, double pj) {
    if (vanishes(pi - pj, std::abs(pi) + std::abs(pj)))
        throw DegenerateParams("edge coefficient needs distinct parameters");
    return (pi + pj) / (pi - pj);
}

EdgeParams edge_params(double p1, double p2, double p3) {
    const double p[3] = {p1, p2, p3};
    EdgeParams e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            e.s[i][j] = i == j ? 0.0 : edge_coeff(p[i], p[j]);
    const double s12 = e.s[0][1], s23 = e.s[1][2], s31 = e.s[2][0];
    e.lambda = s12 * s23 + s23 * s31 + s31 * s12 + 1.0;
    return e;
}

DerivedParams derive(const LatticeParams& in) {
    const double p = in.p, q = in.q, r = in.r;
    const double scale = std::abs(p) + std::abs(q) + std::abs(r);
    if (vanishes(p + q, scale) || vanishes(p + r, scale) || vanishes(q + r, scale))
        throw DegenerateParams("vanishing parameter sum");
    if (vanishes(q, scale) || vanishes(r, scale))
        throw DegenerateParams("q and r must be nonzero");
    if (!(in.hbar > 0)) throw DegenerateParams("hbar must be positive");

    DerivedParams d;
    d.p = p;
    d.q = q;
    d.r = r;
    d.hbar = in.hbar;
    d.s = (p - q) / (p + q);
    d.t = (p - r) / (p + r);
    d.tprime = (q - r) / (q + r);

    const reduction::Mat2 S = reduction::hat_matrix(d.s);
    const reduction::Mat2 T = reduction::bar_matrix(d.t, d.tprime);
    d.b = -0.5 * S.trace();
    d.a = -0.5 * T.trace();
    if (vanishes(1.0 - d.b, 1.0) || vanishes(1.0 + d.a, 1.0))
        throw DegenerateParams("oscillator coefficient at a pole of P or R");

    d.Q = q * q;
    d.P = d.Q * (1.0 + d.b) / (1.0 - d.b);
    d.R = d.P * (1.0 - d.a) / (1.0 + d.a);
    d.hyperbolic = std::abs(d.b) >= 1.0 || std::abs(d.a) >= 1.0;
    if (!d.hyperbolic) {
        d.mu = std::acos(-d.b);
        d.nu = std::acos(-d.a);
    }
    return d;
}

double check_stt_identity(const LatticeParams& params) {
    const DerivedParams d = derive(params);
    return std::abs(d.s * d.t * d.tprime - d.s + d.t - d.tprime);
}

double check_sij_identity(double p1, double p2, double p3) {
    return std::abs(edge_params(p1, p2, p3).lambda);
}

double unhalved_b_residual(const DerivedParams& d) {
    return std::abs(1.0 + 2.0 * d.s - d.s * d.s - d.b);
}

double short_P_residual(const DerivedParams& d) {
    return std::abs(d.p * d.p + d.p * d.q - d.P);
}

double sin_mu_from_P(const DerivedParams& d) {
    return 2.0 * std::abs(d.q) * std::sqrt(d.P) / (d.P + d.Q);
}

bool admissible(const LatticeParams& x, double min_gap) {
    const double v[3] = {x.p, x.q, x.r};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(v[i] - v[j]) < min_gap || std::abs(v[i] + v[j]) < min_gap) return false;
    return true;
}

std::vector<LatticeParams> sample_params(std::uint64_t seed, std::size_t count,
                                         const SampleRange& range, double hbar) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(range.lo, range.hi);
    std::vector<LatticeParams> out;
    out.reserve(count);
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > 1000 * (count + 10)) throw ConfigError("sampling range too narrow");
        LatticeParams x{dist(rng), dist(rng), dist(rng), hbar};
        if (admissible(x, range.min_gap)) out.push_back(x);
    }
    return out;
}

}  // namespace mdc
