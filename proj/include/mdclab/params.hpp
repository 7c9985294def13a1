#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mdc {

struct LatticeParams {
    double p = 3.0;
    double q = 2.0;
    double r = 1.0;
    double hbar = 1.0;
};

// Reduction coefficients and the oscillator data built from them.
// b and a come from the traces of the reduced map matrices.
struct DerivedParams {
    double p = 0, q = 0, r = 0;
    double hbar = 1.0;
    double s = 0, t = 0, tprime = 0;
    double b = 0, a = 0;
    double P = 0, Q = 0, R = 0;
    double mu = 0, nu = 0;
    bool hyperbolic = false;
};

// Edge coefficients s_ij = (p_i + p_j)/(p_i - p_j) for three directions.
struct EdgeParams {
    std::array<std::array<double, 3>, 3> s{};
    double lambda = 0;
};

DerivedParams derive(const LatticeParams& params);

double edge_coeff(double pi, double pj);
EdgeParams edge_params(double p1, double p2, double p3);

double check_stt_identity(const LatticeParams& params);
double check_sij_identity(double p1, double p2, double p3);

// Residuals of the alternative closed forms b = 1 + 2s - s^2 and P = p^2 + pq
// against the trace-derived values.
double unhalved_b_residual(const DerivedParams& d);
double short_P_residual(const DerivedParams& d);

// sin(mu) written through P and q; equals sqrt(1 - b^2) when Q = q^2.
double sin_mu_from_P(const DerivedParams& d);

struct SampleRange {
    double lo = 0.5;
    double hi = 3.0;
    double min_gap = 0.1;
};

// Rejection sampling of admissible (p, q, r) triples.
std::vector<LatticeParams> sample_params(std::uint64_t seed, std::size_t count,
                                         const SampleRange& range = {}, double hbar = 1.0);

bool admissible(const LatticeParams& params, double min_gap);

}  // namespace mdc
