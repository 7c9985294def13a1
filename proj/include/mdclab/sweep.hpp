#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mdclab/params.hpp"
#include "mdclab/qsurface.hpp"

namespace mdc::sweep {

enum class Mode { Serial, Parallel };

using Trial = std::function<double(std::size_t)>;

// Evaluates trial(0..n-1). Results keep trial order in both modes; the first exception
// raised by any trial is rethrown after the loop.
std::vector<double> run(std::size_t n, const Trial& trial, Mode mode);

struct Stats {
    double max = 0;
    double median = 0;
    std::size_t count = 0;
};

Stats summarize(const std::vector<double>& values);

// max(|stt - (s - t + t')|, |s12 s23 + s23 s31 + s31 s12 + 1|) per sample
std::vector<double> parameter_identity_sweep(const std::vector<LatticeParams>& samples, Mode mode);

// Corner spread of randomly seeded cubes at random parameters.
std::vector<double> cube_consistency_sweep(std::uint64_t seed, std::size_t count, Mode mode);

// exponent difference between the factorized and direct one-step kernels
std::vector<double> factorization_sweep(const std::vector<LatticeParams>& samples, Mode mode);

// exponent difference between random paths and the multi-time closed form
std::vector<double> path_sweep(const DerivedParams& d, int N, int M, int detours,
                               std::uint64_t seed, std::size_t count, Mode mode);

// exponent difference between deformed and flat 3x3 patch kernels
std::vector<double> deformation_sweep(const surface::LatticeLagrangianCoeffs& k,
                                      std::uint64_t seed, std::size_t count, int steps,
                                      Mode mode);

}  // namespace mdc::sweep
