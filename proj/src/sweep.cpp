#include "mdclab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "mdclab/lattice2form.hpp"
#include "mdclab/qprop1d.hpp"

namespace mdc::sweep {

std::vector<double> run(std::size_t n, const Trial& trial, Mode mode) {
    std::vector<double> out(n, 0.0);
    if (mode == Mode::Serial) {
        for (std::size_t i = 0; i < n; ++i) out[i] = trial(i);
        return out;
    }
    std::exception_ptr first;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            out[i] = trial(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(mdclab_sweep_error)
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
    return out;
}

Stats summarize(const std::vector<double>& values) {
    Stats s;
    s.count = values.size();
    if (values.empty()) return s;
    s.max = *std::max_element(values.begin(), values.end());
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return s;
}

std::vector<double> parameter_identity_sweep(const std::vector<LatticeParams>& samples,
                                             Mode mode) {
    return run(samples.size(), [&](std::size_t i) {
        const auto& p = samples[i];
        return std::max(check_stt_identity(p), check_sij_identity(p.p, p.q, p.r));
    }, mode);
}

std::vector<double> cube_consistency_sweep(std::uint64_t seed, std::size_t count, Mode mode) {
    const auto params = sample_params(seed, count);
    return run(count, [&](std::size_t i) {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
        std::uniform_real_distribution<double> field(-2.0, 2.0);
        const double u = field(rng), u1 = field(rng), u2 = field(rng), u3 = field(rng);
        const auto& p = params[i];
        return lattice::cube_routes(u, u1, u2, u3, p.p, p.q, p.r).spread();
    }, mode);
}

std::vector<double> factorization_sweep(const std::vector<LatticeParams>& samples, Mode mode) {
    return run(samples.size(), [&](std::size_t i) {
        const DerivedParams d = derive(samples[i]);
        if (d.hyperbolic) return 0.0;
        return osc::compare(qprop::ub_factorization_kernel(d),
                            qprop::one_step_kernel(qprop::Direction::Hat, d))
            .exponent_diff;
    }, mode);
}

std::vector<double> path_sweep(const DerivedParams& d, int N, int M, int detours,
                               std::uint64_t seed, std::size_t count, Mode mode) {
    const osc::OscKernel closed = qprop::multi_time_closed_form(N, M, d);
    return run(count, [&](std::size_t i) {
        const auto path = qprop::random_path(seed + i, N, M, detours);
        return osc::compare(qprop::path_kernel(path, d), closed).exponent_diff;
    }, mode);
}

std::vector<double> deformation_sweep(const surface::LatticeLagrangianCoeffs& k,
                                      std::uint64_t seed, std::size_t count, int steps,
                                      Mode mode) {
    const surface::Surface flat = surface::flat_patch(3, 3);
    const osc::OscKernel reference = surface::surface_kernel(flat, k);
    return run(count, [&](std::size_t i) {
        const auto deformed = surface::random_deformation(flat, seed + i, steps);
        return osc::compare(surface::surface_kernel(deformed, k), reference).exponent_diff;
    }, mode);
}

}  // namespace mdc::sweep
