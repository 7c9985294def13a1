#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mdclab/oscgauss.hpp"
#include "mdclab/params.hpp"
#include "mdclab/reduction.hpp"

namespace mdc::qprop {

using osc::cplx;
using osc::OscKernel;
using reduction::OscLagrangianCoeffs;

enum class Direction { Hat, Bar };

enum class Step { HatForward, HatBackward, BarForward, BarBackward };

struct TimePath {
    std::vector<Step> steps;
    // Net (hat, bar) displacement.
    std::pair<int, int> endpoint() const;
};

// Endpoint labels of every one-dimensional kernel built here.
inline const std::string kStart = "x_start";
inline const std::string kEnd = "x_end";

// L(x, y) = from x^2 + to y^2 + cross x y for one forward step; amp is the
// forward-step amplitude paired with (2 pi hbar)^(-1/2).
struct StepLagrangian {
    double from = 0, to = 0, cross = 0;
    cplx amp{1.0, 0.0};
};

struct OneFormModel {
    StepLagrangian hat;
    StepLagrangian bar;
};

OneFormModel closed_form_model(const DerivedParams& d);
OneFormModel general_model(const OscLagrangianCoeffs& c);

OscKernel one_step_kernel(Direction dir, const DerivedParams& d);

// <x_end| e^{iV/2h} e^{iT/h} e^{iV/2h} |x_start> assembled from plane waves.
OscKernel ub_factorization_kernel(const DerivedParams& d);
// Same construction with the potential factors removed.
OscKernel zero_potential_kernel(const DerivedParams& d);
// Free kernel expected from the potential-free construction.
OscKernel free_kernel(const DerivedParams& d);

OscKernel n_step_kernel(int N, const DerivedParams& d, Direction dir = Direction::Hat);
OscKernel n_step_closed_form(int N, const DerivedParams& d);
OscKernel multi_time_closed_form(int N, int M, const DerivedParams& d);

// det of the (N-1)x(N-1) tridiagonal matrix of the discrete path integral.
cplx tridiagonal_det(int N, const DerivedParams& d);
cplx tridiagonal_det_closed_form(int N, const DerivedParams& d);
cplx tridiagonal_det_explicit(int N, const DerivedParams& d);

OscKernel path_kernel(const TimePath& path, const OneFormModel& model,
                      double tol = osc::kDefaultTol);
OscKernel path_kernel(const TimePath& path, const DerivedParams& d);

struct UniquenessResult {
    bool pass = false;
    double mismatch = 0;
};

UniquenessResult uniqueness_scan_1form(const OscLagrangianCoeffs& c, double tol = 1e-10);

// alpha = gamma / sqrt|a^2 - 1|, beta = gamma / sqrt|b^2 - 1|, a0 = a/2 + f/(2 alpha), ...
OscLagrangianCoeffs pathindep_coeffs(double a, double b, double gamma = 1.0, double f = 0.0);

// Max relative coefficient residual of
// (-h^2 d_x^2 + 4P x^2) K = (-h^2 d_y^2 + 4P y^2) K for K = exp(i/h (ax x^2/2 + ay y^2/2 + g x y)).
double invariant_identity_residual(double ax, double ay, double g, double P, double hbar);

double invariant_kernel_residual(int N, const DerivedParams& d, Direction dir = Direction::Hat);
double invariant_closed_form_residual(int N, const DerivedParams& d);

TimePath random_path(std::uint64_t seed, int N, int M, int detours);

}  // namespace mdc::qprop
