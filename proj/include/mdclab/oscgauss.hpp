#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace mdc::osc {

using cplx = std::complex<double>;

// Affine relation sum_k coeffs[k] u_k + offset = 0 left behind by an integral that
// produced a delta function. `eliminated` no longer appears in the exponent.
struct Constraint {
    std::string eliminated;
    std::map<std::string, double> coeffs;
    double offset = 0;
};

// amp (2 pi hbar)^pihbar_pow V^vol_pow exp[(i/hbar)(v^T A v / 2 + B^T v + c)] times the
// delta functions of the constraints. Exponent coefficients are in action units.
class OscKernel {
public:
    std::vector<std::string> vars;
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    double c = 0;
    cplx amp{1.0, 0.0};
    double pihbar_pow = 0;
    int vol_pow = 0;
    std::vector<Constraint> constraints;

    OscKernel() = default;
    explicit OscKernel(const std::vector<std::string>& labels);

    int index_of(const std::string& label) const;
    bool has(const std::string& label) const { return index_of(label) >= 0; }
    int ensure(const std::string& label);

    // Adds coef * u_i * u_j (coef * u_i^2 when i == j) to the exponent.
    void add_quadratic(const std::string& i, const std::string& j, double coef);
    void add_linear(const std::string& i, double coef);

    double exponent(const std::map<std::string, double>& values) const;
    cplx evaluate(const std::map<std::string, double>& values, double hbar) const;

    std::size_t size() const { return vars.size(); }
};

struct KernelDiff {
    double exponent_diff = 0;
    cplx amp_ratio{1.0, 0.0};
    double pihbar_diff = 0;
    int vol_diff = 0;
    bool constraints_match = true;

    bool equal_modulo_volume(double tol) const {
        return constraints_match && exponent_diff <= tol;
    }
};

constexpr double kDefaultTol = 1e-9;

OscKernel marginalize(const OscKernel& K, const std::string& v, double tol = kDefaultTol);

// Integrates the listed variables in order. Delta functions produced on the way are
// resolved against variables still waiting in the list whenever possible.
OscKernel marginalize_all(const OscKernel& K, const std::vector<std::string>& order,
                          double tol = kDefaultTol);

OscKernel product(const OscKernel& K1, const OscKernel& K2);

OscKernel glue(const OscKernel& K1, const OscKernel& K2, const std::vector<std::string>& shared,
               double tol = kDefaultTol);

OscKernel rename(const OscKernel& K, const std::map<std::string, std::string>& names);

// Replaces u_r by sum_k h_k u_k + h0 everywhere (exponent and constraints).
OscKernel substitute(const OscKernel& K, const std::string& r,
                     const std::map<std::string, double>& h, double h0);

KernelDiff compare(const OscKernel& K1, const OscKernel& K2);

nlohmann::json to_json(const OscKernel& K);
OscKernel from_json(const nlohmann::json& j);
std::string canonical_text(const OscKernel& K);

}  // namespace mdc::osc
