#include "mdclab/flows.hpp"

#include <cmath>

#include "mdclab/errors.hpp"

namespace mdc::reduction {

namespace {

void require_elliptic(double b) {
    if (!(std::abs(b) < 1.0)) throw OutOfRegime("continuous flow needs |b| < 1");
}

double joint(double a, double b, int m, int n, double c1, double c2) {
    const double th = m * std::acos(-b) + n * std::acos(-a);
    return c1 * std::sin(th) + c2 * std::cos(th);
}

}  // namespace

double flow_solution(double b, int m, double c1, double c2) {
    require_elliptic(b);
    const double th = m * std::acos(-b);
    return c1 * std::sin(th) + c2 * std::cos(th);
}

double flow_first_derivative(double b, int m, double c1, double c2) {
    require_elliptic(b);
    const double th = m * std::acos(-b);
    const double C = c1 * std::cos(th) - c2 * std::sin(th);
    return m * C / std::sqrt(1.0 - b * b);
}

double flow_second_derivative(double b, int m, double c1, double c2) {
    require_elliptic(b);
    const double th = m * std::acos(-b);
    const double x = c1 * std::sin(th) + c2 * std::cos(th);
    const double C = c1 * std::cos(th) - c2 * std::sin(th);
    const double w = 1.0 - b * b;
    return -m * m * x / w + m * b * C / (w * std::sqrt(w));
}

FlowResiduals continuous_flow_residual(double b, int m, double c1, double c2) {
    require_elliptic(b);
    const double x = flow_solution(b, m, c1, c2);
    const double xf = flow_solution(b, m + 1, c1, c2);
    const double xr = flow_solution(b, m - 1, c1, c2);
    const double d1 = flow_first_derivative(b, m, c1, c2);
    const double d2 = flow_second_derivative(b, m, c1, c2);
    const double w = 1.0 - b * b;
    FlowResiduals r;
    r.forward = std::abs(d1 - m * (b * x + xf) / w);
    r.backward = std::abs(d1 + m * (b * x + xr) / w);
    r.ode = std::abs(w * d2 - b * d1 + m * m * x);
    return r;
}

FiniteDifferenceErrors flow_fd_errors(double b, int m, double c1, double c2, double h) {
    require_elliptic(b + h);
    require_elliptic(b - h);
    const double xp = flow_solution(b + h, m, c1, c2);
    const double x0 = flow_solution(b, m, c1, c2);
    const double xm = flow_solution(b - h, m, c1, c2);
    FiniteDifferenceErrors e;
    e.first = std::abs((xp - xm) / (2 * h) - flow_first_derivative(b, m, c1, c2));
    e.second = std::abs((xp - 2 * x0 + xm) / (h * h) - flow_second_derivative(b, m, c1, c2));
    return e;
}

std::pair<double, double> continuous_multiform_residual(double a, double b, int m, int n,
                                                        double c1, double c2) {
    require_elliptic(a);
    require_elliptic(b);
    if (m == 0 || n == 0) throw DegenerateParams("continuous Lagrangians need m, n nonzero");
    const double th = m * std::acos(-b) + n * std::acos(-a);
    const double C = c1 * std::cos(th) - c2 * std::sin(th);
    const double wa = std::sqrt(1.0 - a * a), wb = std::sqrt(1.0 - b * b);
    const double xa = n * C / wa;
    const double xb = m * C / wb;
    const double pa = wa * xa / n;  // dL_a/dx_a
    const double pb = wb * xb / m;  // dL_b/dx_b
    const double cross_ab = -m * xa / wb;  // d/da of dL_b/dx
    const double cross_ba = -n * xb / wa;  // d/db of dL_a/dx
    return {std::abs(pa - pb), std::abs(cross_ab - cross_ba)};
}

std::pair<double, double> continuous_multiform_fd_residual(double a, double b, int m, int n,
                                                           double c1, double c2, double h) {
    require_elliptic(a);
    require_elliptic(b);
    if (m == 0 || n == 0) throw DegenerateParams("continuous Lagrangians need m, n nonzero");
    const double wa = std::sqrt(1.0 - a * a), wb = std::sqrt(1.0 - b * b);
    const double xa = (joint(a + h, b, m, n, c1, c2) - joint(a - h, b, m, n, c1, c2)) / (2 * h);
    const double xb = (joint(a, b + h, m, n, c1, c2) - joint(a, b - h, m, n, c1, c2)) / (2 * h);
    const double pa = wa * xa / n;
    const double pb = wb * xb / m;
    // dL_b/dx = -m x / sqrt(1 - b^2) differentiated in a along the solution, and vice versa.
    auto dLb_dx = [&](double aa) { return -m * joint(aa, b, m, n, c1, c2) / wb; };
    auto dLa_dx = [&](double bb) { return -n * joint(a, bb, m, n, c1, c2) / wa; };
    const double cross_ab = (dLb_dx(a + h) - dLb_dx(a - h)) / (2 * h);
    const double cross_ba = (dLa_dx(b + h) - dLa_dx(b - h)) / (2 * h);
    return {std::abs(pa - pb), std::abs(cross_ab - cross_ba)};
}

}  // namespace mdc::reduction
