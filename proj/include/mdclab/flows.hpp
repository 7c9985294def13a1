#pragma once

#include <utility>

namespace mdc::reduction {

// x_m(b) = c1 sin(m mu(b)) + c2 cos(m mu(b)), mu(b) = arccos(-b).
double flow_solution(double b, int m, double c1, double c2);
double flow_first_derivative(double b, int m, double c1, double c2);
double flow_second_derivative(double b, int m, double c1, double c2);

struct FlowResiduals {
    double forward = 0;   // dx/db - m (b x + x_{m+1}) / (1 - b^2)
    double backward = 0;  // dx/db + m (b x + x_{m-1}) / (1 - b^2)
    double ode = 0;       // (1 - b^2) x'' - b x' + m^2 x
};

// The same relations hold for the bar parameter a with n in place of m.
FlowResiduals continuous_flow_residual(double b, int m, double c1, double c2);

struct FiniteDifferenceErrors {
    double first = 0;
    double second = 0;
};

FiniteDifferenceErrors flow_fd_errors(double b, int m, double c1, double c2, double h);

// Joint solution x = c1 sin(theta) + c2 cos(theta), theta = m mu(b) + n nu(a).
std::pair<double, double> continuous_multiform_residual(double a, double b, int m, int n,
                                                        double c1, double c2);

// Same relations with every a- and b-derivative taken by central differences.
std::pair<double, double> continuous_multiform_fd_residual(double a, double b, int m, int n,
                                                           double c1, double c2, double h);

}  // namespace mdc::reduction
