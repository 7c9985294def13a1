#include <gtest/gtest.h>

#include <cmath>

#include "mdclab/errors.hpp"
#include "mdclab/flows.hpp"

using namespace mdc;
using namespace mdc::reduction;

TEST(Flows, DerivativesAgreeWithFiniteDifferences) {
    for (double b : {-0.8, -0.3, 0.0, 0.4, 0.68})
        for (int m : {-3, 0, 1, 4, 7}) {
            const auto e = flow_fd_errors(b, m, 0.7, -0.4, 1e-4);
            EXPECT_LE(e.first, 1e-6 * (1 + m * m));
            EXPECT_LE(e.second, 1e-3 * (1 + m * m * m * m));
        }
}

TEST(Flows, ParameterFlowsHold) {
    for (double b : {-0.9, -0.2, 0.3, 0.68, 0.95})
        for (int m = -4; m <= 6; ++m) {
            const auto r = continuous_flow_residual(b, m, 0.7, -0.4);
            EXPECT_LE(r.forward, 1e-10 * (1 + std::abs(m)) * 10);
            EXPECT_LE(r.backward, 1e-10 * (1 + std::abs(m)) * 10);
            EXPECT_LE(r.ode, 1e-9 * (1 + m * m));
        }
}

TEST(Flows, SolutionsObeyDiscreteRecurrence) {
    const double b = 0.68;
    for (int m = -3; m <= 5; ++m) {
        const double lhs = flow_solution(b, m + 1, 0.3, 0.9) + 2 * b * flow_solution(b, m, 0.3, 0.9) +
                           flow_solution(b, m - 1, 0.3, 0.9);
        EXPECT_NEAR(lhs, 0.0, 1e-13);
    }
}

TEST(Flows, WrongFlowIsDetected) {
    const double b = 0.3;
    const int m = 3;
    const double d1 = flow_first_derivative(b, m, 0.7, -0.4);
    const double x = flow_solution(b, m, 0.7, -0.4);
    const double xf = flow_solution(b, m + 1, 0.7, -0.4);
    EXPECT_GT(std::abs(d1 - (m + 1) * (b * x + xf) / (1 - b * b)), 1e-3);
}

TEST(Flows, MultiformAnalyticAndDifferenced) {
    for (double a : {-0.5, 0.2, 10.0 / 11.0})
        for (double b : {-0.3, 0.68})
            for (int m : {1, 2, -3})
                for (int n : {1, 4}) {
                    const auto [r1, r2] = continuous_multiform_residual(a, b, m, n, 0.7, -0.4);
                    EXPECT_LE(r1, 1e-12);
                    EXPECT_LE(r2, 1e-12);
                    const auto [f1, f2] =
                        continuous_multiform_fd_residual(a, b, m, n, 0.7, -0.4, 1e-5);
                    EXPECT_LE(f1, 1e-6);
                    EXPECT_LE(f2, 1e-6);
                }
}

TEST(Flows, GuardsOutsideEllipticRange) {
    EXPECT_THROW(flow_solution(1.2, 1, 1, 1), OutOfRegime);
    EXPECT_THROW(continuous_flow_residual(-1.0, 1, 1, 1), OutOfRegime);
    EXPECT_THROW(continuous_multiform_residual(0.2, 0.3, 0, 1, 1, 1), DegenerateParams);
}
