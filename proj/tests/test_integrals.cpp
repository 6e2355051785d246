#include "survival/integrals.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace survival {
namespace {

TEST(ExponentialMomentsTest, SeriesAndClosedFormAgreeAtSwitch) {
    // Both branches evaluated just either side of |lambda s| = 0.5.
    const double s = 2.0;
    const auto below = detail::exponential_moments(0.2499999, s);
    const auto above = detail::exponential_moments(0.2500001, s);
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(below[k], above[k], 1e-6 * std::abs(below[k]));
}

TEST(ExponentialMomentsTest, ZeroRateGivesPowers) {
    const auto m = detail::exponential_moments(0.0, 3.0);
    EXPECT_DOUBLE_EQ(m[0], 3.0);
    EXPECT_DOUBLE_EQ(m[1], 4.5);
    EXPECT_DOUBLE_EQ(m[2], 9.0);
}

TEST(ExponentialMomentsTest, NegativeRate) {
    const double lambda = -0.3;
    const double s = 4.0;
    const auto m = detail::exponential_moments(lambda, s);
    for (int k = 0; k < 3; ++k) {
        const double ref = oracle::riemann(
            [&](double x) { return std::pow(x, k) * std::exp(-lambda * x); }, 0.0, s, 200000);
        EXPECT_NEAR(m[k] / ref, 1.0, 1e-9);
    }
}

TEST(ExposureIntegralsTest, MatchesRiemannOnTwoNodeCurves) {
    const DiscountCurve discount({{1.5, 0.02}, {6.0, 0.045}});
    const HazardCurve hazard({{2.0, 0.01}, {10.0, 0.03}});
    const oracle::Steps r{{{1.5, 0.02}, {6.0, 0.045}}};
    const oracle::Steps h{{{2.0, 0.01}, {10.0, 0.03}}};
    const double oasf = 0.004;
    const double horizon = 8.25; // binary fraction, cells of 2^-16 hit every node
    const auto ex = exposure_integrals(discount, hazard, horizon, {oasf, 0.0});
    auto kernel = [&](double u) { return std::exp(-r.integral(u) - h.integral(u) - oasf * u); };
    for (int k = 0; k < 3; ++k) {
        const double plain = oracle::riemann([&](double u) { return std::pow(u, k) * kernel(u); }, 0.0,
                                             horizon, 540672);
        const double weighted = oracle::riemann(
            [&](double u) { return std::pow(u, k) * h(u) * kernel(u); }, 0.0, horizon, 540672);
        EXPECT_NEAR(ex.plain[k] / plain, 1.0, 1e-8) << "k=" << k;
        EXPECT_NEAR(ex.hazard[k] / weighted, 1.0, 1e-8) << "k=" << k;
    }
    EXPECT_NEAR(ex.terminal, kernel(horizon), 1e-15);
}

TEST(ExposureIntegralsTest, ZeroHorizon) {
    const auto ex = exposure_integrals(DiscountCurve::flat(0.05), HazardCurve::flat(0.1), 0.0);
    EXPECT_EQ(ex.plain[0], 0.0);
    EXPECT_EQ(ex.terminal, 1.0);
    EXPECT_THROW(exposure_integrals(DiscountCurve::flat(0.05), HazardCurve::flat(0.1), -1.0),
                 DomainError);
}

TEST(ExposureIntegralsTest, HazardShiftEntersWeightAndKernel) {
    const auto ex = exposure_integrals(DiscountCurve::flat(0.03), HazardCurve::flat(0.0), 5.0,
                                       {0.0, 0.02});
    const double lambda = 0.05;
    const double a = (1.0 - std::exp(-lambda * 5.0)) / lambda;
    EXPECT_NEAR(ex.plain[0], a, 1e-14);
    EXPECT_NEAR(ex.hazard[0], 0.02 * a, 1e-15);
}

} // namespace
} // namespace survival
