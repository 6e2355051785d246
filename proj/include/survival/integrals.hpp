/**
 * @file integrals.hpp
 * @brief Closed-form exposure integrals over merged piecewise-flat segments
 *
 * With E(u) = exp(-int_0^u (r + h + s)), the continuous-time price and all
 * of its sensitivities reduce to the moments
 *
 *   int_0^T u^k E(u) du   and   int_0^T u^k h(u) E(u) du,   k = 0, 1, 2.
 *
 * Between consecutive curve nodes r and h are constant, so E is a single
 * exponential there and each moment has an exact antiderivative.
 */

#pragma once

#include "survival/curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace survival {

/// Moments of the survival-discount kernel E over [0, T].
struct ExposureIntegrals {
    double horizon = 0.0;
    double terminal = 1.0;              // E(T)
    std::array<double, 3> plain{};      // int u^k E(u) du
    std::array<double, 3> hazard{};     // int u^k h(u) E(u) du
};

/// Additive parallel moves applied on top of the curves.
struct KernelShift {
    double rate = 0.0;   // added to r(s); OASF enters here too
    double hazard = 0.0; // added to h(s), including inside the h(u) weight
};

namespace detail {

/// m_k = int_0^s x^k exp(-lambda x) dx for k = 0, 1, 2.
inline std::array<double, 3> exponential_moments(double lambda, double s) {
    const double z = lambda * s;
    std::array<double, 3> m{};
    if (std::abs(z) < 0.5) {
        // m_k = s^{k+1} sum_n (-z)^n / (n! (n + k + 1)); |z| < 0.5 converges fast
        double term = 1.0;
        std::array<double, 3> acc{};
        for (int n = 0; n < 40; ++n) {
            for (int k = 0; k < 3; ++k)
                acc[k] += term / (n + k + 1);
            term *= -z / (n + 1);
            if (std::abs(term) < 1e-18)
                break;
        }
        m[0] = s * acc[0];
        m[1] = s * s * acc[1];
        m[2] = s * s * s * acc[2];
        return m;
    }
    const double e = std::exp(-z);
    m[0] = -std::expm1(-z) / lambda;
    m[1] = (m[0] - s * e) / lambda;
    m[2] = (2.0 * m[1] - s * s * e) / lambda;
    return m;
}

/// Sorted segment boundaries in (0, horizon) from both curves, plus horizon.
inline std::vector<double> segment_ends(const DiscountCurve& discount, const HazardCurve& hazard,
                                        double horizon) {
    std::vector<double> ends;
    for (const auto& n : discount.nodes())
        if (n.time > 0.0 && n.time < horizon)
            ends.push_back(n.time);
    for (const auto& n : hazard.nodes())
        if (n.time > 0.0 && n.time < horizon)
            ends.push_back(n.time);
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    ends.push_back(horizon);
    return ends;
}

} // namespace detail

/// Exact moments of E over [0, horizon].
inline ExposureIntegrals exposure_integrals(const DiscountCurve& discount, const HazardCurve& hazard,
                                            double horizon, KernelShift shift = {}) {
    if (!(horizon >= 0.0))
        throw DomainError("integration horizon must be >= 0");
    ExposureIntegrals out;
    out.horizon = horizon;
    if (horizon == 0.0)
        return out;

    double start = 0.0;
    double log_kernel = 0.0; // int_0^start (r + h + shift)
    for (double end : detail::segment_ends(discount, hazard, horizon)) {
        // Right-continuous curves: the segment's rates are those at its start.
        const double r = discount.rate(start) + shift.rate;
        const double h = hazard.rate(start) + shift.hazard;
        const double lambda = r + h;
        const double width = end - start;
        const auto m = detail::exponential_moments(lambda, width);
        const double scale = std::exp(-log_kernel);
        const std::array<double, 3> seg{
            scale * m[0],
            scale * (start * m[0] + m[1]),
            scale * (start * start * m[0] + 2.0 * start * m[1] + m[2]),
        };
        for (int k = 0; k < 3; ++k) {
            out.plain[k] += seg[k];
            out.hazard[k] += h * seg[k];
        }
        log_kernel += lambda * width;
        start = end;
    }
    out.terminal = std::exp(-log_kernel);
    return out;
}

} // namespace survival
