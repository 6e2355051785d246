/**
 * @file pricer.hpp
 * @brief Survival-based bond valuation, BCDS, calibration and conventional measures
 *
 * All prices are clean and per unit face. Rates are per annum, continuously
 * compounded, except the conventional yield which compounds at the coupon
 * frequency.
 */

#pragma once

#include "survival/bond.hpp"
#include "survival/curves.hpp"
#include "survival/integrals.hpp"
#include "survival/solver.hpp"

#include <cmath>
#include <string>

namespace survival {

struct PricingInputs {
    Bond bond;
    DiscountCurve discount;
    HazardCurve hazard;
    double oasf = 0.0; // issue-specific spread added to r + h in every exponent
};

/// Perturbation of the inputs used by risk measures and finite differences.
///
/// rate_shift and rate_twist move the forward curve as r(t) + shift + t*twist;
/// hazard_shift is a parallel move h(t) + eps; recovery_shift adds to R_p.
/// None of these are validated against the curve/bond invariants, so central
/// differences at h = 0 or R_p = 0 are well defined.
struct Scenario {
    double rate_shift = 0.0;
    double rate_twist = 0.0;
    double hazard_shift = 0.0;
    double recovery_shift = 0.0;
};

// ---------------------------------------------------------------------------
// Discrete pricing

/// Clean price with discrete coupon-date recovery and no accrued-coupon
/// recovery:
///
///   P = Z_N Q_N + (C/f) sum Z_i Q_i + R_p sum Z_i (Q_{i-1} - Q_i),
///
/// where every Z_i carries the OASF factor exp(-OASF t_i) and Q_0 = 1.
inline double price_exact(const PricingInputs& in, const Scenario& s = {}) {
    const double rp = in.bond.recovery_principal() + s.recovery_shift;
    double coupon_leg = 0.0;
    double recovery_leg = 0.0;
    double principal_leg = 0.0;
    double q_prev = 1.0;
    for (const auto& cf : schedule(in.bond)) {
        const double t = cf.time;
        const double z = std::exp(-in.discount.integral(t) - (in.oasf + s.rate_shift) * t -
                                  0.5 * s.rate_twist * t * t);
        const double q = std::exp(-in.hazard.integral(t) - s.hazard_shift * t);
        coupon_leg += cf.coupon * z * q;
        principal_leg += cf.principal * z * q;
        recovery_leg += z * (q_prev - q);
        q_prev = q;
    }
    return principal_leg + coupon_leg + rp * recovery_leg;
}

// ---------------------------------------------------------------------------
// Continuous-time approximation

/// Continuous-time price and its analytic derivatives, all from one set of
/// exposure integrals so the sensitivities are exactly consistent with the
/// price they differentiate.
struct ContinuousValuation {
    double price = 0.0;
    double dp_drate = 0.0;     // parallel forward (or OASF) shift
    double d2p_drate2 = 0.0;
    double dp_dhazard = 0.0;   // parallel hazard shift
    double d2p_dhazard2 = 0.0;
    double dp_drecovery = 0.0; // principal recovery R_p
    double rpv01 = 0.0;        // int E, with OASF in the kernel
    double drpv01_dhazard = 0.0;
    double effective_recovery = 0.0; // R_p - (1 - R_c) C / 2f
};

/// Continuous coupon stream with an early-discount correction and an
/// accrued-coupon loss correction:
///
///   P = C int E + E(T) - (C/2f)(1 - E(T)) + (R_p - (1-R_c) C/2f) int h E,
///
/// E(u) = exp(-int_0^u (r + h + OASF)). Rate and hazard derivatives follow by
/// differentiating E under the integral; see ContinuousValuation.
inline ContinuousValuation value_continuous(const PricingInputs& in, const Scenario& s = {}) {
    if (s.rate_twist != 0.0)
        throw DomainError("continuous-time valuation supports parallel shifts only");
    const Bond& b = in.bond;
    const double c = b.coupon();
    const double half_period_coupon = c / (2.0 * b.frequency());
    const double rp = b.recovery_principal() + s.recovery_shift;
    const double k = rp - (1.0 - b.recovery_coupon()) * half_period_coupon;
    const double t_n = b.maturity();

    const auto ex = exposure_integrals(in.discount, in.hazard, t_n,
                                       {in.oasf + s.rate_shift, s.hazard_shift});
    const double e_t = ex.terminal;
    const auto& m = ex.plain;
    const auto& hm = ex.hazard;

    ContinuousValuation v;
    v.effective_recovery = k;
    v.rpv01 = m[0];
    v.drpv01_dhazard = -m[1];
    v.price = c * m[0] + e_t - half_period_coupon * (1.0 - e_t) + k * hm[0];
    v.dp_drate = -c * m[1] - t_n * (1.0 + half_period_coupon) * e_t - k * hm[1];
    v.d2p_drate2 = c * m[2] + t_n * t_n * (1.0 + half_period_coupon) * e_t + k * hm[2];
    v.dp_dhazard = v.dp_drate + k * m[0];
    v.d2p_dhazard2 = v.d2p_drate2 - 2.0 * k * m[1];
    v.dp_drecovery = hm[0];
    return v;
}

inline double price_continuous(const PricingInputs& in, const Scenario& s = {}) {
    return value_continuous(in, s).price;
}

/// Continuous analogue without corrections: C int E + E(T) + R_p int h E.
/// Overstates value; kept for bias comparisons.
inline double price_naive_continuous(const PricingInputs& in, const Scenario& s = {}) {
    if (s.rate_twist != 0.0)
        throw DomainError("continuous-time valuation supports parallel shifts only");
    const auto ex = exposure_integrals(in.discount, in.hazard, in.bond.maturity(),
                                       {in.oasf + s.rate_shift, s.hazard_shift});
    const double rp = in.bond.recovery_principal() + s.recovery_shift;
    return in.bond.coupon() * ex.plain[0] + ex.terminal + rp * ex.hazard[0];
}

// ---------------------------------------------------------------------------
// CDS-style measures

/// Risky annuity int_0^T exp(-int_0^u (r + h + oasf)) du.
inline double rpv01(const DiscountCurve& discount, const HazardCurve& hazard, double maturity,
                    double oasf = 0.0) {
    return exposure_integrals(discount, hazard, maturity, {oasf, 0.0}).plain[0];
}

/// Bond-implied CDS spread: (1 - R_p) int h E / int E + oasf, with E free
/// of OASF. For a flat hazard curve this is the credit triangle h (1 - R_p).
inline double bcds(const DiscountCurve& discount, const HazardCurve& hazard, double maturity,
                   double recovery_principal, double oasf = 0.0, double hazard_shift = 0.0) {
    if (!(maturity > 0.0))
        throw DomainError("bcds requires maturity > 0");
    const auto ex = exposure_integrals(discount, hazard, maturity, {0.0, hazard_shift});
    return (1.0 - recovery_principal) * ex.hazard[0] / ex.plain[0] + oasf;
}

// ---------------------------------------------------------------------------
// Calibration

inline constexpr double kOasfLow = -0.5;
inline constexpr double kOasfHigh = 5.0;
inline constexpr double kHazardHigh = 20.0;

/// OASF that reprices the bond exactly to `market_price` (per unit face).
/// price_exact is strictly decreasing in OASF.
inline double calibrate_oasf(const Bond& bond, const DiscountCurve& discount, const HazardCurve& hazard,
                             double market_price) {
    if (!(market_price > 0.0))
        throw DomainError("market price must be > 0");
    PricingInputs in{bond, discount, hazard, 0.0};
    return solve_bracketed(
        [&](double oasf) {
            in.oasf = oasf;
            return price_exact(in) - market_price;
        },
        kOasfLow, kOasfHigh, "OASF calibration");
}

/// Flat hazard rate (OASF = 0) that reprices the bond to `market_price`.
/// Prices below the recovery floor reached as h -> 20 are unattainable.
inline double calibrate_flat_hazard(const Bond& bond, const DiscountCurve& discount, double market_price) {
    if (!(market_price > 0.0))
        throw DomainError("market price must be > 0");
    return solve_bracketed(
        [&](double h) {
            return price_exact({bond, discount, HazardCurve::flat(h), 0.0}) - market_price;
        },
        0.0, kHazardHigh, "flat hazard calibration");
}

// ---------------------------------------------------------------------------
// Conventional spread versus hazard rate (flat curves)

namespace detail {

/// (1 - exp(-x T)) / x, continuous at x = 0.
inline double flat_annuity(double x, double maturity) {
    if (std::abs(x * maturity) < 1e-8)
        return maturity * (1.0 - 0.5 * x * maturity);
    return -std::expm1(-x * maturity) / x;
}

} // namespace detail

/// Price of a continuously paying coupon bond discounted at a flat r + s.
inline double strippable_price_flat(double coupon, double rate, double spread, double maturity) {
    const double x = rate + spread;
    return coupon * detail::flat_annuity(x, maturity) + std::exp(-x * maturity);
}

/// Survival-based continuous price with flat r, h (no coupon corrections).
inline double survival_price_flat(double coupon, double rate, double hazard, double recovery,
                                  double maturity) {
    const double x = rate + hazard;
    return (coupon + hazard * recovery) * detail::flat_annuity(x, maturity) + std::exp(-x * maturity);
}

/// Conventional spread S implied by equating the strippable price at r + S
/// with the survival-based price at (r, h). The strippable side is strictly
/// decreasing in S.
inline double conventional_spread_exact(double coupon, double rate, double hazard, double recovery,
                                        double maturity) {
    if (!(maturity > 0.0))
        throw DomainError("conventional spread requires maturity > 0");
    const double target = survival_price_flat(coupon, rate, hazard, recovery, maturity);
    return solve_bracketed(
        [&](double s) { return strippable_price_flat(coupon, rate, s, maturity) - target; }, -1.0,
        10.0, "conventional spread");
}

/// First-order expansion around the credit triangle:
/// S ~ h(1 - R_p) + R_p h T (C - r - h(1 - R_p)) / 2.
inline double conventional_spread_approx(double coupon, double rate, double hazard, double recovery,
                                         double maturity) {
    const double triangle = hazard * (1.0 - recovery);
    return triangle + 0.5 * recovery * hazard * maturity * (coupon - rate - triangle);
}

// ---------------------------------------------------------------------------
// Conventional comparators on discrete cash flows

struct YieldMeasures {
    double yield = 0.0;    // compounded at the coupon frequency
    double macaulay = 0.0; // years
    double modified = 0.0; // macaulay / (1 + y/f)
};

/// Yield to maturity and textbook durations for a clean price per unit face.
inline YieldMeasures yield_and_modified_duration(const Bond& bond, double market_price) {
    if (!(market_price > 0.0))
        throw DomainError("market price must be > 0");
    const auto flows = schedule(bond);
    const double f = bond.frequency();
    auto pv = [&](double y) {
        double sum = 0.0;
        for (const auto& cf : flows)
            sum += cf.total() * std::pow(1.0 + y / f, -f * cf.time);
        return sum;
    };
    YieldMeasures out;
    out.yield = solve_bracketed([&](double y) { return pv(y) - market_price; }, -0.9, 10.0, "yield");
    const double base = 1.0 + out.yield / f;
    double weighted = 0.0;
    double price = 0.0;
    for (const auto& cf : flows) {
        const double df = std::pow(base, -f * cf.time);
        weighted += cf.time * cf.total() * df;
        price += cf.total() * df;
    }
    out.macaulay = weighted / price;
    out.modified = out.macaulay / base;
    return out;
}

/// Price of the scheduled cash flows discounted at r(t) + spread, no default.
inline double strippable_price(const Bond& bond, const DiscountCurve& discount, double spread) {
    double sum = 0.0;
    for (const auto& cf : schedule(bond))
        sum += cf.total() * std::exp(-discount.integral(cf.time) - spread * cf.time);
    return sum;
}

/// Constant spread over the forward curve that reprices the strippable
/// cash flows to `market_price`.
inline double z_spread(const Bond& bond, const DiscountCurve& discount, double market_price) {
    if (!(market_price > 0.0))
        throw DomainError("market price must be > 0");
    return solve_bracketed(
        [&](double s) { return strippable_price(bond, discount, s) - market_price; }, -0.5, 10.0,
        "z-spread");
}

} // namespace survival
