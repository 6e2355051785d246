/**
 * @file risk.hpp
 * @brief Survival-consistent durations, convexities and default-risk measures
 *
 * Two pricing bases are in play and every measure is tied to one of them:
 *
 *  - discrete: price_exact. D_r and Gamma_r are its exact (minus) log
 *    derivatives with respect to a parallel forward-rate / OASF shift.
 *  - continuous: value_continuous. D_h, Gamma_h and the recovery duration are
 *    exact derivatives of the continuous-time price under a parallel hazard
 *    shift or a change in R_p.
 *
 * Each analytic number is therefore checkable against a finite difference of
 * its own pricing function (see fd_sensitivity).
 */

#pragma once

#include "survival/errors.hpp"
#include "survival/pricer.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string_view>

namespace survival {

// ---------------------------------------------------------------------------
// Finite differences

struct FdBump {
    double first = 1e-6;
    double second = 1e-4;
};

struct FdSensitivity {
    double first = 0.0;  // (f(x+b) - f(x-b)) / 2b
    double second = 0.0; // (f(x+b) - 2 f(x) + f(x-b)) / b^2
};

/// Central first and second differences of `f` at `x`.
template <class F>
FdSensitivity fd_sensitivity(F&& f, double x, FdBump bump = {}) {
    if (!(bump.first > 0.0) || !(bump.second > 0.0))
        throw DomainError("finite-difference bump must be > 0");
    FdSensitivity out;
    out.first = (f(x + bump.first) - f(x - bump.first)) / (2.0 * bump.first);
    const double b = bump.second;
    out.second = (f(x + b) - 2.0 * f(x) + f(x - b)) / (b * b);
    return out;
}

// ---------------------------------------------------------------------------
// Interest-rate (OASF) duration and convexity on the discrete price

namespace detail {

/// sum t^power * (cash flow PV) over all legs of price_exact.
inline double time_weighted_pv(const PricingInputs& in, int power) {
    const double rp = in.bond.recovery_principal();
    double sum = 0.0;
    double q_prev = 1.0;
    for (const auto& cf : schedule(in.bond)) {
        const double t = cf.time;
        const double z = std::exp(-in.discount.integral(t) - in.oasf * t);
        const double q = survival_prob(in.hazard, t);
        const double pv = cf.total() * z * q + rp * z * (q_prev - q);
        sum += std::pow(t, power) * pv;
        q_prev = q;
    }
    return sum;
}

inline void require_positive_price(double price) {
    if (!(price > 0.0))
        throw DomainError("risk measure requires a positive price");
}

} // namespace detail

/// Cash-flow time weighted by present value and probability of realization,
/// over the price: -(1/P) dP/dOASF.
inline double duration_survival(const PricingInputs& in) {
    const double p = price_exact(in);
    detail::require_positive_price(p);
    return detail::time_weighted_pv(in, 1) / p;
}

/// t^2-weighted analogue: (1/P) d2P/dOASF2.
inline double convexity_survival(const PricingInputs& in) {
    const double p = price_exact(in);
    detail::require_positive_price(p);
    return detail::time_weighted_pv(in, 2) / p;
}

// ---------------------------------------------------------------------------
// Hazard, BCDS and recovery sensitivities on the continuous price

/// -(1/P) dP/dh for a parallel hazard shift. Equal to D_r - K * RPV01 / P with
/// D_r and RPV01 both taken on the continuous price and K the effective
/// recovery R_p - (1 - R_c) C/2f.
inline double duration_hazard(const PricingInputs& in) {
    const auto v = value_continuous(in);
    detail::require_positive_price(v.price);
    const double d_rate = -v.dp_drate / v.price;
    return d_rate - v.effective_recovery * v.rpv01 / v.price;
}

/// Rule of thumb D_r (1 - R_p P).
inline double duration_hazard_ballpark(double d_rate, double recovery, double price) {
    return d_rate * (1.0 - recovery * price);
}

/// (1/P) d2P/dh2 for a parallel hazard shift.
inline double convexity_hazard(const PricingInputs& in) {
    const auto v = value_continuous(in);
    detail::require_positive_price(v.price);
    return v.d2p_dhazard2 / v.price;
}

/// (1/P) d2P/dr2 on the continuous price; the partner of convexity_hazard.
inline double convexity_rate_continuous(const PricingInputs& in) {
    const auto v = value_continuous(in);
    detail::require_positive_price(v.price);
    return v.d2p_drate2 / v.price;
}

/// Gamma_h - Gamma_r - 2 K (1/P) dRPV01/dh, all on the continuous price.
/// Zero up to rounding.
inline double hazard_convexity_identity_gap(const PricingInputs& in) {
    const auto v = value_continuous(in);
    detail::require_positive_price(v.price);
    const double gamma_h = v.d2p_dhazard2 / v.price;
    const double gamma_r = v.d2p_drate2 / v.price;
    return gamma_h - gamma_r - 2.0 * v.effective_recovery * v.drpv01_dhazard / v.price;
}

/// Price sensitivity per unit BCDS move, approximated as
/// D_r (1 - R_p P) / (1 - R_p) on the discrete price. Equal to D_r at par,
/// shorter for premium bonds, longer for discount bonds. The approximation
/// drops the rate dependence of BCDS; prefer duration_hazard for hedging.
inline double duration_bcds(const PricingInputs& in) {
    const double rp = in.bond.recovery_principal();
    if (rp >= 1.0)
        throw DomainError("BCDS duration undefined for R_p = 1");
    const double p = price_exact(in);
    detail::require_positive_price(p);
    return (1.0 - rp * p) / (1.0 - rp) * duration_survival(in);
}

/// BCDS duration from finite differences: bump h in parallel, reprice the
/// continuous price and BCDS, return (-dP/P) / dBCDS.
inline double duration_bcds_fd(const PricingInputs& in, double bump = 1e-6) {
    const double p = price_continuous(in);
    detail::require_positive_price(p);
    const double t = in.bond.maturity();
    const double rp = in.bond.recovery_principal();
    const double dp = price_continuous(in, {.hazard_shift = bump}) -
                      price_continuous(in, {.hazard_shift = -bump});
    const double ds = bcds(in.discount, in.hazard, t, rp, in.oasf, bump) -
                      bcds(in.discount, in.hazard, t, rp, in.oasf, -bump);
    if (ds == 0.0)
        throw DomainError("BCDS insensitive to hazard; BCDS duration undefined");
    return -(dp / p) / ds;
}

struct RecoveryDuration {
    double exact = 0.0;    // (1/P) dP/dR_p on the continuous price
    double bcds_form = 0.0; // RPV01 (BCDS - OASF) / ((1 - R_p) P); NaN when R_p = 1
    double ballpark = 0.0;  // (1 - P) / ((1 - R_p) P); NaN when R_p = 1
};

/// Fractional price change per unit change in principal recovery, hazard
/// curve held fixed.
inline RecoveryDuration duration_recovery(const PricingInputs& in) {
    const auto v = value_continuous(in);
    detail::require_positive_price(v.price);
    const double p = v.price;
    const double rp = in.bond.recovery_principal();
    RecoveryDuration out;
    out.exact = v.dp_drecovery / p;
    if (rp < 1.0) {
        const double t = in.bond.maturity();
        const double spread = bcds(in.discount, in.hazard, t, rp, in.oasf) - in.oasf;
        out.bcds_form = rpv01(in.discount, in.hazard, t) * spread / ((1.0 - rp) * p);
        out.ballpark = (1.0 - p) / ((1.0 - rp) * p);
    } else {
        out.bcds_form = std::numeric_limits<double>::quiet_NaN();
        out.ballpark = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

/// Fractional loss on instantaneous default: 1 - R_p / P.
inline double vod(double price, double recovery) {
    detail::require_positive_price(price);
    return 1.0 - recovery / price;
}

// ---------------------------------------------------------------------------
// Report

/// Which pricing function a report field is derived from.
enum class Basis { discrete, continuous, conventional, input };

/// Full sensitivity vector of one bond.
///
/// price, d_r, gamma_r, d_bcds and vod sit on the discrete price; d_h,
/// gamma_h, d_recovery and price_continuous on the continuous price; rpv01 and
/// bcds are CDS-style integrals without OASF in the kernel (bcds adds OASF).
/// mod_duration, yield and z_spread are the conventional comparators.
struct RiskReport {
    double price = 0.0;
    double d_r = 0.0;
    double gamma_r = 0.0;
    double d_h = 0.0;
    double gamma_h = 0.0;
    double d_bcds = 0.0;
    double d_recovery = 0.0;
    double vod = 0.0;
    double rpv01 = 0.0;
    double bcds = 0.0;
    double mod_duration = 0.0;
    double z_spread = 0.0;
    // supplementary
    double oasf = 0.0;
    double price_continuous = 0.0;
    double d_r_continuous = 0.0;
    double gamma_r_continuous = 0.0;
    double d_bcds_fd = 0.0;
    double d_recovery_ballpark = 0.0;
    double yield = 0.0;
    double macaulay = 0.0;
};

enum class Unit { price, years, years2, fraction, rate, per_recovery };

struct ReportField {
    std::string_view name;
    double RiskReport::*member;
    Basis basis;
    Unit unit;
};

/// Serialization order of RiskReport fields.
inline constexpr std::array<ReportField, 20> kReportFields{{
    {"price", &RiskReport::price, Basis::discrete, Unit::price},
    {"d_r", &RiskReport::d_r, Basis::discrete, Unit::years},
    {"gamma_r", &RiskReport::gamma_r, Basis::discrete, Unit::years2},
    {"d_h", &RiskReport::d_h, Basis::continuous, Unit::years},
    {"gamma_h", &RiskReport::gamma_h, Basis::continuous, Unit::years2},
    {"d_bcds", &RiskReport::d_bcds, Basis::discrete, Unit::years},
    {"d_recovery", &RiskReport::d_recovery, Basis::continuous, Unit::per_recovery},
    {"vod", &RiskReport::vod, Basis::discrete, Unit::fraction},
    {"rpv01", &RiskReport::rpv01, Basis::continuous, Unit::years},
    {"bcds", &RiskReport::bcds, Basis::continuous, Unit::rate},
    {"mod_duration", &RiskReport::mod_duration, Basis::conventional, Unit::years},
    {"z_spread", &RiskReport::z_spread, Basis::conventional, Unit::rate},
    {"oasf", &RiskReport::oasf, Basis::input, Unit::rate},
    {"price_continuous", &RiskReport::price_continuous, Basis::continuous, Unit::price},
    {"d_r_continuous", &RiskReport::d_r_continuous, Basis::continuous, Unit::years},
    {"gamma_r_continuous", &RiskReport::gamma_r_continuous, Basis::continuous, Unit::years2},
    {"d_bcds_fd", &RiskReport::d_bcds_fd, Basis::continuous, Unit::years},
    {"d_recovery_ballpark", &RiskReport::d_recovery_ballpark, Basis::continuous, Unit::per_recovery},
    {"yield", &RiskReport::yield, Basis::conventional, Unit::rate},
    {"macaulay", &RiskReport::macaulay, Basis::conventional, Unit::years},
}};

inline RiskReport make_risk_report(const PricingInputs& in) {
    RiskReport r;
    const Bond& b = in.bond;
    r.oasf = in.oasf;
    r.price = price_exact(in);
    detail::require_positive_price(r.price);
    r.d_r = detail::time_weighted_pv(in, 1) / r.price;
    r.gamma_r = detail::time_weighted_pv(in, 2) / r.price;
    r.vod = vod(r.price, b.recovery_principal());
    r.d_bcds = b.recovery_principal() < 1.0
                   ? (1.0 - b.recovery_principal() * r.price) / (1.0 - b.recovery_principal()) * r.d_r
                   : std::numeric_limits<double>::quiet_NaN();

    const auto v = value_continuous(in);
    detail::require_positive_price(v.price);
    r.price_continuous = v.price;
    r.d_r_continuous = -v.dp_drate / v.price;
    r.gamma_r_continuous = v.d2p_drate2 / v.price;
    r.d_h = -v.dp_dhazard / v.price;
    r.gamma_h = v.d2p_dhazard2 / v.price;
    const auto rec = duration_recovery(in);
    r.d_recovery = rec.exact;
    r.d_recovery_ballpark = rec.ballpark;
    r.rpv01 = rpv01(in.discount, in.hazard, b.maturity());
    r.bcds = bcds(in.discount, in.hazard, b.maturity(), b.recovery_principal(), in.oasf);
    r.d_bcds_fd = b.recovery_principal() < 1.0 ? duration_bcds_fd(in)
                                                : std::numeric_limits<double>::quiet_NaN();

    const auto y = yield_and_modified_duration(b, r.price);
    r.yield = y.yield;
    r.macaulay = y.macaulay;
    r.mod_duration = y.modified;
    r.z_spread = z_spread(b, in.discount, r.price);
    return r;
}

// ---------------------------------------------------------------------------
// Price impact

/// P(OASF + delta) / P ~ 1 - D delta + Gamma delta^2 / 2.
inline double price_impact_oasf(const RiskReport& report, double delta_oasf) {
    return 1.0 - report.d_r * delta_oasf + 0.5 * report.gamma_r * delta_oasf * delta_oasf;
}

/// Twist duration: half the shift convexity.
inline double twist_duration(const RiskReport& report) { return 0.5 * report.gamma_r; }

/// Forward move r(t) + shift + t * twist: second order in shift, first order
/// in twist.
inline double price_impact_shift_twist(const RiskReport& report, double delta_shift, double delta_twist) {
    return price_impact_oasf(report, delta_shift) - twist_duration(report) * delta_twist;
}

} // namespace survival
