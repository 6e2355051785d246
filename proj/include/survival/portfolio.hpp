/**
 * @file portfolio.hpp
 * @brief Risk aggregation and market-neutral long-short trade construction
 */

#pragma once

#include "survival/bond.hpp"
#include "survival/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace survival {

// ---------------------------------------------------------------------------
// Aggregation

/// Bond positions plus a cash balance (price 1, recovery 1, no risk).
struct Portfolio {
    std::vector<Position> positions;
    double cash = 0.0;

    /// Sum of q_i P_i plus cash.
    double market_value() const {
        double mv = cash;
        for (const auto& p : positions)
            mv += p.market_value();
        return mv;
    }

    /// Market-value weights q_i P_i / MV of the bond positions.
    std::vector<double> weights() const {
        const double mv = checked_market_value();
        std::vector<double> w;
        w.reserve(positions.size());
        for (const auto& p : positions)
            w.push_back(p.market_value() / mv);
        return w;
    }

    double cash_weight() const { return cash / checked_market_value(); }

    double checked_market_value() const {
        const double mv = market_value();
        if (mv == 0.0)
            throw DomainError("portfolio market value is zero; weights undefined");
        return mv;
    }
};

/// kappa = -1 for rate and hazard durations, +1 for recovery duration.
enum class SensitivityKind { interest_rate, hazard_rate, recovery };

constexpr double kappa(SensitivityKind kind) {
    return kind == SensitivityKind::recovery ? 1.0 : -1.0;
}

/// sum w_i x_i for trade-normalized weights.
inline double aggregate(std::span<const double> weights, std::span<const double> values) {
    if (weights.size() != values.size())
        throw DomainError("weights and values differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        sum += weights[i] * values[i];
    return sum;
}

/// Market-value weighted average of per-bond durations or convexities.
/// Cash contributes zero.
inline double aggregate_duration(const Portfolio& portfolio, std::span<const double> per_bond) {
    if (per_bond.size() != portfolio.positions.size())
        throw DomainError("one value per position required");
    const auto w = portfolio.weights();
    return aggregate(w, per_bond);
}

/// The same quantity from raw price derivatives dP_i/dF:
/// (kappa / MV) sum q_i dP_i/dF.
inline double aggregate_from_price_derivatives(const Portfolio& portfolio,
                                               std::span<const double> dprice, SensitivityKind kind) {
    if (dprice.size() != portfolio.positions.size())
        throw DomainError("one derivative per position required");
    const double mv = portfolio.checked_market_value();
    double sum = 0.0;
    for (std::size_t i = 0; i < dprice.size(); ++i)
        sum += portfolio.positions[i].quantity * dprice[i];
    return kappa(kind) * sum / mv;
}

struct AggregateVod {
    double value = 0.0;
    /// Set when the positions span more than one named issuer; simultaneous
    /// default is then not a meaningful scenario.
    bool mixed_issuers = false;
};

/// Loss fraction on simultaneous default: 1 - (sum q_i R_i + cash) / MV.
inline AggregateVod aggregate_vod(const Portfolio& portfolio) {
    const double mv = portfolio.checked_market_value();
    double recovered = portfolio.cash;
    std::set<std::string> issuers;
    for (const auto& p : portfolio.positions) {
        recovered += p.quantity * p.bond.recovery_principal();
        if (!p.issuer.empty())
            issuers.insert(p.issuer);
    }
    return {1.0 - recovered / mv, issuers.size() > 1};
}

// ---------------------------------------------------------------------------
// Market-neutral trades

/// Default target accuracies by risk kind.
inline constexpr double kDurationAccuracy = 0.1; // years
inline constexpr double kVodAccuracy = 0.01;

struct HedgeProblem {
    Eigen::MatrixXd sensitivities;         // K x N, raw units, row k = risk k
    Eigen::VectorXd target_accuracy;       // K normalizers, same units as rows
    Eigen::VectorXd bond_prices;           // N, per unit face; optional (size 0)
    std::optional<Eigen::Index> long_leg;  // orient the trade so this bond is held long
};

struct HedgeSolution {
    Eigen::VectorXd weights;   // w_1..w_N, market-value fractions of the trade
    double cash = 0.0;         // w_0
    Eigen::VectorXd raw;       // v_1..v_N before normalization
    double normalizer = 0.0;   // W
    Eigen::VectorXd residuals; // achieved sum_i w_i delta_i^k, raw units
    Eigen::VectorXd quantities; // w_i / P_i face per unit notional; empty without prices
    Eigen::Index rank = 0;
    bool degenerate = false;   // stacked system rank-deficient; minimum-norm pick
    bool flipped = false;      // sign reversed to honour long_leg
};

/// Zero-cost market-neutral trade.
///
/// Stacks the normalized sensitivities delta_i^k / a_k over a row of ones and
/// takes the least-squares solution v of Lambda v = (0, ..., 0, 1). An
/// orthogonal (complete orthogonal decomposition) solve returns the
/// minimum-norm v when Lambda is rank-deficient. Then
///
///   W = max(sum v_i^+, sum -v_i^-),  w_i = v_i / W,  w_0 = -sum v_i / W,
///
/// so the larger of the gross long and gross short legs is exactly 1.
/// Negating a zero-cost neutral trade gives another one; `long_leg` picks the
/// side on which the named bond is bought.
inline HedgeSolution solve_hedge(const HedgeProblem& problem) {
    const auto& s = problem.sensitivities;
    const Eigen::Index k = s.rows();
    const Eigen::Index n = s.cols();
    if (n < 1)
        throw DomainError("hedge needs at least one bond");
    if (problem.target_accuracy.size() != k)
        throw DomainError("one target accuracy per risk row required");
    for (Eigen::Index i = 0; i < k; ++i)
        if (!(problem.target_accuracy(i) > 0.0))
            throw DomainError("target accuracies must be > 0");
    if (!s.allFinite())
        throw DomainError("sensitivities must be finite");
    if (problem.bond_prices.size() != 0 && problem.bond_prices.size() != n)
        throw DomainError("one price per bond required");
    if (problem.long_leg && (*problem.long_leg < 0 || *problem.long_leg >= n))
        throw DomainError("long leg index out of range");

    Eigen::MatrixXd lambda(k + 1, n);
    lambda.topRows(k) = problem.target_accuracy.cwiseInverse().asDiagonal() * s;
    lambda.row(k).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    rhs(k) = 1.0;

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lambda);
    HedgeSolution out;
    out.rank = cod.rank();
    out.degenerate = out.rank < n;
    out.raw = cod.solve(rhs);

    double gross_long = 0.0;
    double gross_short = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (out.raw(i) > 0.0)
            gross_long += out.raw(i);
        else
            gross_short -= out.raw(i);
    }
    out.normalizer = std::max(gross_long, gross_short);
    if (!(out.normalizer > 0.0) || !std::isfinite(out.normalizer))
        throw DegenerateTradeError("degenerate trade: all raw weights vanish");

    out.weights = out.raw / out.normalizer;
    out.cash = -out.weights.sum();
    if (problem.long_leg && out.weights(*problem.long_leg) < 0.0) {
        out.weights = -out.weights;
        out.cash = -out.cash;
        out.flipped = true;
    }
    out.residuals = s * out.weights;
    if (problem.bond_prices.size() == n)
        out.quantities = out.weights.cwiseQuotient(problem.bond_prices);
    return out;
}

struct BarbellWeights {
    std::array<double, 3> weights{};
    double cash = 0.0;
};

/// Conventional duration-neutral barbell: the body bond is +1 and the wings
/// solve sum w_i D_i = 0 and sum w_i = 0.
inline BarbellWeights solve_spread_based_barbell(const std::array<double, 3>& durations,
                                                 std::size_t body) {
    if (body > 2)
        throw DomainError("body index must be 0, 1 or 2");
    std::array<std::size_t, 2> wing{};
    for (std::size_t i = 0, j = 0; i < 3; ++i)
        if (i != body)
            wing[j++] = i;
    const double da = durations[wing[0]];
    const double db = durations[wing[1]];
    if (std::abs(da - db) < 1e-14)
        throw DegenerateTradeError("barbell wings have equal durations");
    // wa da + wb db = -D_body, wa + wb = -1
    const double rhs0 = -durations[body];
    const double rhs1 = -1.0;
    BarbellWeights out;
    out.weights[body] = 1.0;
    out.weights[wing[0]] = (rhs0 - db * rhs1) / (da - db);
    out.weights[wing[1]] = rhs1 - out.weights[wing[0]];
    return out;
}

struct CurveFactors {
    double shift = 0.0;
    double twist = 0.0;
};

/// Shift and twist of the 2/5/10/20/30y yield changes.
inline CurveFactors treasury_factors(const std::array<double, 5>& dy) {
    CurveFactors f;
    f.shift = (dy[0] + dy[1] + dy[2] + dy[3] + dy[4]) / 5.0;
    f.twist = (2.0 * dy[0] + dy[1] - dy[3] - 2.0 * dy[4]) / 10.0;
    return f;
}

} // namespace survival
