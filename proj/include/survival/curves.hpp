/**
 * @file curves.hpp
 * @brief Piecewise-flat term structures of forward interest and hazard rates
 */

#pragma once

#include "survival/errors.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace survival {

/// One curve node: the rate holds on the interval that ends at `time`.
struct CurveNode {
    double time; // years
    double rate; // per annum, continuously compounded
};

struct DiscountTag {
    static constexpr bool non_negative = false;
    static constexpr const char* name = "discount";
};

struct HazardTag {
    static constexpr bool non_negative = true;
    static constexpr const char* name = "hazard";
};

/// Piecewise-flat instantaneous rate curve.
///
/// Node k carries the rate on [t_{k-1}, t_k) with t_{-1} = 0; the last rate
/// extends flat beyond the last node. The rate function is right-continuous,
/// so at a node time the next segment's rate applies. Integrals are exact
/// sums of rate x segment length.
template <class Tag>
class PiecewiseFlatCurve {
public:
    explicit PiecewiseFlatCurve(std::vector<CurveNode> nodes) : nodes_(std::move(nodes)) {
        if (nodes_.empty())
            throw DomainError(std::string(Tag::name) + " curve needs at least one node");
        double prev = -1.0;
        for (const auto& n : nodes_) {
            if (!std::isfinite(n.time) || !std::isfinite(n.rate))
                throw DomainError(std::string(Tag::name) + " curve node is not finite");
            if (n.time < 0.0)
                throw DomainError(std::string(Tag::name) + " curve node time must be >= 0");
            if (!(n.time > prev))
                throw DomainError(std::string(Tag::name) + " curve node times must be strictly increasing");
            if (Tag::non_negative && n.rate < 0.0)
                throw DomainError(std::string(Tag::name) + " rates must be >= 0");
            prev = n.time;
        }
        cumulative_.reserve(nodes_.size());
        double acc = 0.0;
        double start = 0.0;
        for (const auto& n : nodes_) {
            acc += n.rate * (n.time - start);
            cumulative_.push_back(acc);
            start = n.time;
        }
    }

    static PiecewiseFlatCurve flat(double rate) { return PiecewiseFlatCurve({{1.0, rate}}); }

    std::span<const CurveNode> nodes() const { return nodes_; }

    /// Instantaneous rate at t (right-continuous, flat extrapolation).
    double rate(double t) const {
        check_time(t);
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                                   [](double x, const CurveNode& n) { return x < n.time; });
        if (it == nodes_.end())
            return nodes_.back().rate;
        return it->rate;
    }

    /// Integral of the rate over [0, t].
    double integral(double t) const {
        check_time(t);
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                                   [](double x, const CurveNode& n) { return x < n.time; });
        const auto idx = static_cast<std::size_t>(it - nodes_.begin());
        if (idx == 0)
            return nodes_.front().rate * t;
        const double base = cumulative_[idx - 1];
        const double start = nodes_[idx - 1].time;
        const double r = idx < nodes_.size() ? nodes_[idx].rate : nodes_.back().rate;
        return base + r * (t - start);
    }

    double integral(double t1, double t2) const {
        if (t1 > t2)
            throw DomainError("integral requires t1 <= t2");
        return integral(t2) - integral(t1);
    }

private:
    static void check_time(double t) {
        if (!(t >= 0.0))
            throw DomainError(std::string(Tag::name) + " curve queried at negative or NaN time");
    }

    std::vector<CurveNode> nodes_;
    std::vector<double> cumulative_; // integral up to each node time
};

/// Base (credit risk-free) instantaneous forward rates r(s).
using DiscountCurve = PiecewiseFlatCurve<DiscountTag>;
/// Default hazard rates h(s); non-negative by construction.
using HazardCurve = PiecewiseFlatCurve<HazardTag>;

/// Z(t) = exp(-int_0^t r).
inline double discount_factor(const DiscountCurve& curve, double t) {
    return std::exp(-curve.integral(t));
}

/// Q(t) = exp(-int_0^t h).
inline double survival_prob(const HazardCurve& curve, double t) {
    return std::exp(-curve.integral(t));
}

/// Probability of default in [t1, t2]: Q(t1) - Q(t2).
inline double default_prob_interval(const HazardCurve& curve, double t1, double t2) {
    if (!(t1 <= t2))
        throw DomainError("default_prob_interval requires t1 <= t2");
    return survival_prob(curve, t1) - survival_prob(curve, t2);
}

template <class Tag>
double forward_rate(const PiecewiseFlatCurve<Tag>& curve, double t) {
    return curve.rate(t);
}

} // namespace survival
