#pragma once

#include "survival/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace survival {

/// Fixed-coupon bullet bond, face normalized to 1.
///
/// Time is a pure year fraction from the valuation date. The coupon
/// schedule is generated backward from maturity, so a non-integer T*f gives
/// a short first period that still pays the full C/f coupon.
class Bond {
public:
    Bond(double coupon, int frequency, double maturity, double recovery_principal,
         double recovery_coupon = 0.0)
        : coupon_(coupon), frequency_(frequency), maturity_(maturity),
          recovery_principal_(recovery_principal), recovery_coupon_(recovery_coupon) {
        if (!(maturity_ > 0.0) || !std::isfinite(maturity_))
            throw DomainError("bond maturity must be > 0");
        if (frequency_ < 1)
            throw DomainError("bond frequency must be >= 1");
        if (!(coupon_ >= 0.0) || !std::isfinite(coupon_))
            throw DomainError("bond coupon must be >= 0");
        if (!(recovery_principal_ >= 0.0 && recovery_principal_ <= 1.0))
            throw DomainError("principal recovery must lie in [0, 1]");
        if (!(recovery_coupon_ >= 0.0 && recovery_coupon_ <= 1.0))
            throw DomainError("coupon recovery must lie in [0, 1]");
    }

    double coupon() const { return coupon_; }
    int frequency() const { return frequency_; }
    double maturity() const { return maturity_; }
    double recovery_principal() const { return recovery_principal_; }
    double recovery_coupon() const { return recovery_coupon_; }

    /// Coupon paid on each scheduled date, C/f.
    double coupon_amount() const { return coupon_ / frequency_; }

    /// Number of scheduled dates, ceil(T*f). The small slack absorbs
    /// representation error in products like 2.34 * 2 = 4.680000000000001.
    int payment_count() const {
        return static_cast<int>(std::ceil(maturity_ * frequency_ - 1e-9));
    }

    /// A copy with a different principal recovery (same validation).
    Bond with_recovery_principal(double rp) const {
        return Bond(coupon_, frequency_, maturity_, rp, recovery_coupon_);
    }

private:
    double coupon_;
    int frequency_;
    double maturity_;
    double recovery_principal_;
    double recovery_coupon_;
};

struct CashFlow {
    double time;      // years
    double coupon;    // per unit face
    double principal; // per unit face; 1 on the final date, else 0

    double total() const { return coupon + principal; }
};

/// Payment dates t_i = T - (N - i)/f, i = 1..N, with coupon C/f on each and
/// the unit principal on t_N = T.
inline std::vector<CashFlow> schedule(const Bond& bond) {
    const int n = bond.payment_count();
    std::vector<CashFlow> flows;
    flows.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const double t = i == n ? bond.maturity()
                                : bond.maturity() - static_cast<double>(n - i) / bond.frequency();
        flows.push_back({t, bond.coupon_amount(), i == n ? 1.0 : 0.0});
    }
    return flows;
}

/// A holding: quantity in face units (negative when short) at a clean
/// market price per unit face.
struct Position {
    Position(Bond b, double q, double p, std::string issuer_name = {})
        : bond(std::move(b)), quantity(q), price(p), issuer(std::move(issuer_name)) {
        if (quantity == 0.0 || !std::isfinite(quantity))
            throw DomainError("position quantity must be finite and non-zero");
        if (!(price > 0.0) || !std::isfinite(price))
            throw DomainError("position price must be > 0");
    }

    Bond bond;
    double quantity;
    double price;
    std::string issuer;

    double market_value() const { return quantity * price; }
};

} // namespace survival
