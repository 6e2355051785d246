// Command implementations. Every command is a pure function of Options that
// returns a Report; I/O and exit codes live in app.hpp.
#pragma once

#include "io.hpp"
#include "output.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace survival::cli {

struct Options {
    std::string bonds;
    std::string discount;
    std::string hazard;
    std::string problem;
    std::string out;
    std::optional<double> oasf_bp;
    Format format = Format::table;
    bool per_unit = false;

    // hedge
    std::vector<std::string> risks;
    std::vector<double> accuracy;
    bool spread_based = false;
    std::string long_leg;
    std::string body;

    // scan and bias instrument
    double coupon = 0.05;
    int frequency = 2;
    double maturity = 5.0;
    double recovery = 0.4;
    double rate = 0.04;
    double h_min = 0.0;
    double h_max = 1.0;
    double h_step = 0.005;
    std::vector<double> r_grid{0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};
    std::vector<double> h_grid{0.0, 0.01, 0.02, 0.05, 0.10};

    // factors
    std::vector<double> dy;

    double price_scale() const { return per_unit ? 1.0 : 100.0; }
    const char* price_unit() const { return per_unit ? "per_unit" : "per100"; }
};

inline constexpr double kBp = 1e4;

struct MarketData {
    std::vector<BondRecord> bonds;
    DiscountCurve discount;
    HazardCurve hazard;
};

inline MarketData load_market(const Options& o) {
    if (o.bonds.empty())
        throw InputError("--bonds is required");
    if (o.discount.empty())
        throw InputError("--discount is required");
    if (o.hazard.empty())
        throw InputError("--hazard is required");
    auto bonds = load_bonds(o.bonds);
    auto discount = load_curve<DiscountTag>(o.discount);
    auto hazard = load_curve<HazardTag>(o.hazard);
    return {std::move(bonds), std::move(discount), std::move(hazard)};
}

/// OASF precedence: command-line override, then the bond's own OASF, then
/// calibration to the bond's price, else zero.
inline PricingInputs resolve(const BondRecord& rec, const MarketData& m, const Options& o) {
    double oasf = 0.0;
    if (o.oasf_bp)
        oasf = *o.oasf_bp / kBp;
    else if (rec.oasf)
        oasf = *rec.oasf;
    else if (rec.price) {
        try {
            oasf = calibrate_oasf(rec.bond, m.discount, m.hazard, *rec.price);
        } catch (const NoSolutionError& e) {
            throw NoSolutionError(fmt::format("{}: {}", rec.id, e.what()));
        }
    }
    return {rec.bond, m.discount, m.hazard, oasf};
}

inline std::vector<Cell> bond_cells(const BondRecord& rec) {
    return {rec.id,
            rec.bond.coupon(),
            static_cast<long long>(rec.bond.frequency()),
            rec.bond.maturity(),
            rec.bond.recovery_principal(),
            rec.bond.recovery_coupon()};
}

inline std::vector<Column> bond_columns() {
    return {{"id"}, {"coupon", 5}, {"frequency"}, {"maturity_years", 2}, {"recovery_principal", 2},
            {"recovery_coupon", 2}};
}

template <class... Parts>
std::vector<Cell> concat(std::vector<Cell> head, Parts&&... parts) {
    (head.insert(head.end(), parts.begin(), parts.end()), ...);
    return head;
}

// ---------------------------------------------------------------------------

inline Report cmd_price(const Options& o) {
    const auto m = load_market(o);
    const double scale = o.price_scale();
    Report r;
    r.table.columns = bond_columns();
    for (Column c : std::initializer_list<Column>{{"oasf_bp", 2},
                                                  {"price_exact", 4},
                                                  {"price_continuous", 4},
                                                  {"price_naive", 4},
                                                  {"gap_continuous", 4},
                                                  {"gap_naive", 4}})
        r.table.columns.push_back(c);
    for (const auto& rec : m.bonds) {
        const auto in = resolve(rec, m, o);
        const double exact = price_exact(in);
        const double cont = price_continuous(in);
        const double naive = price_naive_continuous(in);
        r.table.add_row(concat(bond_cells(rec), std::vector<Cell>{in.oasf * kBp, exact * scale, cont * scale,
                                                                  naive * scale, (cont - exact) * scale,
                                                                  (naive - exact) * scale}));
    }
    r.document = {{"command", "price"}, {"price_unit", o.price_unit()}, {"bonds", table_to_json(r.table)}};
    return r;
}

inline Report cmd_implied(const Options& o) {
    const auto m = load_market(o);
    Report r;
    r.table.columns = bond_columns();
    for (Column c : std::initializer_list<Column>{{"oasf_bp", 2}, {"flat_hazard_bp", 2}, {"z_spread_bp", 2}})
        r.table.columns.push_back(c);
    for (const auto& rec : m.bonds) {
        if (!rec.price)
            throw InputError(fmt::format("{}: bond {}: clean_price_per100 required for implied", o.bonds, rec.id));
        const auto in = resolve(rec, m, {});
        double flat = std::numeric_limits<double>::quiet_NaN();
        try {
            flat = calibrate_flat_hazard(rec.bond, m.discount, *rec.price);
        } catch (const NoSolutionError& e) {
            r.warnings.push_back(fmt::format("{}: no flat hazard rate reprices the bond ({})", rec.id, e.what()));
        }
        r.table.add_row(concat(bond_cells(rec), std::vector<Cell>{in.oasf * kBp, flat * kBp,
                                                                  z_spread(rec.bond, m.discount, *rec.price) * kBp}));
    }
    r.document = {{"command", "implied"}, {"bonds", table_to_json(r.table)}};
    if (!r.warnings.empty())
        r.document["warnings"] = r.warnings;
    return r;
}

// ---------------------------------------------------------------------------

/// Multiplier from library units to CLI units for a report field.
inline double boundary_scale(Unit u, const Options& o) {
    switch (u) {
    case Unit::price:
        return o.price_scale();
    case Unit::rate:
        return kBp;
    default:
        return 1.0;
    }
}

inline int boundary_precision(Unit u) {
    switch (u) {
    case Unit::rate:
        return 2;
    case Unit::years2:
        return 2;
    default:
        return 4;
    }
}

inline const ReportField& report_field(const std::string& key) {
    for (const auto& f : kReportFields)
        if (f.name == key)
            return f;
    throw InputError(fmt::format("unknown risk measure \"{}\"", key));
}

inline double boundary_value(const RiskReport& rep, const ReportField& f, const Options& o) {
    return rep.*(f.member) * boundary_scale(f.unit, o);
}

inline Report cmd_risk(const Options& o) {
    const auto m = load_market(o);
    Report r;
    r.table.columns.push_back({"id"});
    for (const auto& f : kReportFields)
        r.table.columns.push_back({std::string(f.name), boundary_precision(f.unit)});
    for (const auto& rec : m.bonds) {
        const auto rep = make_risk_report(resolve(rec, m, o));
        std::vector<Cell> row{rec.id};
        for (const auto& f : kReportFields)
            row.emplace_back(boundary_value(rep, f, o));
        r.table.add_row(std::move(row));
    }
    r.document = {{"command", "risk"},
                  {"price_unit", o.price_unit()},
                  {"rate_unit", "bp"},
                  {"reports", table_to_json(r.table)}};
    return r;
}

// ---------------------------------------------------------------------------

inline double default_accuracy(const std::string& key) {
    switch (report_field(key).unit) {
    case Unit::years:
    case Unit::per_recovery:
        return kDurationAccuracy;
    case Unit::fraction:
        return kVodAccuracy;
    default:
        return 1.0;
    }
}

inline std::size_t bond_index(const std::vector<std::string>& ids, const std::string& key, const char* flag) {
    const auto it = std::find(ids.begin(), ids.end(), key);
    if (it != ids.end())
        return static_cast<std::size_t>(it - ids.begin());
    std::size_t used = 0;
    try {
        const auto i = std::stoul(key, &used);
        if (used == key.size() && i < ids.size())
            return i;
    } catch (const std::exception&) {
    }
    throw InputError(fmt::format("{}: \"{}\" is neither a bond id nor an index", flag, key));
}

/// Sensitivity table from bonds and curves, in CLI units.
inline HedgeInput hedge_input_from_market(const Options& o, const std::vector<std::string>& risks) {
    const auto m = load_market(o);
    HedgeInput in;
    in.risks = risks;
    in.rows.assign(risks.size(), {});
    for (const auto& rec : m.bonds) {
        const auto rep = make_risk_report(resolve(rec, m, o));
        in.bonds.push_back(rec.id);
        for (std::size_t k = 0; k < risks.size(); ++k)
            in.rows[k].push_back(boundary_value(rep, report_field(risks[k]), o));
        in.prices_per100.push_back(rep.price * 100.0);
        in.maturities.push_back(rec.bond.maturity());
        in.mod_durations.push_back(rep.mod_duration);
    }
    return in;
}

inline std::vector<std::string> split_default_risks() { return {"d_r", "d_h", "vod"}; }

inline Report cmd_hedge(const Options& o) {
    HedgeInput in;
    if (!o.problem.empty()) {
        in = load_hedge_problem(o.problem);
        if (!o.risks.empty()) {
            HedgeInput subset = in;
            subset.risks = o.risks;
            subset.rows.clear();
            subset.accuracy.clear();
            for (const auto& key : o.risks) {
                const auto it = std::find(in.risks.begin(), in.risks.end(), key);
                if (it == in.risks.end())
                    throw InputError(fmt::format("{}: risk \"{}\" not in the problem file", o.problem, key));
                const auto k = static_cast<std::size_t>(it - in.risks.begin());
                subset.rows.push_back(in.rows[k]);
                if (!in.accuracy.empty())
                    subset.accuracy.push_back(in.accuracy[k]);
            }
            in = std::move(subset);
        }
    } else {
        in = hedge_input_from_market(o, o.risks.empty() ? split_default_risks() : o.risks);
    }
    for (const auto& key : in.risks)
        report_field(key);
    if (!o.accuracy.empty())
        in.accuracy = o.accuracy;
    if (in.accuracy.empty())
        for (const auto& key : in.risks)
            in.accuracy.push_back(default_accuracy(key));
    if (in.accuracy.size() != in.risks.size())
        throw InputError(fmt::format("--accuracy: expected {} values, one per risk", in.risks.size()));
    if (!o.long_leg.empty())
        in.long_leg = o.long_leg;

    const auto n = static_cast<Eigen::Index>(in.bonds.size());
    const auto k = static_cast<Eigen::Index>(in.risks.size());
    HedgeProblem problem;
    problem.sensitivities.resize(k, n);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            problem.sensitivities(i, j) = in.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    problem.target_accuracy = Eigen::Map<const Eigen::VectorXd>(in.accuracy.data(), k);
    if (!in.prices_per100.empty())
        problem.bond_prices = Eigen::Map<const Eigen::VectorXd>(in.prices_per100.data(), n) / 100.0;
    if (in.long_leg)
        problem.long_leg = static_cast<Eigen::Index>(bond_index(in.bonds, *in.long_leg, "--long"));

    const auto sol = solve_hedge(problem);
    Report r;
    if (sol.degenerate)
        r.warnings.push_back(fmt::format(
            "degenerate: sensitivity system has rank {} < {} bonds; minimum-norm trade reported", sol.rank, n));

    std::optional<BarbellWeights> barbell;
    double barbell_residual = 0.0;
    if (o.spread_based) {
        if (n != 3)
            throw InputError("--spread-based needs exactly three bonds");
        if (in.mod_durations.empty())
            throw InputError("--spread-based needs modified durations (mod_durations in the problem file)");
        std::size_t body = 1;
        if (!o.body.empty())
            body = bond_index(in.bonds, o.body, "--body");
        else if (in.long_leg)
            body = static_cast<std::size_t>(*problem.long_leg);
        barbell = solve_spread_based_barbell({in.mod_durations[0], in.mod_durations[1], in.mod_durations[2]}, body);
        for (std::size_t i = 0; i < 3; ++i)
            barbell_residual += barbell->weights[i] * in.mod_durations[i];
    }

    // Figure-style table: one row per bond, then cash, then the trade total.
    const bool with_maturity = !in.maturities.empty();
    const bool with_price = !in.prices_per100.empty();
    auto& t = r.table;
    t.columns.push_back({"Description"});
    if (with_maturity)
        t.columns.push_back({"Maturity (yrs)", 2});
    if (with_price)
        t.columns.push_back({"Price", 2});
    for (const auto& key : in.risks)
        t.columns.push_back({key, 2});
    t.columns.push_back({"Portfolio MV %", 2});
    if (barbell) {
        t.columns.push_back({"Mod. Adj. Dur.", 2});
        t.columns.push_back({"Spread MV %", 2});
    }
    auto row_for = [&](std::string name, std::optional<double> maturity, std::optional<double> price,
                       std::vector<double> risks, double weight, std::optional<double> mod_d, double spread_w) {
        std::vector<Cell> row{std::move(name)};
        if (with_maturity)
            row.emplace_back(maturity ? Cell(*maturity) : Cell(std::string()));
        if (with_price)
            row.emplace_back(price ? Cell(*price) : Cell(std::string()));
        for (double v : risks)
            row.emplace_back(v);
        row.emplace_back(100.0 * weight);
        if (barbell) {
            row.emplace_back(mod_d ? Cell(*mod_d) : Cell(std::string()));
            row.emplace_back(100.0 * spread_w);
        }
        t.add_row(std::move(row));
    };
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        std::vector<double> risks;
        for (std::size_t i = 0; i < in.risks.size(); ++i)
            risks.push_back(in.rows[i][ju]);
        row_for(in.bonds[ju], with_maturity ? std::optional(in.maturities[ju]) : std::nullopt,
                with_price ? std::optional(in.prices_per100[ju]) : std::nullopt, risks, sol.weights(j),
                barbell ? std::optional(in.mod_durations[ju]) : std::nullopt,
                barbell ? barbell->weights[ju] : 0.0);
    }
    row_for("Cash", 0.0, 100.0, std::vector<double>(in.risks.size(), 0.0), sol.cash, 0.0, 0.0);
    std::vector<double> residuals(sol.residuals.data(), sol.residuals.data() + sol.residuals.size());
    row_for("Total: Portfolio", std::nullopt, std::nullopt, residuals, sol.weights.sum() + sol.cash,
            barbell ? std::optional(barbell_residual) : std::nullopt, 0.0);
    r.title = "Market-neutral trade (survival-based)";
    for (const auto& w : r.warnings)
        r.footer.push_back("warning: " + w);

    // JSON: the problem (re-parsable as a hedge problem file) plus the solution.
    json doc;
    doc["command"] = "hedge";
    doc["bonds"] = in.bonds;
    doc["risks"] = in.risks;
    doc["accuracy"] = in.accuracy;
    doc["sensitivities"] = json::object();
    for (std::size_t i = 0; i < in.risks.size(); ++i)
        doc["sensitivities"][in.risks[i]] = in.rows[i];
    if (with_price)
        doc["prices_per100"] = in.prices_per100;
    if (with_maturity)
        doc["maturities"] = in.maturities;
    if (!in.mod_durations.empty())
        doc["mod_durations"] = in.mod_durations;
    if (in.long_leg)
        doc["long"] = *in.long_leg;
    json s;
    s["weights"] = std::vector<double>(sol.weights.data(), sol.weights.data() + n);
    s["cash"] = sol.cash;
    s["raw"] = std::vector<double>(sol.raw.data(), sol.raw.data() + n);
    s["normalizer"] = sol.normalizer;
    s["residuals"] = json::object();
    for (std::size_t i = 0; i < in.risks.size(); ++i)
        s["residuals"][in.risks[i]] = residuals[i];
    if (sol.quantities.size() == n)
        s["quantities"] = std::vector<double>(sol.quantities.data(), sol.quantities.data() + n);
    s["rank"] = sol.rank;
    s["degenerate"] = sol.degenerate;
    s["flipped"] = sol.flipped;
    doc["solution"] = s;
    if (barbell) {
        doc["spread_based"] = {{"weights", barbell->weights},
                               {"cash", barbell->cash},
                               {"residual_mod_duration", barbell_residual}};
    }
    doc["warnings"] = r.warnings;
    r.document = std::move(doc);
    return r;
}

// ---------------------------------------------------------------------------

inline Report cmd_scan(const Options& o) {
    if (!(o.h_step > 0.0) || o.h_max < o.h_min || o.h_min < 0.0)
        throw InputError(fmt::format("empty hazard grid: --h-min {} --h-max {} --h-step {}", o.h_min, o.h_max,
                                     o.h_step));
    std::optional<Bond> bond;
    std::optional<DiscountCurve> discount;
    if (!o.bonds.empty()) {
        bond = load_bonds(o.bonds).front().bond;
    } else {
        try {
            bond.emplace(o.coupon, o.frequency, o.maturity, o.recovery);
        } catch (const DomainError& e) {
            throw InputError(fmt::format("instrument options: {}", e.what()));
        }
    }
    if (!o.discount.empty())
        discount = load_curve<DiscountTag>(o.discount);
    else
        discount = DiscountCurve::flat(o.rate);

    const double scale = o.price_scale();
    const auto count = static_cast<long>(std::floor((o.h_max - o.h_min) / o.h_step + 1e-9)) + 1;
    Report r;
    r.table.columns = {{"h", 4},  {"bcds_bp", 2}, {"price", 4}, {"d_r", 4},
                       {"d_h", 4}, {"d_recovery", 4}, {"rpv01", 4}, {"vod", 4}};
    for (long i = 0; i < count; ++i) {
        const double h = o.h_min + static_cast<double>(i) * o.h_step;
        const PricingInputs in{*bond, *discount, HazardCurve::flat(h), 0.0};
        const double p = price_exact(in);
        r.table.add_row({h, bcds(in.discount, in.hazard, bond->maturity(), bond->recovery_principal()) * kBp,
                         p * scale, duration_survival(in), duration_hazard(in), duration_recovery(in).exact,
                         rpv01(in.discount, in.hazard, bond->maturity()), vod(p, bond->recovery_principal())});
    }
    r.document = {{"command", "scan"}, {"price_unit", o.price_unit()}, {"rows", table_to_json(r.table)}};
    return r;
}

inline Report cmd_bias(const Options& o) {
    if (o.r_grid.empty() || o.h_grid.empty())
        throw InputError("bias needs non-empty --r-grid and --h-grid");
    if (!(o.maturity > 0.0))
        throw InputError("--maturity must be > 0");
    Report r;
    r.table.columns = {{"r", 4},          {"h", 4},        {"s_exact_bp", 3}, {"s_approx_bp", 3},
                       {"gap_bp", 3},     {"ds_dr_sign"}, {"status"}};
    for (double h : o.h_grid) {
        std::vector<double> exact(o.r_grid.size(), std::numeric_limits<double>::quiet_NaN());
        std::vector<std::string> status(o.r_grid.size(), "ok");
        for (std::size_t i = 0; i < o.r_grid.size(); ++i) {
            try {
                exact[i] = conventional_spread_exact(o.coupon, o.r_grid[i], h, o.recovery, o.maturity);
            } catch (const NoSolutionError&) {
                status[i] = "no root";
                r.warnings.push_back(fmt::format("no conventional spread at r={}, h={}", o.r_grid[i], h));
            }
        }
        for (std::size_t i = 0; i < o.r_grid.size(); ++i) {
            long long sign = 0;
            if (o.r_grid.size() > 1) {
                const std::size_t a = i + 1 < o.r_grid.size() ? i : i - 1;
                const double slope = (exact[a + 1] - exact[a]) / (o.r_grid[a + 1] - o.r_grid[a]);
                sign = std::isfinite(slope) ? (slope > 0.0) - (slope < 0.0) : 0;
            }
            const double approx = conventional_spread_approx(o.coupon, o.r_grid[i], h, o.recovery, o.maturity);
            r.table.add_row({o.r_grid[i], h, exact[i] * kBp, approx * kBp, (approx - exact[i]) * kBp, sign,
                             status[i]});
        }
    }
    r.document = {{"command", "bias"},
                  {"coupon", o.coupon},
                  {"maturity_years", o.maturity},
                  {"recovery_principal", o.recovery},
                  {"rows", table_to_json(r.table)}};
    return r;
}

inline Report cmd_factors(const Options& o) {
    if (o.dy.size() != 5)
        throw InputError(fmt::format("--dy: expected five yield changes (2/5/10/20/30y), got {}", o.dy.size()));
    const auto f = treasury_factors({o.dy[0], o.dy[1], o.dy[2], o.dy[3], o.dy[4]});
    Report r;
    r.table.columns = {{"shift_bp", 2}, {"twist_bp", 2}};
    r.table.add_row({f.shift, f.twist});
    r.document = {{"command", "factors"}, {"shift_bp", f.shift}, {"twist_bp", f.twist}};
    return r;
}

} // namespace survival::cli
