// Command-line grammar, dispatch and the exit-code contract:
// 0 success, 2 input or parse error, 3 numerical failure.
#pragma once

#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace survival::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalError = 3 };

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Survival-based credit bond analytics", "survival"};
    app.require_subcommand(1);
    Options o;
    std::string format = "table";

    auto common = [&](CLI::App* sub, bool market) {
        if (market) {
            sub->add_option("--bonds", o.bonds, "Bond file (JSON or CSV)");
            sub->add_option("--discount", o.discount, "Forward-rate curve file");
            sub->add_option("--hazard", o.hazard, "Hazard-rate curve file");
            sub->add_option("--oasf-bp", o.oasf_bp, "OASF override for every bond, bp");
        }
        sub->add_option("--out", o.out, "Write output to this file");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
        sub->add_flag("--per-unit", o.per_unit, "Prices per unit face instead of per 100");
    };

    std::map<CLI::App*, std::function<Report(const Options&)>> commands;

    auto* price = app.add_subcommand("price", "Exact, continuous and naive prices");
    common(price, true);
    commands[price] = cmd_price;

    auto* risk = app.add_subcommand("risk", "Full risk report per bond");
    common(risk, true);
    commands[risk] = cmd_risk;

    auto* implied = app.add_subcommand("implied", "OASF, flat hazard and z-spread implied by bond prices");
    common(implied, true);
    commands[implied] = cmd_implied;

    auto* hedge = app.add_subcommand("hedge", "Market-neutral long-short trade");
    common(hedge, true);
    hedge->add_option("--problem", o.problem, "Sensitivity-table problem file (JSON)");
    hedge->add_option("--risks", o.risks, "Risk measures to neutralize")->delimiter(',');
    hedge->add_option("--accuracy", o.accuracy, "Target accuracy per risk")->delimiter(',');
    hedge->add_flag("--spread-based", o.spread_based, "Also build the modified-duration barbell");
    hedge->add_option("--long", o.long_leg, "Bond (id or index) held long");
    hedge->add_option("--body", o.body, "Barbell body bond (id or index)");
    commands[hedge] = cmd_hedge;

    auto instrument = [&](CLI::App* sub) {
        sub->add_option("--coupon", o.coupon, "Annual coupon rate")->capture_default_str();
        sub->add_option("--maturity", o.maturity, "Maturity, years")->capture_default_str();
        sub->add_option("--recovery", o.recovery, "Principal recovery")->capture_default_str();
    };

    auto* scan = app.add_subcommand("scan", "Risk measures across a flat hazard-rate grid");
    common(scan, false);
    instrument(scan);
    scan->add_option("--bonds", o.bonds, "Use the first bond of this file instead");
    scan->add_option("--discount", o.discount, "Forward-rate curve file (default flat --rate)");
    scan->add_option("--frequency", o.frequency, "Coupons per year")->capture_default_str();
    scan->add_option("--rate", o.rate, "Flat forward rate")->capture_default_str();
    scan->add_option("--h-min", o.h_min)->capture_default_str();
    scan->add_option("--h-max", o.h_max)->capture_default_str();
    scan->add_option("--h-step", o.h_step)->capture_default_str();
    commands[scan] = cmd_scan;

    auto* bias = app.add_subcommand("bias", "Conventional spread: exact solve vs first-order formula");
    common(bias, false);
    instrument(bias);
    bias->add_option("--r-grid", o.r_grid, "Flat rates")->delimiter(',');
    bias->add_option("--h-grid", o.h_grid, "Flat hazard rates")->delimiter(',');
    commands[bias] = cmd_bias;

    auto* factors = app.add_subcommand("factors", "Treasury shift and twist from 2/5/10/20/30y changes");
    common(factors, false);
    factors->add_option("--dy", o.dy, "Five yield changes, bp")->delimiter(',')->required();
    commands[factors] = cmd_factors;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    o.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::table;

    try {
        CLI::App* chosen = app.get_subcommands().front();
        const Report report = commands.at(chosen)(o);
        for (const auto& w : report.warnings)
            err << "warning: " << w << '\n';
        if (o.out.empty()) {
            write_report(out, report, o.format);
        } else {
            std::ofstream file(o.out);
            if (!file)
                throw InputError(fmt::format("{}: cannot open for writing", o.out));
            write_report(file, report, o.format);
        }
        return kOk;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const NoSolutionError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const DegenerateTradeError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"survival"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace survival::cli
