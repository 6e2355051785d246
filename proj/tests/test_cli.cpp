#include "cli/app.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace survival::cli {
namespace {

const std::string kData = SURVIVAL_DATA_DIR;

std::string data(const std::string& name) { return kData + "/" + name; }

struct Result {
    int code;
    std::string out;
    std::string err;

    json doc() const { return json::parse(out); }
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("survival_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }

    std::string write(const std::string& name, const std::string& text) const {
        const auto p = (path_ / name).string();
        std::ofstream(p) << text;
        return p;
    }

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

std::vector<std::string> kft(std::vector<std::string> head) {
    for (const char* s : {"--bonds", "", "--discount", "", "--hazard", ""})
        head.emplace_back(s);
    const auto n = head.size();
    head[n - 5] = data("kft_bonds.json");
    head[n - 3] = data("libor_2004_06.json");
    head[n - 1] = data("kft_hazard.json");
    return head;
}

// ---------------------------------------------------------------------------
// price / implied

TEST(CliPriceTest, RisklessMatchesTextbookSum) {
    const auto r = cli({"price", "--bonds", data("figure2_bond.json"), "--discount", data("flat_4pct.json"),
                        "--hazard", data("riskless_hazard.json"), "--format", "json", "--per-unit"});
    ASSERT_EQ(r.code, 0) << r.err;
    double expected = 0.0;
    for (double t : oracle::payment_times(5.0, 2))
        expected += 0.025 * std::exp(-0.04 * t);
    expected += std::exp(-0.2);
    EXPECT_NEAR(r.doc()["bonds"][0]["price_exact"].get<double>(), expected, 1e-14);
}

TEST(CliPriceTest, PerHundredIsExactlyHundredTimesPerUnit) {
    const auto a = cli(kft({"price", "--format", "json"}));
    const auto b = cli(kft({"price", "--format", "json", "--per-unit"}));
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_EQ(a.doc()["bonds"][i]["price_exact"].get<double>(),
                  b.doc()["bonds"][i]["price_exact"].get<double>() * 100.0);
    EXPECT_EQ(a.doc()["price_unit"], "per100");
    EXPECT_NEAR(a.doc()["bonds"][1]["price_exact"].get<double>(), 104.90, 1e-9);
}

TEST(CliPriceTest, CsvBondsMatchJsonBonds) {
    const auto a = cli(kft({"price", "--format", "csv"}));
    auto args = kft({"price", "--format", "csv"});
    *(std::find(args.begin(), args.end(), "--bonds") + 1) = data("kft_bonds.csv");
    const auto b = cli(args);
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(CliPriceTest, ImpliedOasfRoundTrips) {
    TempDir dir;
    const auto implied = cli(kft({"implied", "--format", "json"}));
    ASSERT_EQ(implied.code, 0) << implied.err;
    const auto bonds = dir.write("implied.json", implied.out);
    const auto priced = cli({"price", "--bonds", bonds, "--discount", data("libor_2004_06.json"), "--hazard",
                             data("kft_hazard.json"), "--format", "json"});
    ASSERT_EQ(priced.code, 0) << priced.err;
    const double published[] = {102.90, 104.90, 100.44};
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_NEAR(priced.doc()["bonds"][i]["price_exact"].get<double>(), published[i], 1e-9);
}

TEST(CliPriceTest, OasfOverrideZeroIgnoresPrice) {
    const auto r = cli(kft({"price", "--format", "json", "--oasf-bp", "0"}));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.doc()["bonds"][0]["oasf_bp"].get<double>(), 0.0);
}

TEST(CliPriceTest, PriceOutputReparsesAsBondFile) {
    TempDir dir;
    const auto first = cli(kft({"price", "--format", "json"}));
    const auto again = cli({"price", "--bonds", dir.write("p.json", first.out), "--discount",
                            data("libor_2004_06.json"), "--hazard", data("kft_hazard.json"), "--format", "json"});
    ASSERT_EQ(again.code, 0) << again.err;
    EXPECT_EQ(first.doc()["bonds"], again.doc()["bonds"]);
}

// ---------------------------------------------------------------------------
// errors and exit codes

TEST(CliErrorTest, MalformedJsonNamesFile) {
    TempDir dir;
    const auto bad = dir.write("bad.json", "{\"bonds\": [");
    const auto r = cli({"price", "--bonds", bad, "--discount", data("flat_4pct.json"), "--hazard",
                        data("riskless_hazard.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(bad), std::string::npos) << r.err;
}

TEST(CliErrorTest, WrongFieldTypeNamesFileAndField) {
    TempDir dir;
    const auto bad = dir.write("bad.json", R"([{"id": "X", "coupon": "five", "frequency": 2,
        "maturity_years": 5, "recovery_principal": 0.4}])");
    const auto r = cli({"price", "--bonds", bad, "--discount", data("flat_4pct.json"), "--hazard",
                        data("riskless_hazard.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(bad + ": bonds[0].coupon"), std::string::npos) << r.err;
}

TEST(CliErrorTest, PriceAndOasfTogetherRejected) {
    TempDir dir;
    const auto bad = dir.write("both.json", R"([{"id": "X", "coupon": 0.05, "frequency": 2,
        "maturity_years": 5, "recovery_principal": 0.4, "clean_price_per100": 99, "oasf_bp": 10}])");
    const auto r = cli({"price", "--bonds", bad, "--discount", data("flat_4pct.json"), "--hazard",
                        data("riskless_hazard.json")});
    EXPECT_EQ(r.code, 2);
}

TEST(CliErrorTest, MissingCurveFile) {
    const auto r = cli({"price", "--bonds", data("figure2_bond.json"), "--discount", data("nope.json"),
                        "--hazard", data("riskless_hazard.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("nope.json"), std::string::npos);
    EXPECT_EQ(cli({"price", "--bonds", data("figure2_bond.json")}).code, 2);
}

TEST(CliErrorTest, CurveKindMismatch) {
    const auto r = cli({"price", "--bonds", data("figure2_bond.json"), "--discount", data("kft_hazard.json"),
                        "--hazard", data("riskless_hazard.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("kind"), std::string::npos);
}

TEST(CliErrorTest, UnattainableCalibrationIsNumericalFailure) {
    TempDir dir;
    const auto rich = dir.write("rich.json", R"([{"id": "RICH", "coupon": 0.05, "frequency": 2,
        "maturity_years": 5, "recovery_principal": 0.4, "clean_price_per100": 5000}])");
    const auto r = cli({"price", "--bonds", rich, "--discount", data("flat_4pct.json"), "--hazard",
                        data("riskless_hazard.json")});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("RICH"), std::string::npos);
}

TEST(CliErrorTest, ParseErrorsAndHelp) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"price", "--format", "xml"}).code, 2);
    const auto help = cli({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("hedge"), std::string::npos);
}

// ---------------------------------------------------------------------------
// risk

TEST(CliRiskTest, KftDurationsNearPublished) {
    const auto r = cli(kft({"risk", "--format", "json"}));
    ASSERT_EQ(r.code, 0) << r.err;
    const double published[] = {2.22, 6.24, 11.64};
    const auto reports = r.doc()["reports"];
    ASSERT_EQ(reports.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(reports[i]["d_r"].get<double>(), published[i], 0.15);
        EXPECT_LT(reports[i]["d_h"].get<double>(), reports[i]["d_r"].get<double>());
    }
    for (const auto& f : kReportFields)
        EXPECT_TRUE(reports[0].contains(std::string(f.name))) << f.name;
}

TEST(CliRiskTest, RatesInBasisPoints) {
    const auto bp = cli(kft({"risk", "--format", "json"})).doc()["reports"][2];
    const auto in = cli(kft({"implied", "--format", "json"})).doc()["bonds"][2];
    EXPECT_NEAR(bp["z_spread"].get<double>(), in["z_spread_bp"].get<double>(), 1e-9);
    EXPECT_GT(bp["bcds"].get<double>(), 10.0);
}

TEST(CliRiskTest, ZeroCouponRisklessDurationIsMaturity) {
    const auto r = cli({"risk", "--bonds", data("zero_coupon.json"), "--discount", data("flat_4pct.json"),
                        "--hazard", data("riskless_hazard.json"), "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.doc()["reports"][0]["d_r"].get<double>(), 7.0, 1e-12);
}

TEST(CliRiskTest, DistressedDurationWellBelowModified) {
    const auto r = cli({"risk", "--bonds", data("distressed.json"), "--discount", data("flat_4pct.json"),
                        "--hazard", data("distressed_hazard.json"), "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rep = r.doc()["reports"][0];
    EXPECT_NEAR(rep["price"].get<double>(), 45.0, 1e-8);
    EXPECT_LT(rep["d_r"].get<double>(), 0.7 * rep["mod_duration"].get<double>());
}

TEST(CliRiskTest, CsvHeaderAndColumnOrder) {
    const auto r = cli(kft({"risk", "--format", "csv"}));
    ASSERT_EQ(r.code, 0);
    std::string expected = "id";
    for (const auto& f : kReportFields)
        expected += "," + std::string(f.name);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), expected);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

// ---------------------------------------------------------------------------
// hedge

TEST(CliHedgeTest, FigureThreeProblemFile) {
    const auto r = cli({"hedge", "--problem", data("figure3_problem.json"), "--spread-based", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto s = r.doc()["solution"];
    const double published[] = {-0.5923, 0.9744, -0.4077};
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_NEAR(s["weights"][i].get<double>(), published[i], 0.01);
    EXPECT_NEAR(s["cash"].get<double>(), 0.0256, 0.005);
    const auto sb = r.doc()["spread_based"]["weights"];
    EXPECT_NEAR(sb[0].get<double>(), -0.6004, 0.001);
    EXPECT_EQ(sb[1].get<double>(), 1.0);
    EXPECT_NEAR(sb[2].get<double>(), -0.3996, 0.001);
}

TEST(CliHedgeTest, TableLayout) {
    const auto r = cli({"hedge", "--problem", data("figure3_problem.json"), "--spread-based"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* s : {"Description", "Maturity (yrs)", "Price", "Portfolio MV %", "Mod. Adj. Dur.", "Cash",
                          "Total: Portfolio", "KFT 6.25 6/01/2012", "97.5"})
        EXPECT_NE(r.out.find(s), std::string::npos) << s;
}

TEST(CliHedgeTest, SingleBondIsLongAgainstCash) {
    TempDir dir;
    const auto p = dir.write("one.json", R"({"bonds": ["A"], "risks": [], "sensitivities": {}})");
    const auto r = cli({"hedge", "--problem", p, "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.doc()["solution"]["weights"][0].get<double>(), 1.0);
    EXPECT_EQ(r.doc()["solution"]["cash"].get<double>(), -1.0);
}

TEST(CliHedgeTest, IdenticalBondsWarn) {
    const auto r = cli({"hedge", "--problem", data("identical_bonds_problem.json")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("warning: degenerate"), std::string::npos);
    EXPECT_NE(r.err.find("degenerate"), std::string::npos);
    const auto j = cli({"hedge", "--problem", data("identical_bonds_problem.json"), "--format", "json"});
    EXPECT_TRUE(j.doc()["solution"]["degenerate"].get<bool>());
    EXPECT_EQ(j.doc()["warnings"].size(), 1u);
}

TEST(CliHedgeTest, JsonOutputReparsesAsProblem) {
    TempDir dir;
    const auto first = cli({"hedge", "--problem", data("figure3_problem.json"), "--format", "json"});
    const auto again = cli({"hedge", "--problem", dir.write("h.json", first.out), "--format", "json"});
    ASSERT_EQ(again.code, 0) << again.err;
    EXPECT_EQ(first.doc()["solution"], again.doc()["solution"]);
}

TEST(CliHedgeTest, FromBondsAndCurves) {
    const auto r = cli(kft({"hedge", "--risks", "d_r,d_h,vod", "--long", "KFT 6.25 6/01/2012", "--format", "json"}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto w = r.doc()["solution"]["weights"];
    EXPECT_GT(w[1].get<double>(), 0.0);
    EXPECT_LT(w[0].get<double>(), 0.0);
    EXPECT_LT(w[2].get<double>(), 0.0);
    EXPECT_NEAR(w[1].get<double>(), 0.9744, 0.05);
}

TEST(CliHedgeTest, UnknownRiskAndLegRejected) {
    EXPECT_EQ(cli({"hedge", "--problem", data("figure3_problem.json"), "--risks", "d_q"}).code, 2);
    EXPECT_EQ(cli({"hedge", "--problem", data("figure3_problem.json"), "--long", "XYZ"}).code, 2);
    EXPECT_EQ(cli({"hedge", "--problem", data("figure3_problem.json"), "--accuracy", "0.1"}).code, 2);
}

// ---------------------------------------------------------------------------
// scan / bias / factors

TEST(CliScanTest, FigureTwoOrderings) {
    const auto r = cli({"scan", "--format", "json", "--per-unit"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = r.doc()["rows"];
    ASSERT_EQ(rows.size(), 201u);
    const auto h0 = rows[0];
    EXPECT_EQ(h0["h"].get<double>(), 0.0);
    EXPECT_NEAR(h0["vod"].get<double>(), 1.0 - 0.4 / h0["price"].get<double>(), 1e-15);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(rows[i]["d_h"].get<double>(), rows[i]["d_r"].get<double>());
        EXPECT_LT(rows[i]["d_r"].get<double>(), rows[i - 1]["d_r"].get<double>());
        EXPECT_LT(rows[i]["d_h"].get<double>(), rows[i - 1]["d_h"].get<double>());
        EXPECT_GT(rows[i]["d_recovery"].get<double>(), rows[i - 1]["d_recovery"].get<double>());
    }
}

TEST(CliScanTest, SinglePointAndEmptyGrid) {
    const auto one = cli({"scan", "--h-min", "0.1", "--h-max", "0.1", "--format", "csv"});
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(std::count(one.out.begin(), one.out.end(), '\n'), 2);
    EXPECT_EQ(cli({"scan", "--h-min", "0.2", "--h-max", "0.1"}).code, 2);
    EXPECT_EQ(cli({"scan", "--h-step", "0"}).code, 2);
}

TEST(CliBiasTest, BoundaryRowsAndNegativeCoMovement) {
    const auto r = cli({"bias", "--coupon", "0.08", "--maturity", "10", "--recovery", "0.4", "--h-grid", "0,0.03",
                        "--r-grid", "0.02,0.04,0.06,0.08", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& row : r.doc()["rows"]) {
        if (row["h"].get<double>() == 0.0) {
            EXPECT_NEAR(row["s_exact_bp"].get<double>(), 0.0, 1e-6);
            EXPECT_EQ(row["s_approx_bp"].get<double>(), 0.0);
        } else {
            EXPECT_EQ(row["ds_dr_sign"].get<long long>(), -1);
        }
    }
}

TEST(CliBiasTest, ParCouponDiagonalIsCreditTriangle) {
    // C = r + h(1 - R_p) zeroes the correction term.
    const auto r = cli({"bias", "--coupon", "0.058", "--h-grid", "0.03", "--r-grid", "0.04", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(r.doc()["rows"][0]["s_approx_bp"].get<double>(), 0.03 * 0.6 * 1e4, 1e-9);
}

TEST(CliFactorsTest, ShiftAndTwist) {
    const auto r = cli({"factors", "--dy", "2,5,10,20,30", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    EXPECT_DOUBLE_EQ(r.doc()["shift_bp"].get<double>(), 13.4);
    EXPECT_DOUBLE_EQ(r.doc()["twist_bp"].get<double>(), -7.1);
    const auto neg = cli({"factors", "--dy", "-10", "-5", "0", "5", "10", "--format", "json"});
    ASSERT_EQ(neg.code, 0) << neg.err;
    EXPECT_DOUBLE_EQ(neg.doc()["twist_bp"].get<double>(), -5.0);
    EXPECT_EQ(cli({"factors", "--dy", "1,2,3"}).code, 2);
}

TEST(CliOutputTest, OutFileMatchesStdout) {
    TempDir dir;
    const auto path = dir.file("out.csv");
    const auto to_stdout = cli({"factors", "--dy", "1,2,3,4,5", "--format", "csv"});
    ASSERT_EQ(cli({"factors", "--dy", "1,2,3,4,5", "--format", "csv", "--out", path}).code, 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), to_stdout.out);
}

} // namespace
} // namespace survival::cli
