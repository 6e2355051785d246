// Input files: bonds, curves and hedge problems (JSON or CSV).
#pragma once

#include "survival/survival.hpp"

#include <json.hpp>

#include <fmt/core.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace survival::cli {

using json = nlohmann::ordered_json;

/// Malformed or missing input. Maps to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError(fmt::format("{}: cannot open file", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool is_csv(const std::string& path) {
    auto ext = std::filesystem::path(path).extension().string();
    for (auto& c : ext)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".csv";
}

inline json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(fmt::format("{}: invalid JSON: {}", source, e.what()));
    }
}

// ---------------------------------------------------------------------------
// Field access with diagnostics that name the file and the field

class Fields {
public:
    Fields(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (!obj_.is_object())
            fail("", "expected an object");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw InputError(key.empty() ? fmt::format("{}: {}", where_, what)
                                     : fmt::format("{}.{}: {}", where_, key, what));
    }

    bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

    double number(const std::string& key) const {
        if (!has(key))
            fail(key, "missing required field");
        return as_number(key);
    }

    std::optional<double> optional_number(const std::string& key) const {
        if (!has(key))
            return std::nullopt;
        return as_number(key);
    }

    int integer(const std::string& key) const {
        const double v = number(key);
        if (v != std::floor(v))
            fail(key, "expected an integer");
        return static_cast<int>(v);
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback)
                return *fallback;
            fail(key, "missing required field");
        }
        if (!obj_.at(key).is_string())
            fail(key, "expected a string");
        return obj_.at(key).get<std::string>();
    }

    const json& array(const std::string& key) const {
        if (!has(key))
            fail(key, "missing required field");
        if (!obj_.at(key).is_array())
            fail(key, "expected an array");
        return obj_.at(key);
    }

    std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        const auto& a = array(key);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_number())
                fail(fmt::format("{}[{}]", key, i), "expected a number");
            out.push_back(a[i].get<double>());
        }
        return out;
    }

    std::vector<std::string> strings(const std::string& key) const {
        std::vector<std::string> out;
        const auto& a = array(key);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_string())
                fail(fmt::format("{}[{}]", key, i), "expected a string");
            out.push_back(a[i].get<std::string>());
        }
        return out;
    }

    const std::string& where() const { return where_; }

private:
    double as_number(const std::string& key) const {
        const auto& v = obj_.at(key);
        if (!v.is_number())
            fail(key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d))
            fail(key, "expected a finite number");
        return d;
    }

    const json& obj_;
    std::string where_;
};

// ---------------------------------------------------------------------------
// CSV

/// Splits comma-separated text into trimmed cells. Quoting is not supported.
inline std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        if (trim(line).empty() || trim(line)[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ','))
            cells.push_back(trim(cell));
        if (!line.empty() && line.back() == ',')
            cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

/// CSV rows as JSON objects keyed by the header. Numeric-looking cells become
/// numbers, empty cells are omitted.
inline json csv_to_objects(const std::string& text, const std::string& source) {
    const auto rows = read_csv(text);
    if (rows.empty())
        throw InputError(fmt::format("{}: empty CSV (header row required)", source));
    const auto& header = rows.front();
    json out = json::array();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() > header.size())
            throw InputError(fmt::format("{}: line {}: more cells than header columns", source, r + 1));
        json obj = json::object();
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            const auto& cell = rows[r][c];
            if (cell.empty())
                continue;
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == cell.size())
                obj[header[c]] = v;
            else
                obj[header[c]] = cell;
        }
        out.push_back(std::move(obj));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bonds

struct BondRecord {
    std::string id;
    std::string issuer;
    Bond bond;
    std::optional<double> price; // per unit face
    std::optional<double> oasf;  // decimal per annum
};

inline BondRecord parse_bond(const json& obj, const std::string& where) {
    const Fields f(obj, where);
    const std::string id = f.string("id");
    const double coupon = f.number("coupon");
    const int frequency = f.integer("frequency");
    const double maturity = f.number("maturity_years");
    const double rp = f.number("recovery_principal");
    const double rc = f.optional_number("recovery_coupon").value_or(0.0);
    std::optional<Bond> bond;
    try {
        bond.emplace(coupon, frequency, maturity, rp, rc);
    } catch (const DomainError& e) {
        f.fail("", e.what());
    }
    BondRecord rec{id, f.string("issuer", std::string()), *bond, std::nullopt, std::nullopt};
    if (auto p = f.optional_number("clean_price_per100")) {
        if (!(*p > 0.0))
            f.fail("clean_price_per100", "price must be > 0");
        rec.price = *p / 100.0;
    }
    if (auto o = f.optional_number("oasf_bp"))
        rec.oasf = *o / 1e4;
    if (rec.price && rec.oasf)
        f.fail("", "give clean_price_per100 or oasf_bp, not both");
    return rec;
}

/// Accepts a JSON array of bonds, an object with a "bonds" array, or a CSV
/// file with one bond per row.
inline std::vector<BondRecord> load_bonds(const std::string& path) {
    const std::string text = read_file(path);
    json items;
    if (is_csv(path)) {
        items = csv_to_objects(text, path);
    } else {
        const json doc = parse_json(text, path);
        if (doc.is_array())
            items = doc;
        else if (doc.is_object() && doc.contains("bonds") && doc.at("bonds").is_array())
            items = doc.at("bonds");
        else
            throw InputError(fmt::format("{}: bonds: expected an array of bond objects", path));
    }
    if (items.empty())
        throw InputError(fmt::format("{}: bonds: no bonds given", path));
    std::vector<BondRecord> out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out.push_back(parse_bond(items[i], fmt::format("{}: bonds[{}]", path, i)));
    return out;
}

inline json bond_to_json(const BondRecord& rec) {
    json j;
    j["id"] = rec.id;
    if (!rec.issuer.empty())
        j["issuer"] = rec.issuer;
    j["coupon"] = rec.bond.coupon();
    j["frequency"] = rec.bond.frequency();
    j["maturity_years"] = rec.bond.maturity();
    j["recovery_principal"] = rec.bond.recovery_principal();
    j["recovery_coupon"] = rec.bond.recovery_coupon();
    if (rec.price)
        j["clean_price_per100"] = *rec.price * 100.0;
    if (rec.oasf)
        j["oasf_bp"] = *rec.oasf * 1e4;
    return j;
}

// ---------------------------------------------------------------------------
// Curves

template <class Tag>
PiecewiseFlatCurve<Tag> load_curve(const std::string& path) {
    const std::string text = read_file(path);
    const std::string kind = Tag::name;
    json nodes;
    if (is_csv(path)) {
        nodes = csv_to_objects(text, path);
    } else {
        const json doc = parse_json(text, path);
        const Fields f(doc, path);
        const std::string declared = f.string("kind");
        if (declared != kind)
            f.fail("kind", fmt::format("expected \"{}\", found \"{}\"", kind, declared));
        nodes = f.array("nodes");
    }
    std::vector<CurveNode> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Fields n(nodes[i], fmt::format("{}: nodes[{}]", path, i));
        out.push_back({n.number("t"), n.number("rate")});
    }
    try {
        return PiecewiseFlatCurve<Tag>(std::move(out));
    } catch (const DomainError& e) {
        throw InputError(fmt::format("{}: nodes: {}", path, e.what()));
    }
}

template <class Tag>
json curve_to_json(const PiecewiseFlatCurve<Tag>& curve) {
    json j;
    j["kind"] = Tag::name;
    j["nodes"] = json::array();
    for (const auto& n : curve.nodes())
        j["nodes"].push_back({{"t", n.time}, {"rate", n.rate}});
    return j;
}

// ---------------------------------------------------------------------------
// Hedge problems

/// Sensitivity-table form of a hedge problem. Rows are in the units the risk
/// command reports (years, fractions, bp for rates).
struct HedgeInput {
    std::vector<std::string> bonds;
    std::vector<std::string> risks;
    std::vector<double> accuracy;              // empty: defaults by risk unit
    std::vector<std::vector<double>> rows;     // risks.size() x bonds.size()
    std::vector<double> prices_per100;         // optional
    std::vector<double> maturities;            // optional, display only
    std::vector<double> mod_durations;         // optional, spread-based comparison
    std::optional<std::string> long_leg;
};

inline HedgeInput parse_hedge_problem(const json& doc, const std::string& source) {
    const Fields f(doc, source);
    HedgeInput in;
    in.bonds = f.strings("bonds");
    in.risks = f.strings("risks");
    if (in.bonds.empty())
        f.fail("bonds", "at least one bond required");
    if (!f.has("sensitivities"))
        f.fail("sensitivities", "missing required field");
    const Fields s(doc.at("sensitivities"), source + ": sensitivities");
    for (const auto& key : in.risks) {
        auto row = s.numbers(key);
        if (row.size() != in.bonds.size())
            s.fail(key, fmt::format("expected {} values, one per bond", in.bonds.size()));
        in.rows.push_back(std::move(row));
    }
    auto optional_vector = [&](const std::string& key) {
        if (!f.has(key))
            return std::vector<double>{};
        auto v = f.numbers(key);
        if (v.size() != in.bonds.size())
            f.fail(key, fmt::format("expected {} values, one per bond", in.bonds.size()));
        return v;
    };
    if (f.has("accuracy")) {
        in.accuracy = f.numbers("accuracy");
        if (in.accuracy.size() != in.risks.size())
            f.fail("accuracy", "expected one value per risk");
    }
    in.prices_per100 = optional_vector("prices_per100");
    in.maturities = optional_vector("maturities");
    in.mod_durations = optional_vector("mod_durations");
    if (f.has("long"))
        in.long_leg = f.string("long");
    return in;
}

inline HedgeInput load_hedge_problem(const std::string& path) {
    return parse_hedge_problem(parse_json(read_file(path), path), path);
}

} // namespace survival::cli
