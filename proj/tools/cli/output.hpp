// Report tables and their json / csv / aligned-text renderings.
#pragma once

#include "io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace survival::cli {

enum class Format { json, csv, table };

using Cell = std::variant<std::string, double, long long, bool>;

struct Column {
    std::string name;
    int precision = 4; // decimals in table mode
};

struct Table {
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size())
            throw std::logic_error("row width does not match the column count");
        rows.push_back(std::move(row));
    }
};

/// What a command hands back: a table for csv / text output, a JSON document,
/// and warnings for stderr.
struct Report {
    Table table;
    json document;
    std::vector<std::string> warnings;
    std::string title; // shown above the text table
    std::vector<std::string> footer; // extra lines below the text table
};

inline json cell_to_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v))
                    return nullptr;
            }
            return v;
        },
        c);
}

inline json table_to_json(const Table& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < r.size(); ++c)
            obj[t.columns[c].name] = cell_to_json(r[c]);
        rows.push_back(std::move(obj));
    }
    return rows;
}

/// Shortest round-trip representation; NaN becomes an empty cell.
inline std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? fmt::format("{}", v) : std::string();
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else
                return fmt::format("{}", v);
        },
        c);
}

inline void write_csv(std::ostream& out, const Table& t) {
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << t.columns[c].name;
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c)
            out << (c ? "," : "") << csv_cell(r[c]);
        out << '\n';
    }
}

inline std::string text_cell(const Cell& c, int precision) {
    return std::visit(
        [precision](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? fmt::format("{:.{}f}", v, precision) : std::string("-");
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "yes" : "no";
            else
                return fmt::format("{}", v);
        },
        c);
}

inline void write_text(std::ostream& out, const Report& report) {
    const auto& t = report.table;
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        width[c] = t.columns[c].name.size();
    for (const auto& r : t.rows) {
        std::vector<std::string> line;
        for (std::size_t c = 0; c < r.size(); ++c) {
            line.push_back(text_cell(r[c], t.columns[c].precision));
            width[c] = std::max(width[c], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    if (!report.title.empty())
        out << report.title << "\n\n";
    auto emit = [&](const std::vector<std::string>& line, bool header) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            const bool left = c == 0 || (!header && std::holds_alternative<std::string>(t.rows.front()[c]));
            out << (c ? "  " : "")
                << (left ? fmt::format("{:<{}}", line[c], width[c]) : fmt::format("{:>{}}", line[c], width[c]));
        }
        out << '\n';
    };
    std::vector<std::string> header;
    for (const auto& col : t.columns)
        header.push_back(col.name);
    emit(header, true);
    std::size_t total = 0;
    for (auto w : width)
        total += w;
    out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
    for (const auto& line : cells)
        emit(line, false);
    for (const auto& f : report.footer)
        out << f << '\n';
}

inline void write_report(std::ostream& out, const Report& report, Format format) {
    switch (format) {
    case Format::json:
        out << report.document.dump(2) << '\n';
        break;
    case Format::csv:
        write_csv(out, report.table);
        break;
    case Format::table:
        write_text(out, report);
        break;
    }
}

} // namespace survival::cli
