#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "foi/cell.hpp"
#include "foi/error.hpp"

namespace foi {

/// A parsed `key,<columns...>` CSV: first column is a row key, the rest are numeric cells.
struct CsvTable {
    std::vector<std::string> columns;  // header without the key column
    std::vector<std::string> keys;
    std::vector<std::vector<Cell>> rows;
};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace detail

/// Parses a comma-separated table. No quoting; `.` decimal separator; empty cell = MISSING.
/// `source` is used in error messages.
inline CsvTable parse_csv_table(std::istream& in, std::string_view source, std::string_view key_name = "country") {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::set<std::string, std::less<>> seen_keys;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (detail::trim(view).empty()) continue;
        auto fields = detail::split_commas(view);

        if (!have_header) {
            if (detail::trim(fields.front()) != key_name) {
                throw InputError(std::string(source) + ": header must start with '" + std::string(key_name) + "'");
            }
            std::set<std::string, std::less<>> seen_cols;
            for (std::size_t i = 1; i < fields.size(); ++i) {
                std::string col(detail::trim(fields[i]));
                if (col.empty()) throw InputError(std::string(source) + ": empty column name at column " + std::to_string(i + 1));
                if (!seen_cols.insert(col).second) throw InputError(std::string(source) + ": duplicate column '" + col + "'");
                table.columns.push_back(std::move(col));
            }
            have_header = true;
            continue;
        }

        if (fields.size() != table.columns.size() + 1) {
            throw InputError(std::string(source) + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(table.columns.size() + 1));
        }
        std::string key(detail::trim(fields.front()));
        if (key.empty()) throw InputError(std::string(source) + ": empty " + std::string(key_name) + " at line " + std::to_string(line_no));
        if (!seen_keys.insert(key).second) {
            throw InputError(std::string(source) + ": duplicate " + std::string(key_name) + " row '" + key + "' at line " + std::to_string(line_no));
        }
        std::vector<Cell> row;
        row.reserve(table.columns.size());
        for (std::size_t i = 1; i < fields.size(); ++i) {
            auto text = detail::trim(fields[i]);
            if (text.empty()) {
                row.push_back(kMissing);
                continue;
            }
            auto value = detail::parse_double(text);
            if (!value) {
                throw InputError(std::string(source) + ": parse error at line " + std::to_string(line_no) + ", column " +
                                 std::to_string(i + 1) + " ('" + table.columns[i - 1] + "'): '" + std::string(text) + "'");
            }
            row.push_back(*value);
        }
        table.keys.push_back(std::move(key));
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw InputError(std::string(source) + ": missing header row");
    return table;
}

inline CsvTable read_csv_table(const std::string& path, std::string_view key_name = "country") {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file '" + path + "'");
    return parse_csv_table(in, path, key_name);
}

inline void write_csv_table(std::ostream& out, const CsvTable& table, std::string_view key_name = "country") {
    out << key_name;
    for (const auto& c : table.columns) out << ',' << c;
    out << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << table.keys[r];
        for (const auto& cell : table.rows[r]) out << ',' << detail::format_cell(cell);
        out << '\n';
    }
}

}  // namespace foi
