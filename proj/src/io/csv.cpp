#include "abring/io/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "abring/io/units.hpp"
#include "abring/types.hpp"

namespace abring::io {

void CsvTable::add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
}

void CsvTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw DomainError("csv: row width does not match columns");
    rows.push_back(std::move(row));
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const auto it = std::ranges::find(columns, name);
    if (it == columns.end()) throw ConfigError("csv: no column '" + name + "'");
    const auto j = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

void write_table(const std::filesystem::path& path, const CsvTable& table, const char* sep) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << '\n';
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        out << (j ? sep : "") << table.columns[j];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? sep : "") << format_number(row[j]);
        out << '\n';
    }
    if (!out) throw ConfigError("write failed: " + path.string());
}

} // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    write_table(path, table, ",");
}

void write_plot_data(const std::filesystem::path& path, const CsvTable& table) {
    CsvTable commented = table;
    // gnuplot treats the column-name line as data unless it is a comment.
    std::string names;
    for (const auto& c : table.columns) names += (names.empty() ? "" : " ") + c;
    commented.add_meta("columns", names);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& [k, v] : commented.metadata) out << "# " << k << ": " << v << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << format_number(row[j]);
        out << '\n';
    }
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                table.add_meta(trim(line.substr(1, colon - 1)), trim(line.substr(colon + 1)));
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
        if (!header) {
            table.columns = cells;
            header = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_number(c));
        if (row.size() != table.columns.size()) {
            throw FormatError(path.string() + ": row width does not match header");
        }
        table.rows.push_back(std::move(row));
    }
    if (!header) throw FormatError(path.string() + ": no column header");
    return table;
}

} // namespace abring::io
