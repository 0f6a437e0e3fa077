#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace abring::io {

// Numeric table with a `#`-prefixed metadata header. Column names carry their
// unit, e.g. "f_Hz".
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_meta(std::string key, std::string value);
    void add_row(std::vector<double> row);
    std::vector<double> column(const std::string& name) const;
};

// Formats with 12 significant digits so that output is byte-stable.
std::string format_number(double v);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
// gnuplot-ready: whitespace-separated columns under the same `#` header.
void write_plot_data(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

} // namespace abring::io
