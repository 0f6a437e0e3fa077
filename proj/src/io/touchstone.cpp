#include "abring/io/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "abring/io/units.hpp"

namespace abring::io {

namespace {

std::string upper(std::string s) {
    std::ranges::transform(s, s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

// Touchstone v1 orders 2-port data S11 S21 S12 S22, larger port counts row by row.
std::pair<int, int> entry_index(int ports, int i) {
    if (ports == 2) {
        static constexpr int rows[] = {0, 1, 0, 1};
        static constexpr int cols[] = {0, 0, 1, 1};
        return {rows[i], cols[i]};
    }
    return {i / ports, i % ports};
}

void check_option_line(const std::string& line, const std::string& source) {
    std::istringstream ss(line.substr(1));
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(upper(t));
    // Defaults per v1 are GHZ S MA R 50; we require every field explicitly.
    std::string unit = "GHZ";
    std::string param = "S";
    std::string format = "MA";
    std::string r = "50";
    for (std::size_t i = 0; i < tok.size(); ++i) {
        const auto& t = tok[i];
        if (t == "HZ" || t == "KHZ" || t == "MHZ" || t == "GHZ") {
            unit = t;
        } else if (t == "S" || t == "Y" || t == "Z" || t == "H" || t == "G") {
            param = t;
        } else if (t == "RI" || t == "MA" || t == "DB") {
            format = t;
        } else if (t == "R" && i + 1 < tok.size()) {
            r = tok[++i];
        } else {
            throw FormatError(source + ": unsupported: " + t);
        }
    }
    std::vector<std::string> bad;
    if (unit != "HZ") bad.push_back(unit);
    if (param != "S") bad.push_back(param);
    if (format != "RI") bad.push_back(format);
    if (parse_number(r) != 50.0) bad.push_back("R " + r);
    if (!bad.empty()) {
        std::string joined;
        for (const auto& b : bad) joined += (joined.empty() ? "" : "/") + b;
        throw FormatError(source + ": unsupported: " + joined);
    }
}

int ports_from_extension(const std::filesystem::path& path) {
    static const std::regex pattern(R"(\.[sS](\d+)[pP])");
    std::smatch m;
    const std::string ext = path.extension().string();
    if (!std::regex_match(ext, m, pattern)) {
        throw FormatError(path.string() + ": extension must be .sNp");
    }
    return std::stoi(m[1].str());
}

} // namespace

void write_touchstone(const FrequencySpectrum& spectrum, const std::filesystem::path& path,
                      const std::vector<std::string>& comments) {
    spectrum.check();
    const int ports = spectrum.ports();
    if (ports != 2) throw DomainError("touchstone: writer supports 2-port spectra only");
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& c : comments) out << "! " << c << '\n';
    out << "# HZ S RI R 50\n";
    char buf[64];
    for (int k = 0; k < spectrum.grid.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.12e", spectrum.grid[k]);
        out << buf;
        for (int i = 0; i < 4; ++i) {
            const auto [r, c] = entry_index(2, i);
            const Complex s = spectrum.matrices[k](r, c);
            std::snprintf(buf, sizeof buf, " %.12e %.12e", s.real(), s.imag());
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw ConfigError("write failed: " + path.string());
}

NPortData read_touchstone_nport(const std::filesystem::path& path) {
    const int ports = ports_from_extension(path);
    if (ports < 1) throw FormatError(path.string() + ": port count must be >= 1");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());

    std::vector<double> numbers;
    bool option_seen = false;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto bang = line.find('!'); bang != std::string::npos) line.erase(bang);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            if (option_seen) throw FormatError(path.string() + ": repeated option line");
            check_option_line(t, path.string());
            option_seen = true;
            continue;
        }
        if (!option_seen) throw FormatError(path.string() + ": data before option line");
        std::istringstream ss(t);
        for (std::string tok; ss >> tok;) numbers.push_back(parse_number(tok));
    }
    if (!option_seen) throw FormatError(path.string() + ": missing option line");

    const std::size_t per_point = 1 + 2 * static_cast<std::size_t>(ports) * ports;
    if (numbers.empty() || numbers.size() % per_point != 0) {
        throw FormatError(path.string() + ": value count is not a multiple of " +
                          std::to_string(per_point));
    }
    NPortData out;
    for (std::size_t base = 0; base < numbers.size(); base += per_point) {
        const double f = numbers[base];
        if (!out.frequencies.empty() && !(f > out.frequencies.back())) {
            throw FormatError(path.string() + ": frequencies must be ascending");
        }
        CMatrix s(ports, ports);
        for (int i = 0; i < ports * ports; ++i) {
            const auto [r, c] = entry_index(ports, i);
            s(r, c) = Complex(numbers[base + 1 + 2 * i], numbers[base + 2 + 2 * i]);
        }
        out.frequencies.push_back(f);
        out.matrices.push_back(std::move(s));
    }
    return out;
}

FrequencySpectrum read_touchstone(const std::filesystem::path& path) {
    const int ports = ports_from_extension(path);
    if (ports != 2) {
        throw FormatError(path.string() + ": unsupported: " + std::to_string(ports) + " ports");
    }
    auto data = read_touchstone_nport(path);
    const auto n = static_cast<int>(data.frequencies.size());
    if (n < 2) throw FormatError(path.string() + ": need at least 2 frequency points");
    FrequencyGrid grid(data.frequencies.front(), data.frequencies.back(), n);
    for (int k = 0; k < n; ++k) {
        if (std::abs(data.frequencies[k] - grid[k]) > 1e-6 * grid.step()) {
            throw FormatError(path.string() + ": frequency grid is not uniform");
        }
    }
    return {grid, std::move(data.matrices)};
}

} // namespace abring::io
