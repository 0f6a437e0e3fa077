#include "abring/io/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "abring/types.hpp"

namespace abring::io {

namespace {

struct UnitEntry {
    std::string_view name;
    Dimension dimension;
    double factor;
};

constexpr double kDbPerNeper = 20.0 / std::numbers::ln10;

constexpr std::array kUnits{
    UnitEntry{"Hz", Dimension::frequency, 1.0},
    UnitEntry{"kHz", Dimension::frequency, 1e3},
    UnitEntry{"MHz", Dimension::frequency, 1e6},
    UnitEntry{"GHz", Dimension::frequency, 1e9},
    UnitEntry{"m", Dimension::length, 1.0},
    UnitEntry{"cm", Dimension::length, 1e-2},
    UnitEntry{"mm", Dimension::length, 1e-3},
    UnitEntry{"um", Dimension::length, 1e-6},
    UnitEntry{"Np", Dimension::attenuation, 1.0},
    UnitEntry{"dB", Dimension::attenuation, 1.0 / kDbPerNeper},
    UnitEntry{"s", Dimension::time, 1.0},
    UnitEntry{"ms", Dimension::time, 1e-3},
    UnitEntry{"us", Dimension::time, 1e-6},
    UnitEntry{"ns", Dimension::time, 1e-9},
    UnitEntry{"ps", Dimension::time, 1e-12},
    UnitEntry{"V", Dimension::voltage, 1.0},
    UnitEntry{"mV", Dimension::voltage, 1e-3},
    UnitEntry{"rad", Dimension::angle, 1.0},
    UnitEntry{"deg", Dimension::angle, std::numbers::pi / 180.0},
    UnitEntry{"ohm*m", Dimension::resistivity, 1.0},
    UnitEntry{"Ohm*m", Dimension::resistivity, 1.0},
};

} // namespace

const char* si_unit(Dimension d) {
    switch (d) {
    case Dimension::frequency: return "Hz";
    case Dimension::length: return "m";
    case Dimension::attenuation: return "Np";
    case Dimension::time: return "s";
    case Dimension::voltage: return "V";
    case Dimension::angle: return "rad";
    case Dimension::resistivity: return "ohm*m";
    case Dimension::dimensionless: return "1";
    }
    return "?";
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty() || !std::isfinite(value)) {
        throw ConfigError("not a number: '" + t + "'");
    }
    return value;
}

int parse_int(std::string_view text) {
    const std::string t = trim(text);
    int value = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
        throw ConfigError("not an integer: '" + t + "'");
    }
    return value;
}

bool parse_bool(std::string_view text) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw ConfigError("not a boolean: '" + t + "'");
}

double parse_quantity(std::string_view text, Dimension d) {
    const std::string t = trim(text);
    // The number ends where the unit starts: at the first letter that is not
    // part of an exponent.
    std::size_t split = t.size();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const char c = t[i];
        const bool exponent = (c == 'e' || c == 'E') && i > 0 && i + 1 < t.size() &&
                              (std::isdigit(static_cast<unsigned char>(t[i + 1])) ||
                               t[i + 1] == '-' || t[i + 1] == '+');
        if (std::isalpha(static_cast<unsigned char>(c)) && !exponent) {
            split = i;
            break;
        }
    }
    const double number = parse_number(std::string_view(t).substr(0, split));
    const std::string unit = trim(std::string_view(t).substr(split));
    if (d == Dimension::dimensionless) {
        if (!unit.empty()) throw ConfigError("unexpected unit '" + unit + "' in '" + t + "'");
        return number;
    }
    if (unit.empty()) {
        throw ConfigError(std::string("missing unit in '") + t + "', expected " + si_unit(d));
    }
    for (const auto& u : kUnits) {
        if (u.name != unit) continue;
        if (u.dimension != d) {
            throw ConfigError("unit '" + unit + "' has the wrong dimension, expected " + si_unit(d));
        }
        return number * u.factor;
    }
    throw ConfigError("unknown unit '" + unit + "'");
}

} // namespace abring::io
