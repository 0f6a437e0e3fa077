#pragma once

#include <string>
#include <string_view>

namespace abring::io {

enum class Dimension {
    frequency,    // Hz
    length,       // m
    attenuation,  // Np
    time,         // s
    voltage,      // V
    angle,        // rad
    resistivity,  // Ohm m
    dimensionless,
};

const char* si_unit(Dimension d);

// "8.5 GHz", "8.5GHz", "0.3 m". The unit is mandatory unless d is
// dimensionless, in which case none is allowed. Returns the value in SI.
double parse_quantity(std::string_view text, Dimension d);

double parse_number(std::string_view text);
int parse_int(std::string_view text);
bool parse_bool(std::string_view text);

std::string trim(std::string_view s);

} // namespace abring::io
