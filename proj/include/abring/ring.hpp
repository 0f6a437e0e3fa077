#pragma once

#include <numbers>

#include "abring/netlist.hpp"

namespace abring {

enum class GyratorMode { composed, ideal };

// Two-port Aharonov-Bohm analogue ring: port 1 - tee - {upper: line +
// attenuator, lower: gyrator + attenuator} - tee - port 2. Both branches
// share the same electrical length, so the circumference is twice that.
struct RingParams {
    double branch_electrical_length = 0.3;  // m
    CoaxSpec coax = default_coax();
    double gamma_upper = 0.0;                // Np, upper (line) bond
    double gamma_lower = 0.0;                // Np, lower (gyrator) bond
    GyratorMode gyrator_mode = GyratorMode::composed;
    double gyrator_phase = std::numbers::pi; // rad, added to 2->1 on the lower bond
    bool uniform_loss = false;

    double circumference() const { return 2.0 * branch_electrical_length; }
    // Shape-resonance spacing c / circumference.
    double mode_spacing() const { return kSpeedOfLight / circumference(); }

    void check() const;

    // Cable used throughout the bundled configurations.
    static CoaxSpec default_coax();
};

// Length of the open/short blocks that terminate the composed gyrator stubs.
inline constexpr double kTerminationBlockLength = 0.013e-2;  // m

Netlist build_ab_ring(const RingParams& params);

} // namespace abring
