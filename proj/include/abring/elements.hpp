#pragma once

// Closed-form scattering matrices of the circuit elements used to build
// microwave ring graphs. All ports share one reference impedance, and every
// function is a pure function of its arguments.

#include <variant>

#include "abring/types.hpp"

namespace abring {

// Coaxial cable cross-section and materials, SI units.
struct CoaxSpec {
    double inner_radius = 0.0;  // m
    double outer_radius = 0.0;  // m
    double eps_r = 1.0;
    double tan_delta = 0.0;
    double resistivity = 0.0;   // Ohm m

    void check() const;
};

struct LineSpec {
    CoaxSpec coax;
    double physical_length = 0.0;  // m
    bool lossless = false;

    double electrical_length() const;
    // One-way transit time L*sqrt(eps_r)/c.
    double transit_time() const { return electrical_length() / kSpeedOfLight; }
};

enum class Chirality { forward, reverse };
enum class TerminationKind { open, short_circuit, matched };

struct Line {
    LineSpec spec;
};
struct Tee {
    int ports = 3;
};
struct Circulator {
    Chirality chirality = Chirality::forward;
};
struct Attenuator {
    double nepers = 0.0;
};
struct Termination {
    TerminationKind kind = TerminationKind::open;
};
// Line with an extra phase on the 2->1 (right-to-left) transmission only.
struct IdealGyrator {
    LineSpec spec;
    double extra_phase = 0.0;  // rad
};

using ElementKind = std::variant<Line, Tee, Circulator, Attenuator, Termination, IdealGyrator>;

/// Uniform attenuation rate of a coaxial line in rad/s:
///   eta = 1/2 [ w tan_delta + sqrt(w rho / (2 mu0)) / sqrt(eps_r) / ln(b/a) (1/a + 1/b) ]
/// with w = 2 pi f. Throws DomainError for f <= 0 or a non-finite result.
double eta_of_f(double f, const CoaxSpec& coax);

CMatrix line_smatrix(double f, const LineSpec& spec);
CMatrix tee_smatrix(int n);
CMatrix circulator_smatrix(Chirality chirality);
CMatrix attenuator_smatrix(double nepers);
CMatrix termination_reflection(TerminationKind kind);
CMatrix ideal_gyrator_smatrix(double f, const LineSpec& spec, double extra_phase);

int port_count(const ElementKind& kind);
CMatrix element_smatrix(const ElementKind& kind, double f);
bool is_reciprocal_kind(const ElementKind& kind);

const char* to_string(Chirality c);
const char* to_string(TerminationKind k);

} // namespace abring
