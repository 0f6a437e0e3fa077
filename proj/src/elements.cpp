#include "abring/elements.hpp"

#include <cmath>
#include <sstream>

namespace abring {

ResonanceError::ResonanceError(double frequency, double rcond)
    : std::runtime_error([&] {
          std::ostringstream os;
          os.precision(12);
          os << "singular interconnection at f = " << frequency << " Hz (rcond = " << rcond
             << "); perturb the frequency";
          return os.str();
      }()),
      frequency_(frequency),
      rcond_(rcond) {}

void CoaxSpec::check() const {
    if (!(inner_radius > 0.0)) throw DomainError("coax: inner radius must be > 0");
    if (!(outer_radius > inner_radius)) throw DomainError("coax: outer radius must exceed inner radius");
    if (!(eps_r >= 1.0)) throw DomainError("coax: eps_r must be >= 1");
    if (!(tan_delta >= 0.0)) throw DomainError("coax: tan_delta must be >= 0");
    if (!(resistivity >= 0.0)) throw DomainError("coax: resistivity must be >= 0");
}

double LineSpec::electrical_length() const {
    return physical_length * std::sqrt(coax.eps_r);
}

double eta_of_f(double f, const CoaxSpec& coax) {
    if (!(f > 0.0)) throw DomainError("eta_of_f: frequency must be > 0");
    const double w = kTwoPi * f;
    const double dielectric = w * coax.tan_delta;
    double conductor = 0.0;
    if (coax.resistivity != 0.0) {
        conductor = std::sqrt(w * coax.resistivity / (2.0 * kMu0)) / std::sqrt(coax.eps_r) /
                    std::log(coax.outer_radius / coax.inner_radius) *
                    (1.0 / coax.inner_radius + 1.0 / coax.outer_radius);
    }
    const double eta = 0.5 * (dielectric + conductor);
    if (!std::isfinite(eta) || eta < 0.0) {
        throw DomainError("eta_of_f: non-finite attenuation (degenerate coax geometry?)");
    }
    return eta;
}

CMatrix line_smatrix(double f, const LineSpec& spec) {
    if (!(f > 0.0)) throw DomainError("line_smatrix: frequency must be > 0");
    if (spec.physical_length < 0.0) throw DomainError("line_smatrix: negative length");
    const double transit = spec.transit_time();
    const double eta = spec.lossless ? 0.0 : eta_of_f(f, spec.coax);
    // exp(-i w T) phase with amplitude decay exp(-eta T)
    const Complex t = std::exp(Complex(-eta * transit, -kTwoPi * f * transit));
    CMatrix s = CMatrix::Zero(2, 2);
    s(1, 0) = t;
    s(0, 1) = t;
    return s;
}

CMatrix tee_smatrix(int n) {
    if (n < 2) throw DomainError("tee_smatrix: a junction needs at least 2 ports");
    CMatrix s = CMatrix::Constant(n, n, Complex(2.0 / n, 0.0));
    s.diagonal().array() -= 1.0;
    return s;
}

CMatrix circulator_smatrix(Chirality chirality) {
    // forward: 1->2, 2->3, 3->1 (row = output port)
    CMatrix s = CMatrix::Zero(3, 3);
    s(1, 0) = 1.0;
    s(2, 1) = 1.0;
    s(0, 2) = 1.0;
    if (chirality == Chirality::reverse) return s.transpose();
    return s;
}

CMatrix attenuator_smatrix(double nepers) {
    if (!(nepers >= 0.0)) throw DomainError("attenuator_smatrix: attenuation must be >= 0 Np");
    CMatrix s = CMatrix::Zero(2, 2);
    s(1, 0) = std::exp(-nepers);
    s(0, 1) = s(1, 0);
    return s;
}

CMatrix termination_reflection(TerminationKind kind) {
    CMatrix s(1, 1);
    switch (kind) {
        case TerminationKind::open: s(0, 0) = 1.0; break;
        case TerminationKind::short_circuit: s(0, 0) = -1.0; break;
        case TerminationKind::matched: s(0, 0) = 0.0; break;
    }
    return s;
}

CMatrix ideal_gyrator_smatrix(double f, const LineSpec& spec, double extra_phase) {
    CMatrix s = line_smatrix(f, spec);
    s(0, 1) *= std::polar(1.0, extra_phase);
    return s;
}

namespace {
template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
} // namespace

int port_count(const ElementKind& kind) {
    return std::visit(Overloaded{
                          [](const Line&) { return 2; },
                          [](const Tee& t) { return t.ports; },
                          [](const Circulator&) { return 3; },
                          [](const Attenuator&) { return 2; },
                          [](const Termination&) { return 1; },
                          [](const IdealGyrator&) { return 2; },
                      },
                      kind);
}

CMatrix element_smatrix(const ElementKind& kind, double f) {
    return std::visit(Overloaded{
                          [f](const Line& l) { return line_smatrix(f, l.spec); },
                          [](const Tee& t) { return tee_smatrix(t.ports); },
                          [](const Circulator& c) { return circulator_smatrix(c.chirality); },
                          [](const Attenuator& a) { return attenuator_smatrix(a.nepers); },
                          [](const Termination& t) { return termination_reflection(t.kind); },
                          [f](const IdealGyrator& g) {
                              return ideal_gyrator_smatrix(f, g.spec, g.extra_phase);
                          },
                      },
                      kind);
}

bool is_reciprocal_kind(const ElementKind& kind) {
    if (std::holds_alternative<Circulator>(kind)) return false;
    if (const auto* g = std::get_if<IdealGyrator>(&kind)) {
        return std::abs(std::polar(1.0, g->extra_phase) - Complex(1.0, 0.0)) < 1e-15;
    }
    return true;
}

const char* to_string(Chirality c) {
    return c == Chirality::forward ? "forward" : "reverse";
}

const char* to_string(TerminationKind k) {
    switch (k) {
        case TerminationKind::open: return "open";
        case TerminationKind::short_circuit: return "short";
        case TerminationKind::matched: return "matched";
    }
    return "?";
}

} // namespace abring
