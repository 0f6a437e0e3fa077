#include "abring/ring.hpp"

#include <cmath>

namespace abring {

CoaxSpec RingParams::default_coax() {
    CoaxSpec c;
    c.inner_radius = 0.091e-2;
    c.outer_radius = 0.298e-2;
    c.eps_r = 2.01;
    c.tan_delta = 0.00028;
    // Effective conductor resistivity of the test cables in SI units.
    c.resistivity = 4.4e-7;
    return c;
}

void RingParams::check() const {
    if (!(branch_electrical_length > 0.0)) throw DomainError("ring: branch length must be > 0");
    if (!(gamma_upper >= 0.0) || !(gamma_lower >= 0.0)) {
        throw DomainError("ring: lumped attenuation must be >= 0 Np");
    }
    if (uniform_loss) coax.check();
    if (!(coax.eps_r >= 1.0)) throw DomainError("ring: eps_r must be >= 1");
    if (gyrator_mode == GyratorMode::composed) {
        // open vs short stubs of equal length give exactly pi at every frequency
        const double off = std::remainder(gyrator_phase - std::numbers::pi, kTwoPi);
        if (std::abs(off) > 1e-12) {
            throw DomainError("ring: composed gyrator realizes a pi phase only; use ideal mode");
        }
        const double stub = branch_electrical_length / 4.0;
        if (stub <= kTerminationBlockLength * std::sqrt(coax.eps_r)) {
            throw DomainError("ring: branch too short for the composed gyrator stubs");
        }
    }
}

namespace {

LineSpec line_of(const RingParams& p, double electrical_length) {
    LineSpec s;
    s.coax = p.coax;
    s.physical_length = electrical_length / std::sqrt(p.coax.eps_r);
    s.lossless = !p.uniform_loss;
    return s;
}

// Lower-bond gyrator from two circulators, phase trimmers and an open/short
// pair. Ports: <prefix>circA.0 (left), <prefix>circB.1 (right).
void add_composed_gyrator(Netlist& n, const RingParams& p) {
    const double length = p.branch_electrical_length;
    const double term_el = kTerminationBlockLength * std::sqrt(p.coax.eps_r);
    const double trimmer_el = length / 4.0 - term_el;

    n.add("circA", Circulator{Chirality::forward})
        .add("circB", Circulator{Chirality::forward})
        .add("gyr_mid", Line{line_of(p, length / 2.0)})
        .add("trimA", Line{line_of(p, trimmer_el)})
        .add("openLine", Line{line_of(p, term_el)})
        .add("open", Termination{TerminationKind::open})
        .add("trimB", Line{line_of(p, trimmer_el)})
        .add("shortLine", Line{line_of(p, term_el)})
        .add("short", Termination{TerminationKind::short_circuit});

    // left-to-right: circA 1->2, open stub, circA 2->3, mid line, circB 1->2
    n.connect({"circA", 1}, {"trimA", 0})
        .connect({"trimA", 1}, {"openLine", 0})
        .connect({"openLine", 1}, {"open", 0})
        .connect({"circA", 2}, {"gyr_mid", 0})
        .connect({"gyr_mid", 1}, {"circB", 0})
        // right-to-left: circB 2->3, short stub, circB 3->1, mid line, circA 3->1
        .connect({"circB", 2}, {"trimB", 0})
        .connect({"trimB", 1}, {"shortLine", 0})
        .connect({"shortLine", 1}, {"short", 0});
}

} // namespace

Netlist build_ab_ring(const RingParams& p) {
    p.check();
    Netlist n;
    n.add("teeA", Tee{3})
        .add("teeB", Tee{3})
        .add("upper", Line{line_of(p, p.branch_electrical_length)})
        .add("attU", Attenuator{p.gamma_upper})
        .add("attL", Attenuator{p.gamma_lower});

    n.connect({"teeA", 1}, {"upper", 0})
        .connect({"upper", 1}, {"attU", 0})
        .connect({"attU", 1}, {"teeB", 1});

    PortRef gyr_left, gyr_right;
    if (p.gyrator_mode == GyratorMode::ideal) {
        n.add("gyr", IdealGyrator{line_of(p, p.branch_electrical_length), p.gyrator_phase});
        gyr_left = {"gyr", 0};
        gyr_right = {"gyr", 1};
    } else {
        add_composed_gyrator(n, p);
        gyr_left = {"circA", 0};
        gyr_right = {"circB", 1};
    }
    n.connect({"teeA", 2}, gyr_left)
        .connect(gyr_right, {"attL", 0})
        .connect({"attL", 1}, {"teeB", 2});

    n.expose({"teeA", 0}).expose({"teeB", 0});
    return n;
}

} // namespace abring
