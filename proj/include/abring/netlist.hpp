#pragma once

#include <string>
#include <utility>
#include <vector>

#include "abring/elements.hpp"

namespace abring {

struct PortRef {
    std::string component;
    int port = 0;  // 0-based

    friend bool operator==(const PortRef&, const PortRef&) = default;
    friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

std::string to_string(const PortRef& p);

struct Component {
    std::string id;
    ElementKind kind;
};

// A component graph: every component port is either joined to exactly one
// other port by a zero-length, lossless connection or listed once as an
// external port.
struct Netlist {
    std::vector<Component> components;
    std::vector<std::pair<PortRef, PortRef>> connections;
    std::vector<PortRef> external_ports;

    Netlist& add(std::string id, ElementKind kind);
    Netlist& connect(PortRef a, PortRef b);
    Netlist& expose(PortRef p);

    const Component* find(const std::string& id) const;
};

struct Diagnostic {
    std::string component;
    std::string message;
};

// All invariant violations; empty means the netlist is well formed.
std::vector<Diagnostic> validate(const Netlist& netlist);

// Index bookkeeping for repeated evaluation of one netlist. Immutable after
// construction; evaluate() may be called concurrently.
class CompiledNetlist {
public:
    // Throws ConfigError listing the diagnostics if validate() fails.
    explicit CompiledNetlist(Netlist netlist);

    // External S-matrix (E x E, ordered as netlist.external_ports).
    CMatrix evaluate(double f) const;

    int external_count() const { return static_cast<int>(external_.size()); }
    int internal_count() const { return static_cast<int>(internal_.size()); }
    const Netlist& netlist() const { return netlist_; }

    // Near-singular threshold on the LU reciprocal condition estimate.
    static constexpr double kMinRcond = 1e-12;

private:
    Netlist netlist_;
    std::vector<int> offsets_;    // first global port of each component
    int total_ports_ = 0;
    std::vector<int> external_;   // global port indices
    std::vector<int> internal_;   // global port indices
    std::vector<int> partner_;    // for each internal slot, the slot it connects to
};

// S_EE + S_EI P (I - S_II P)^-1 S_IE at one frequency.
CMatrix assemble(const Netlist& netlist, double f);

} // namespace abring
