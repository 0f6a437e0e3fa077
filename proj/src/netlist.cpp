#include "abring/netlist.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace abring {

std::string to_string(const PortRef& p) {
    return p.component + "." + std::to_string(p.port);
}

Netlist& Netlist::add(std::string id, ElementKind kind) {
    components.push_back({std::move(id), std::move(kind)});
    return *this;
}

Netlist& Netlist::connect(PortRef a, PortRef b) {
    connections.emplace_back(std::move(a), std::move(b));
    return *this;
}

Netlist& Netlist::expose(PortRef p) {
    external_ports.push_back(std::move(p));
    return *this;
}

const Component* Netlist::find(const std::string& id) const {
    auto it = std::find_if(components.begin(), components.end(),
                           [&](const Component& c) { return c.id == id; });
    return it == components.end() ? nullptr : &*it;
}

std::vector<Diagnostic> validate(const Netlist& netlist) {
    std::vector<Diagnostic> out;
    std::map<std::string, int> ports_of;
    for (const auto& c : netlist.components) {
        if (c.id.empty()) {
            out.push_back({c.id, "component with empty id"});
            continue;
        }
        int n = 0;
        try {
            n = port_count(c.kind);
            if (const auto* t = std::get_if<Tee>(&c.kind); t && t->ports < 2) {
                out.push_back({c.id, "tee needs at least 2 ports"});
            }
            if (const auto* a = std::get_if<Attenuator>(&c.kind); a && !(a->nepers >= 0.0)) {
                out.push_back({c.id, "negative attenuation"});
            }
        } catch (const std::exception& e) {
            out.push_back({c.id, e.what()});
        }
        if (!ports_of.emplace(c.id, n).second) {
            out.push_back({c.id, "duplicate component id '" + c.id + "'"});
        }
    }

    std::map<PortRef, int> uses;
    auto use = [&](const PortRef& p, const char* where) {
        auto it = ports_of.find(p.component);
        if (it == ports_of.end()) {
            out.push_back({p.component, std::string(where) + " references unknown component in " +
                                            to_string(p)});
            return;
        }
        if (p.port < 0 || p.port >= it->second) {
            out.push_back({p.component, std::string(where) + " references nonexistent port " +
                                            to_string(p)});
            return;
        }
        ++uses[p];
    };
    for (const auto& [a, b] : netlist.connections) {
        if (a == b) out.push_back({a.component, "port " + to_string(a) + " connected to itself"});
        use(a, "connection");
        use(b, "connection");
    }
    for (const auto& p : netlist.external_ports) use(p, "external port");

    if (netlist.external_ports.empty()) out.push_back({"", "netlist has no external port"});

    for (const auto& [id, n] : ports_of) {
        for (int k = 0; k < n; ++k) {
            const PortRef p{id, k};
            const auto it = uses.find(p);
            const int count = it == uses.end() ? 0 : it->second;
            if (count == 0) {
                out.push_back({id, "dangling port " + to_string(p) +
                                       " (neither connected nor external)"});
            } else if (count > 1) {
                out.push_back({id, "port " + to_string(p) + " used " + std::to_string(count) +
                                       " times"});
            }
        }
    }
    return out;
}

CompiledNetlist::CompiledNetlist(Netlist netlist) : netlist_(std::move(netlist)) {
    const auto diags = validate(netlist_);
    if (!diags.empty()) {
        std::ostringstream os;
        os << "invalid netlist:";
        for (const auto& d : diags) os << "\n  " << (d.component.empty() ? "-" : d.component) << ": " << d.message;
        throw ConfigError(os.str());
    }

    std::map<std::string, int> index;
    offsets_.reserve(netlist_.components.size());
    for (std::size_t i = 0; i < netlist_.components.size(); ++i) {
        index[netlist_.components[i].id] = static_cast<int>(i);
        offsets_.push_back(total_ports_);
        total_ports_ += port_count(netlist_.components[i].kind);
    }
    auto global = [&](const PortRef& p) { return offsets_[index.at(p.component)] + p.port; };

    std::vector<char> is_external(total_ports_, 0);
    for (const auto& p : netlist_.external_ports) {
        external_.push_back(global(p));
        is_external[external_.back()] = 1;
    }
    std::vector<int> slot(total_ports_, -1);
    for (int g = 0; g < total_ports_; ++g) {
        if (!is_external[g]) {
            slot[g] = static_cast<int>(internal_.size());
            internal_.push_back(g);
        }
    }
    partner_.assign(internal_.size(), -1);
    for (const auto& [a, b] : netlist_.connections) {
        const int sa = slot[global(a)];
        const int sb = slot[global(b)];
        partner_[sa] = sb;
        partner_[sb] = sa;
    }
}

CMatrix CompiledNetlist::evaluate(double f) const {
    // Block-diagonal stack of component matrices.
    CMatrix blk = CMatrix::Zero(total_ports_, total_ports_);
    for (std::size_t i = 0; i < netlist_.components.size(); ++i) {
        const CMatrix s = element_smatrix(netlist_.components[i].kind, f);
        blk.block(offsets_[i], offsets_[i], s.rows(), s.cols()) = s;
    }

    const auto ne = static_cast<Eigen::Index>(external_.size());
    const auto ni = static_cast<Eigen::Index>(internal_.size());
    CMatrix see(ne, ne), sei(ne, ni), sie(ni, ne);
    for (Eigen::Index r = 0; r < ne; ++r) {
        for (Eigen::Index c = 0; c < ne; ++c) see(r, c) = blk(external_[r], external_[c]);
        for (Eigen::Index c = 0; c < ni; ++c) sei(r, c) = blk(external_[r], internal_[c]);
    }
    if (ni == 0) return see;
    for (Eigen::Index r = 0; r < ni; ++r) {
        for (Eigen::Index c = 0; c < ne; ++c) sie(r, c) = blk(internal_[r], external_[c]);
    }

    // S_II P: column j of S_II P is column partner(j) of S_II. A = I - S_II P.
    CMatrix a(ni, ni);
    for (Eigen::Index j = 0; j < ni; ++j) {
        const int pj = internal_[partner_[j]];
        for (Eigen::Index r = 0; r < ni; ++r) a(r, j) = -blk(internal_[r], pj);
    }
    a.diagonal().array() += 1.0;

    Eigen::PartialPivLU<CMatrix> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > kMinRcond)) throw ResonanceError(f, rcond);
    const CMatrix x = lu.solve(sie);  // b_I

    // S_EI P x: row permutation of x by partner.
    CMatrix px(ni, ne);
    for (Eigen::Index j = 0; j < ni; ++j) px.row(j) = x.row(partner_[j]);
    return see + sei * px;
}

CMatrix assemble(const Netlist& netlist, double f) {
    return CompiledNetlist(netlist).evaluate(f);
}

} // namespace abring
