#include "abring/io/netlist_doc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "abring/io/units.hpp"

namespace abring::io {

namespace {

using Keys = std::map<std::string, std::string>;

class LineContext {
public:
    LineContext(const std::string& source, int line) : prefix_(source + ":" + std::to_string(line) + ": ") {}

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(prefix_ + msg); }

    template <typename F>
    auto guard(F&& f) const {
        try {
            return f();
        } catch (const ConfigError& e) {
            fail(e.what());
        } catch (const DomainError& e) {
            fail(e.what());
        }
    }

private:
    std::string prefix_;
};

Keys parse_keys(const std::vector<std::string>& tokens, std::size_t first, const LineContext& ctx) {
    Keys keys;
    for (std::size_t i = first; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string::npos || eq == 0) ctx.fail("expected key=value, got '" + tokens[i] + "'");
        const auto key = tokens[i].substr(0, eq);
        if (!keys.emplace(key, tokens[i].substr(eq + 1)).second) ctx.fail("duplicate key '" + key + "'");
    }
    return keys;
}

class KeyReader {
public:
    KeyReader(Keys keys, const LineContext& ctx) : keys_(std::move(keys)), ctx_(ctx) {}

    std::optional<std::string> take(const std::string& key) {
        const auto it = keys_.find(key);
        if (it == keys_.end()) return std::nullopt;
        auto v = it->second;
        keys_.erase(it);
        return v;
    }
    std::string required(const std::string& key) {
        auto v = take(key);
        if (!v) ctx_.fail("missing key '" + key + "'");
        return *v;
    }
    double quantity(const std::string& key, Dimension d) {
        const auto v = required(key);
        return ctx_.guard([&] { return parse_quantity(v, d); });
    }
    void finish() const {
        if (!keys_.empty()) ctx_.fail("unknown key '" + keys_.begin()->first + "'");
    }

private:
    Keys keys_;
    const LineContext& ctx_;
};

PortRef parse_port(const std::string& text, const LineContext& ctx) {
    const auto dot = text.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == text.size()) {
        ctx.fail("expected id.port, got '" + text + "'");
    }
    const int port = ctx.guard([&] { return parse_int(text.substr(dot + 1)); });
    return {text.substr(0, dot), port};
}

LineSpec parse_line_spec(KeyReader& keys, const std::map<std::string, CoaxSpec>& coax,
                         const LineContext& ctx) {
    const auto name = keys.required("coax");
    const auto it = coax.find(name);
    if (it == coax.end()) ctx.fail("unknown coax '" + name + "'");
    LineSpec spec{it->second, 0.0, false};
    const auto physical = keys.take("length");
    const auto electrical = keys.take("electrical_length");
    if (physical.has_value() == electrical.has_value()) {
        ctx.fail("give exactly one of length= and electrical_length=");
    }
    if (physical) {
        spec.physical_length = ctx.guard([&] { return parse_quantity(*physical, Dimension::length); });
    } else {
        const double el = ctx.guard([&] { return parse_quantity(*electrical, Dimension::length); });
        spec.physical_length = el / std::sqrt(spec.coax.eps_r);
    }
    if (spec.physical_length < 0.0) ctx.fail("length must be >= 0");
    if (const auto l = keys.take("lossless")) spec.lossless = ctx.guard([&] { return parse_bool(*l); });
    return spec;
}

ElementKind parse_element(const std::string& kind, KeyReader& keys,
                          const std::map<std::string, CoaxSpec>& coax, const LineContext& ctx) {
    if (kind == "line") return Line{parse_line_spec(keys, coax, ctx)};
    if (kind == "gyrator") {
        auto spec = parse_line_spec(keys, coax, ctx);
        return IdealGyrator{spec, keys.quantity("phase", Dimension::angle)};
    }
    if (kind == "tee") {
        const auto v = keys.required("ports");
        const int n = ctx.guard([&] { return parse_int(v); });
        if (n < 2) ctx.fail("tee needs ports >= 2");
        return Tee{n};
    }
    if (kind == "circulator") {
        const auto c = keys.required("chirality");
        if (c == "forward") return Circulator{Chirality::forward};
        if (c == "reverse") return Circulator{Chirality::reverse};
        ctx.fail("chirality must be forward or reverse");
    }
    if (kind == "attenuator") {
        const double np = keys.quantity("loss", Dimension::attenuation);
        if (np < 0.0) ctx.fail("attenuator loss must be >= 0");
        return Attenuator{np};
    }
    if (kind == "termination") {
        const auto k = keys.required("kind");
        if (k == "open") return Termination{TerminationKind::open};
        if (k == "short") return Termination{TerminationKind::short_circuit};
        if (k == "matched") return Termination{TerminationKind::matched};
        ctx.fail("termination kind must be open, short or matched");
    }
    ctx.fail("unknown component kind '" + kind + "'");
}

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string t; ss >> t;) out.push_back(t);
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool same_coax(const CoaxSpec& a, const CoaxSpec& b) {
    return a.inner_radius == b.inner_radius && a.outer_radius == b.outer_radius &&
           a.eps_r == b.eps_r && a.tan_delta == b.tan_delta && a.resistivity == b.resistivity;
}

} // namespace

NetlistDoc parse_netlist_doc(std::istream& in, const std::string& source) {
    NetlistDoc doc;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto tok = tokenize(raw);
        if (tok.empty()) continue;
        const LineContext ctx(source, line_no);
        const auto& directive = tok[0];

        if (directive == "coax") {
            if (tok.size() < 2) ctx.fail("coax needs a name");
            KeyReader keys(parse_keys(tok, 2, ctx), ctx);
            CoaxSpec c;
            c.inner_radius = keys.quantity("inner", Dimension::length);
            c.outer_radius = keys.quantity("outer", Dimension::length);
            c.eps_r = keys.quantity("eps_r", Dimension::dimensionless);
            c.tan_delta = keys.quantity("tan_delta", Dimension::dimensionless);
            c.resistivity = keys.quantity("rho", Dimension::resistivity);
            keys.finish();
            ctx.guard([&] { c.check(); return 0; });
            if (!doc.coax.emplace(tok[1], c).second) ctx.fail("duplicate coax '" + tok[1] + "'");
        } else if (directive == "component") {
            if (tok.size() < 3) ctx.fail("component needs an id and a kind");
            KeyReader keys(parse_keys(tok, 3, ctx), ctx);
            auto kind = parse_element(tok[2], keys, doc.coax, ctx);
            keys.finish();
            doc.netlist.add(tok[1], std::move(kind));
        } else if (directive == "connect") {
            std::vector<std::string> ports;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                if (tok[i] != "--") ports.push_back(tok[i]);
            }
            if (ports.size() != 2) ctx.fail("connect needs two ports");
            doc.netlist.connect(parse_port(ports[0], ctx), parse_port(ports[1], ctx));
        } else if (directive == "external") {
            if (tok.size() < 2) ctx.fail("external needs at least one port");
            for (std::size_t i = 1; i < tok.size(); ++i) doc.netlist.expose(parse_port(tok[i], ctx));
        } else if (directive == "sweep") {
            if (doc.sweep) ctx.fail("repeated sweep directive");
            KeyReader keys(parse_keys(tok, 1, ctx), ctx);
            const double start = keys.quantity("start", Dimension::frequency);
            const double stop = keys.quantity("stop", Dimension::frequency);
            const auto points = keys.required("points");
            keys.finish();
            const int n = ctx.guard([&] { return parse_int(points); });
            doc.sweep = ctx.guard([&] { return FrequencyGrid(start, stop, n); });
        } else {
            ctx.fail("unknown directive '" + directive + "'");
        }
    }
    return doc;
}

NetlistDoc read_netlist_doc(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open netlist " + path.string());
    return parse_netlist_doc(in, path.string());
}

std::string write_netlist_doc(const Netlist& netlist, const std::optional<FrequencyGrid>& sweep) {
    std::vector<CoaxSpec> coax;
    auto coax_name = [&](const CoaxSpec& c) {
        for (std::size_t i = 0; i < coax.size(); ++i) {
            if (same_coax(coax[i], c)) return "coax" + std::to_string(i);
        }
        coax.push_back(c);
        return "coax" + std::to_string(coax.size() - 1);
    };
    auto line_keys = [&](const LineSpec& s) {
        std::string out = " coax=" + coax_name(s.coax) + " length=" + num(s.physical_length) + "m";
        if (s.lossless) out += " lossless=true";
        return out;
    };

    std::ostringstream body;
    for (const auto& c : netlist.components) {
        body << "component " << c.id << ' ';
        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, Line>) {
                    body << "line" << line_keys(e.spec);
                } else if constexpr (std::is_same_v<T, IdealGyrator>) {
                    body << "gyrator" << line_keys(e.spec) << " phase=" << num(e.extra_phase) << "rad";
                } else if constexpr (std::is_same_v<T, Tee>) {
                    body << "tee ports=" << e.ports;
                } else if constexpr (std::is_same_v<T, Circulator>) {
                    body << "circulator chirality=" << to_string(e.chirality);
                } else if constexpr (std::is_same_v<T, Attenuator>) {
                    body << "attenuator loss=" << num(e.nepers) << "Np";
                } else {
                    body << "termination kind=" << to_string(e.kind);
                }
            },
            c.kind);
        body << '\n';
    }
    for (const auto& [a, b] : netlist.connections) {
        body << "connect " << to_string(a) << " -- " << to_string(b) << '\n';
    }
    for (const auto& p : netlist.external_ports) body << "external " << to_string(p) << '\n';
    if (sweep) {
        body << "sweep start=" << num(sweep->start()) << "Hz stop=" << num(sweep->stop())
             << "Hz points=" << sweep->size() << '\n';
    }

    std::ostringstream out;
    for (std::size_t i = 0; i < coax.size(); ++i) {
        const auto& c = coax[i];
        out << "coax coax" << i << " inner=" << num(c.inner_radius) << "m outer=" << num(c.outer_radius)
            << "m eps_r=" << num(c.eps_r) << " tan_delta=" << num(c.tan_delta)
            << " rho=" << num(c.resistivity) << "ohm*m\n";
    }
    out << body.str();
    return out.str();
}

} // namespace abring::io
