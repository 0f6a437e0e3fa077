#include "abring/io/run_config.hpp"

#include <cmath>
#include <map>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "abring/io/units.hpp"

namespace abring::io {

namespace pt = boost::property_tree;

std::vector<double> GammaRange::values() const {
    if (!(step > 0.0)) throw ConfigError("gamma range: step must be > 0");
    if (start < 0.0 || stop < start) throw ConfigError("gamma range: need 0 <= start <= stop");
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = start + i * step;
    return out;
}

namespace {

const std::map<std::string, std::set<std::string>> kSchema{
    {"run", {"output", "workers", "seed", "netlist"}},
    {"grid", {"start", "stop", "points"}},
    {"ring", {"branch_length", "gamma_upper", "gamma_lower", "gyrator", "gyrator_phase", "uniform_loss"}},
    {"coax", {"inner", "outer", "eps_r", "tan_delta", "rho"}},
    {"band", {"lo", "hi"}},
    {"pulse", {"fc", "fwhm", "amplitude", "t_center", "sample_rate", "duration"}},
    {"attnsweep", {"start", "stop", "step", "mode", "variant", "band_points"}},
    {"noise", {"block", "stochastic", "realizations"}},
    {"pzfit", {"modes", "start", "stop", "step", "free_eta"}},
};

class Section {
public:
    Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

    std::optional<std::string> raw(const std::string& key) const {
        if (!tree_) return std::nullopt;
        const auto v = tree_->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return trim(*v);
    }

    template <typename F>
    void with(const std::string& key, F&& apply) const {
        const auto v = raw(key);
        if (!v) return;
        try {
            apply(*v);
        } catch (const ConfigError& e) {
            throw ConfigError("[" + name_ + "] " + key + ": " + e.what());
        }
    }

    void quantity(const std::string& key, Dimension d, double& target) const {
        with(key, [&](const std::string& v) { target = parse_quantity(v, d); });
    }
    void integer(const std::string& key, int& target) const {
        with(key, [&](const std::string& v) { target = parse_int(v); });
    }
    void boolean(const std::string& key, bool& target) const {
        with(key, [&](const std::string& v) { target = parse_bool(v); });
    }
    void gamma(GammaRange& target) const {
        quantity("start", Dimension::attenuation, target.start);
        quantity("stop", Dimension::attenuation, target.stop);
        quantity("step", Dimension::attenuation, target.step);
    }

private:
    const pt::ptree* tree_;
    std::string name_;
};

} // namespace

void RunConfig::check() const {
    if (!(band.hi > band.lo)) throw ConfigError("[band] hi must exceed lo");
    if (band.lo < grid.start() || band.hi > grid.stop()) {
        throw ConfigError("[band] must lie inside [grid]");
    }
    if (netlist && !std::filesystem::exists(*netlist)) {
        throw ConfigError("[run] netlist: no such file " + netlist->string());
    }
    if (workers < 0) throw ConfigError("[run] workers must be >= 0");
    if (noise.block < 1) throw ConfigError("[noise] block must be >= 1");
    if (noise.realizations < 1) throw ConfigError("[noise] realizations must be >= 1");
    if (pz_modes < 1) throw ConfigError("[pzfit] modes must be >= 1");
    if (attn_band_points < 2) throw ConfigError("[attnsweep] band_points must be >= 2");
    try {
        ring.check();
        pulse.check();
        (void)attn.values();
        (void)pz_gamma.values();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

RunConfig read_run_config(const std::filesystem::path& path) {
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    for (const auto& [section, body] : tree) {
        const auto it = kSchema.find(section);
        if (it == kSchema.end()) throw ConfigError("unknown section [" + section + "]");
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("key '" + section + "' outside a section");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.contains(key)) throw ConfigError("unknown key [" + section + "] " + key);
        }
    }
    auto section = [&](const std::string& name) {
        const auto child = tree.get_child_optional(name);
        return Section(child ? &*child : nullptr, name);
    };

    RunConfig cfg;
    cfg.source = path;
    const auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path out(p);
        return out.is_absolute() ? out : base / out;
    };

    const auto run = section("run");
    run.with("output", [&](const std::string& v) { cfg.output_dir = resolve(v); });
    if (!run.raw("output")) cfg.output_dir = resolve("out");
    run.integer("workers", cfg.workers);
    run.with("seed", [&](const std::string& v) {
        const double s = parse_number(v);
        if (s < 0 || s != std::floor(s)) throw ConfigError("seed must be a non-negative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
    });
    run.with("netlist", [&](const std::string& v) { cfg.netlist = resolve(v); });

    const auto grid = section("grid");
    cfg.grid_given = tree.get_child_optional("grid").has_value();
    double start = cfg.grid.start();
    double stop = cfg.grid.stop();
    int points = cfg.grid.size();
    grid.quantity("start", Dimension::frequency, start);
    grid.quantity("stop", Dimension::frequency, stop);
    grid.integer("points", points);
    try {
        cfg.grid = FrequencyGrid(start, stop, points);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("[grid] ") + e.what());
    }

    const auto ring = section("ring");
    ring.quantity("branch_length", Dimension::length, cfg.ring.branch_electrical_length);
    ring.quantity("gamma_upper", Dimension::attenuation, cfg.ring.gamma_upper);
    ring.quantity("gamma_lower", Dimension::attenuation, cfg.ring.gamma_lower);
    ring.with("gyrator", [&](const std::string& v) {
        if (v == "composed") {
            cfg.ring.gyrator_mode = GyratorMode::composed;
        } else if (v == "ideal") {
            cfg.ring.gyrator_mode = GyratorMode::ideal;
        } else {
            throw ConfigError("expected composed or ideal");
        }
    });
    ring.quantity("gyrator_phase", Dimension::angle, cfg.ring.gyrator_phase);
    ring.boolean("uniform_loss", cfg.ring.uniform_loss);

    const auto coax = section("coax");
    coax.quantity("inner", Dimension::length, cfg.ring.coax.inner_radius);
    coax.quantity("outer", Dimension::length, cfg.ring.coax.outer_radius);
    coax.quantity("eps_r", Dimension::dimensionless, cfg.ring.coax.eps_r);
    coax.quantity("tan_delta", Dimension::dimensionless, cfg.ring.coax.tan_delta);
    coax.quantity("rho", Dimension::resistivity, cfg.ring.coax.resistivity);

    const auto band = section("band");
    band.quantity("lo", Dimension::frequency, cfg.band.lo);
    band.quantity("hi", Dimension::frequency, cfg.band.hi);

    const auto pulse = section("pulse");
    pulse.quantity("fc", Dimension::frequency, cfg.pulse.fc);
    pulse.quantity("fwhm", Dimension::time, cfg.pulse.fwhm);
    pulse.quantity("amplitude", Dimension::voltage, cfg.pulse.amplitude);
    pulse.quantity("t_center", Dimension::time, cfg.pulse.t_center);
    pulse.quantity("sample_rate", Dimension::frequency, cfg.sample_rate);
    pulse.quantity("duration", Dimension::time, cfg.duration);

    const auto attn = section("attnsweep");
    attn.gamma(cfg.attn);
    attn.with("mode", [&](const std::string& v) {
        if (v == "frequency") {
            cfg.attn_mode = AsymmetryMode::frequency;
        } else if (v == "time") {
            cfg.attn_mode = AsymmetryMode::time;
        } else {
            throw ConfigError("expected frequency or time");
        }
    });
    attn.with("variant", [&](const std::string& v) {
        if (v == "balanced") {
            cfg.attn_variant = RingVariant::balanced;
        } else if (v == "unbalanced") {
            cfg.attn_variant = RingVariant::unbalanced;
        } else {
            throw ConfigError("expected balanced or unbalanced");
        }
    });
    attn.integer("band_points", cfg.attn_band_points);

    const auto noise = section("noise");
    noise.integer("block", cfg.noise.block);
    noise.boolean("stochastic", cfg.noise.stochastic);
    noise.integer("realizations", cfg.noise.realizations);

    const auto pz = section("pzfit");
    pz.integer("modes", cfg.pz_modes);
    pz.gamma(cfg.pz_gamma);
    pz.boolean("free_eta", cfg.pz_free_eta);

    cfg.noise.seed = cfg.seed;
    cfg.check();
    return cfg;
}

} // namespace abring::io
