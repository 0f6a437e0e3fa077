// abring: command-line front end. Each subcommand reads a RunConfig (INI) and
// optionally a NetlistDoc, writes CSV/Touchstone artifacts plus a manifest to
// the output directory, and prints a one-line JSON summary on stdout.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>
#include <json.hpp>

#include "abring/delays.hpp"
#include "abring/io/csv.hpp"
#include "abring/io/manifest.hpp"
#include "abring/io/netlist_doc.hpp"
#include "abring/io/run_config.hpp"
#include "abring/io/touchstone.hpp"
#include "abring/metrics.hpp"
#include "abring/pulse.hpp"
#include "abring/pzfit.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace abring;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr const char* kWorkersEnv = "ABRING_WORKERS";

struct Options {
    std::string config;
    std::string netlist;
    std::string output;
    int workers = -1;
    bool plot_data = false;
    std::optional<std::uint64_t> seed;
    std::string attn_mode;
    std::string attn_variant;
};

class Run {
public:
    Run(std::string command, const Options& opt) : command_(std::move(command)), opt_(opt) {
        if (!opt.config.empty()) {
            cfg_ = io::read_run_config(opt.config);
            inputs_.push_back(opt.config);
        }
        if (!opt.netlist.empty()) cfg_.netlist = fs::path(opt.netlist);
        if (cfg_.netlist) {
            if (!fs::exists(*cfg_.netlist)) throw ConfigError("no such netlist " + cfg_.netlist->string());
            inputs_.push_back(*cfg_.netlist);
        }
        if (!opt.output.empty()) cfg_.output_dir = opt.output;
        if (opt.seed) {
            cfg_.seed = *opt.seed;
            cfg_.noise.seed = *opt.seed;
        }
        workers_ = resolve_workers();
        hash_ = io::hash_inputs(inputs_);
    }

    io::RunConfig& config() { return cfg_; }
    int workers() const { return workers_; }
    const std::string& hash() const { return hash_; }

    // Netlist from the NetlistDoc if one is configured, else the AB ring.
    Netlist netlist() {
        if (!cfg_.netlist) return build_ab_ring(cfg_.ring);
        auto doc = io::read_netlist_doc(*cfg_.netlist);
        if (doc.sweep && !cfg_.grid_given) cfg_.grid = *doc.sweep;
        return doc.netlist;
    }

    void require_ring() const {
        if (cfg_.netlist) throw ConfigError(command_ + " works on the ring model only; remove [run] netlist");
    }

    FrequencySpectrum spectrum() {
        auto n = netlist();
        return sweep(n, cfg_.grid, workers_);
    }

    io::CsvTable table(std::vector<std::string> columns) const {
        io::CsvTable t;
        t.add_meta("generator", std::string("abring ") + ABRING_VERSION + " " + command_);
        t.add_meta("inputs_hash", hash_);
        t.columns = std::move(columns);
        return t;
    }

    void emit(const std::string& stem, const io::CsvTable& t) {
        const auto path = cfg_.output_dir / (stem + ".csv");
        io::write_csv(path, t);
        artifacts_.push_back(path);
        if (opt_.plot_data) {
            const auto dat = cfg_.output_dir / (stem + ".dat");
            io::write_plot_data(dat, t);
            artifacts_.push_back(dat);
        }
    }

    void emit_file(const fs::path& path) { artifacts_.push_back(path); }
    fs::path output(const std::string& name) const { return cfg_.output_dir / name; }

    void finish(int exit_code, const std::string& error, double seconds) const {
        io::Manifest m;
        m.command = command_;
        m.inputs = inputs_;
        m.inputs_hash = hash_;
        m.artifacts = artifacts_;
        m.workers = workers_;
        m.seed = cfg_.seed;
        m.wall_time = seconds;
        m.exit_code = exit_code;
        m.error = error;
        io::write_manifest(cfg_.output_dir / ("manifest_" + command_ + ".json"), m);
    }

private:
    int resolve_workers() const {
        if (opt_.workers > 0) return opt_.workers;
        if (cfg_.workers > 0) return cfg_.workers;
        if (const char* env = std::getenv(kWorkersEnv); env && *env) {
            try {
                const int w = std::stoi(env);
                if (w > 0) return w;
                if (w == 0) return omp_get_max_threads();
            } catch (const std::exception&) {
            }
            throw ConfigError(std::string(kWorkersEnv) + " must be a non-negative integer");
        }
        return omp_get_max_threads();
    }

    std::string command_;
    Options opt_;
    io::RunConfig cfg_;
    std::vector<fs::path> inputs_;
    std::vector<fs::path> artifacts_;
    std::string hash_;
    int workers_ = 0;
};

ordered_json cmd_sweep(Run& run) {
    const auto s = run.spectrum();
    const auto path = run.output("sweep.s2p");
    if (s.ports() == 2) {
        io::write_touchstone(s, path, {std::string("abring ") + ABRING_VERSION, "inputs_hash " + run.hash()});
        run.emit_file(path);
    }
    std::vector<std::string> cols{"f_Hz"};
    for (int i = 0; i < s.ports(); ++i) {
        for (int j = 0; j < s.ports(); ++j) cols.push_back("abs_S" + std::to_string(i + 1) + std::to_string(j + 1));
    }
    if (s.ports() == 2) cols.push_back("P21_minus_P12");
    auto t = run.table(cols);
    t.add_meta("ports", std::to_string(s.ports()));
    for (int k = 0; k < s.grid.size(); ++k) {
        std::vector<double> row{s.grid[k]};
        for (int i = 0; i < s.ports(); ++i) {
            for (int j = 0; j < s.ports(); ++j) row.push_back(std::abs(s.matrices[k](i, j)));
        }
        if (s.ports() == 2) row.push_back(std::norm(s.matrices[k](1, 0)) - std::norm(s.matrices[k](0, 1)));
        t.add_row(std::move(row));
    }
    run.emit("sweep", t);
    return {{"points", s.grid.size()}, {"ports", s.ports()}};
}

ordered_json cmd_delays(Run& run) {
    const auto s = run.spectrum();
    if (s.ports() != 2) throw ConfigError("delays needs a 2-port network");
    const auto t21 = transmission_delay(s, 0, 1);
    const auto t12 = transmission_delay(s, 1, 0);
    const auto tw = wigner_smith_delay(s);
    const auto& band = run.config().band;
    const double m21 = t21.band_mean_real(band.lo, band.hi);
    const double m12 = t12.band_mean_real(band.lo, band.hi);

    auto t = run.table({"f_Hz", "re_tau21_s", "im_tau21_s", "re_tau12_s", "im_tau12_s", "re_tauW_s",
                        "im_tauW_s", "valid"});
    t.add_meta("band_Hz", io::format_number(band.lo) + " " + io::format_number(band.hi));
    t.add_meta("mean_re_tau21_s", io::format_number(m21));
    t.add_meta("mean_re_tau12_s", io::format_number(m12));
    for (int k = 0; k < s.grid.size(); ++k) {
        t.add_row({s.grid[k], t21.values[k].real(), t21.values[k].imag(), t12.values[k].real(),
                   t12.values[k].imag(), tw.values[k].real(), tw.values[k].imag(),
                   static_cast<double>(t21.valid[k] && t12.valid[k] && tw.valid[k])});
    }
    run.emit("delays", t);
    return {{"mean_re_tau21_s", m21}, {"mean_re_tau12_s", m12}, {"ratio", m12 / m21}};
}

ordered_json metrics_json(const std::string& trace, const PulseMetrics& m, double t_ref) {
    ordered_json peaks = ordered_json::array();
    for (const auto& p : m.peaks) peaks.push_back({{"delay_s", p.time - t_ref}, {"amplitude_V", p.amplitude}});
    return {{"trace", trace},          {"arrival_s", m.arrival},     {"delay_s", m.arrival - t_ref},
            {"peak_amp_V", m.peak_amp}, {"ambiguous", m.ambiguous}, {"peaks", peaks}};
}

ordered_json cmd_pulse(Run& run) {
    const auto s = run.spectrum();
    if (s.ports() != 2) throw ConfigError("pulse needs a 2-port network");
    const auto& cfg = run.config();
    const auto vin = gaussian_pulse(cfg.pulse, cfg.sample_rate, cfg.duration);
    const auto v21 = propagate(s, vin, 0, 1);
    const auto v12 = propagate(s, vin, 1, 0);
    const auto v11 = propagate(s, vin, 0, 0);
    const auto v22 = propagate(s, vin, 1, 1);

    auto t = run.table({"t_s", "v_in_V", "v21_V", "v12_V", "v11_V", "v22_V"});
    t.add_meta("fc_Hz", io::format_number(cfg.pulse.fc));
    t.add_meta("fwhm_s", io::format_number(cfg.pulse.fwhm));
    for (int k = 0; k < vin.size(); ++k) {
        t.add_row({vin.time(k), vin.samples[k], v21.samples[k], v12.samples[k], v11.samples[k], v22.samples[k]});
    }
    run.emit("pulse", t);

    // JSON lines: one record per trace, then sigma_V. Peaks down to 1% of the
    // main one are listed so echoes and reflections are visible.
    const auto jsonl = run.output("pulse_metrics.jsonl");
    std::ofstream out(jsonl);
    if (!out) throw ConfigError("cannot write " + jsonl.string());
    const double t_ref = cfg.pulse.t_center;
    auto report = [&](const std::string& name, const TimeSeries& ts) {
        auto m = pulse_metrics(ts);
        m.peaks = envelope_peaks(ts, 0.01);
        out << metrics_json(name, m, t_ref).dump() << '\n';
        return m;
    };
    report("v_in", vin);
    const auto m21 = report("v21", v21);
    const auto m12 = report("v12", v12);
    report("v11", v11);
    report("v22", v22);
    const auto sv = sigma_v(v21, v12, vin);
    out << ordered_json{{"trace", "sigma_v"}, {"value", sv.value}, {"ambiguous", sv.ambiguous}}.dump() << '\n';
    run.emit_file(jsonl);
    return {{"delay21_s", m21.arrival - t_ref}, {"delay12_s", m12.arrival - t_ref}, {"sigma_v", sv.value}};
}

ordered_json cmd_pzfit(Run& run) {
    run.require_ring();
    const auto& cfg = run.config();
    const auto gammas = cfg.pz_gamma.values();
    FitOptions fo;
    fo.free_eta = cfg.pz_free_eta;
    const auto scan = zero_crossing_scan(cfg.ring, gammas, cfg.grid, cfg.pz_modes, fo, run.workers());

    auto t = run.table({"gamma_half_Np", "mode", "f_n_Hz", "Gamma_n_Hz", "z_re_Hz", "z_im_Hz", "confidence"});
    t.add_meta("crossing_Np", scan.crossing ? io::format_number(*scan.crossing) : "none");
    t.add_meta("zero_re_drift", io::format_number(scan.zero_re_drift));
    t.add_meta("pole_re_drift", io::format_number(scan.pole_re_drift));
    t.add_meta("confidence", "1 = poles trusted, 0 = zeros within 2 grid steps of the real axis");
    ordered_json diagnostics = ordered_json::array();
    for (const auto& p : scan.points) {
        for (std::size_t m = 0; m < p.fit.set.modes.size(); ++m) {
            const auto& mode = p.fit.set.modes[m];
            t.add_row({p.gamma_half, static_cast<double>(m), mode.f_n, mode.gamma_n, mode.z_re, mode.z_im,
                       p.fit.poles_low_confidence ? 0.0 : 1.0});
        }
        for (const auto& d : p.fit.diagnostics) diagnostics.push_back({{"gamma_half_Np", p.gamma_half}, {"message", d}});
    }
    run.emit("pzfit_trajectory", t);
    for (const auto& d : diagnostics) std::cerr << ordered_json{{"level", "warning"}, {"diagnostic", d}}.dump() << '\n';
    ordered_json out{{"zero_re_drift", scan.zero_re_drift}, {"pole_re_drift", scan.pole_re_drift}};
    out["crossing_Np"] = scan.crossing ? ordered_json(*scan.crossing) : ordered_json(nullptr);
    if (!scan.note.empty()) out["note"] = scan.note;
    return out;
}

ordered_json cmd_attnsweep(Run& run, const Options& opt) {
    run.require_ring();
    auto& cfg = run.config();
    if (opt.attn_mode == "frequency") cfg.attn_mode = AsymmetryMode::frequency;
    if (opt.attn_mode == "time") cfg.attn_mode = AsymmetryMode::time;
    if (opt.attn_variant == "balanced") cfg.attn_variant = RingVariant::balanced;
    if (opt.attn_variant == "unbalanced") cfg.attn_variant = RingVariant::unbalanced;

    AttenuationSweepOptions o;
    o.mode = cfg.attn_mode;
    o.variant = cfg.attn_variant;
    o.band = cfg.band;
    o.band_points = cfg.attn_band_points;
    o.pulse_grid = cfg.grid;
    o.pulse = cfg.pulse;
    o.sample_rate = cfg.sample_rate;
    o.duration = cfg.duration;
    o.workers = run.workers();
    const auto gammas = cfg.attn.values();
    const auto curve = attenuation_sweep(cfg.ring, gammas, o);

    const bool time = curve.mode == AsymmetryMode::time;
    auto t = run.table({"gamma_half_Np", time ? "sigma_v" : "mean_P21_minus_P12"});
    t.add_meta("mode", to_string(curve.mode));
    t.add_meta("variant", to_string(curve.variant));
    t.add_meta("gamma_label", curve.variant == RingVariant::balanced ? "per-bond Gamma_A/2" : "Gamma_A/2 (full Gamma_A on gyrator bond)");
    t.add_meta("band_Hz", io::format_number(o.band.lo) + " " + io::format_number(o.band.hi));
    t.add_meta("argmax_Np", io::format_number(curve.gamma_half[curve.argmax]));
    t.add_meta("rises_then_falls", curve.rises_then_falls ? "true" : "false");
    for (std::size_t i = 0; i < gammas.size(); ++i) t.add_row({curve.gamma_half[i], curve.value[i]});
    run.emit(std::string("attnsweep_") + to_string(curve.mode), t);
    return {{"argmax_Np", curve.gamma_half[curve.argmax]},
            {"peak_value", curve.value[curve.argmax]},
            {"rises_then_falls", curve.rises_then_falls},
            {"local_maxima", curve.local_maxima},
            {"ambiguous_pulses", curve.ambiguous_pulses}};
}

ordered_json cmd_noise(Run& run) {
    const auto s = run.spectrum();
    auto opts = run.config().noise;
    opts.workers = run.workers();
    const auto r = noise_transmission(s, opts);

    auto t = run.table({"f_Hz", "NP21", "NP12"});
    t.add_meta("source_psd", "1 per Hz, linear scale");
    t.add_meta("stochastic", r.stochastic ? "true" : "false");
    t.add_meta("realizations", std::to_string(r.realizations));
    t.add_meta("seed", std::to_string(opts.seed));
    t.add_meta("mean_ratio", io::format_number(r.mean_ratio));
    for (int k = 0; k < s.grid.size(); ++k) t.add_row({s.grid[k], r.np21[k], r.np12[k]});
    run.emit("noise", t);

    auto b = run.table({"f_center_Hz", "NP21_block", "NP12_block", "NP21_block_dB", "NP12_block_dB"});
    b.add_meta("block", std::to_string(r.block));
    b.add_meta("mean_ratio", io::format_number(r.mean_ratio));
    for (std::size_t i = 0; i < r.block_f.size(); ++i) {
        b.add_row({r.block_f[i], r.block21[i], r.block12[i], 10.0 * std::log10(r.block21[i]),
                   10.0 * std::log10(r.block12[i])});
    }
    run.emit("noise_blocks", b);
    return {{"mean_ratio", r.mean_ratio}, {"blocks", r.block_f.size()}};
}

int cmd_validate(const Options& opt, const std::vector<std::string>& files) {
    int problems = 0;
    auto check_netlist = [&](const fs::path& path) {
        const auto doc = io::read_netlist_doc(path);
        for (const auto& d : validate(doc.netlist)) {
            std::cerr << ordered_json{{"level", "error"}, {"file", path.string()}, {"component", d.component},
                                      {"message", d.message}}.dump()
                      << '\n';
            ++problems;
        }
    };
    std::vector<std::string> targets = files;
    if (!opt.config.empty()) targets.push_back(opt.config);
    if (!opt.netlist.empty()) targets.push_back(opt.netlist);
    if (targets.empty()) throw ConfigError("validate: give a config (-c), a netlist (--netlist) or files");
    for (const auto& f : targets) {
        const fs::path path(f);
        if (path.extension() == ".ini") {
            const auto cfg = io::read_run_config(path);
            if (cfg.netlist) check_netlist(*cfg.netlist);
        } else {
            check_netlist(path);
        }
    }
    std::cout << ordered_json{{"command", "validate"}, {"problems", problems}}.dump() << '\n';
    return problems == 0 ? 0 : kExitConfig;
}

void report_error(const char* kind, const std::string& message) {
    std::cerr << ordered_json{{"level", "error"}, {"kind", kind}, {"message", message}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering simulator for non-reciprocal microwave ring graphs"};
    app.set_version_flag("--version", std::string("abring ") + ABRING_VERSION);
    app.require_subcommand(1);

    Options opt;
    std::vector<std::string> validate_files;
    std::uint64_t seed = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opt.config, "RunConfig INI file")->check(CLI::ExistingFile);
        sub->add_option("--netlist", opt.netlist, "NetlistDoc file used instead of the ring model")
            ->check(CLI::ExistingFile);
        sub->add_option("-o,--output", opt.output, "output directory (overrides [run] output)");
        sub->add_option("-j,--workers", opt.workers,
                        std::string("worker threads; default from config, then ") + kWorkersEnv)
            ->check(CLI::NonNegativeNumber);
        sub->add_flag("--plot-data", opt.plot_data, "also write whitespace-separated .dat files for gnuplot");
        sub->add_option("--seed", seed, "seed for the stochastic noise mode")
            ->each([&](const std::string&) { opt.seed = seed; });
    };

    auto* sweep_cmd = app.add_subcommand("sweep", "S-matrix spectrum: .s2p and |S_ij| CSV");
    auto* delays_cmd = app.add_subcommand("delays", "transmission and Wigner-Smith time delays");
    auto* pulse_cmd = app.add_subcommand("pulse", "Gaussian pulse propagation and arrival metrics");
    auto* pzfit_cmd = app.add_subcommand("pzfit", "pole/zero fits across an attenuation scan");
    auto* attn_cmd = app.add_subcommand("attnsweep", "asymmetry versus lumped attenuation");
    auto* noise_cmd = app.add_subcommand("noise", "incoherent noise transmission with block averaging");
    auto* validate_cmd = app.add_subcommand("validate", "check configs and netlists; exit 2 on problems");
    for (auto* sub : {sweep_cmd, delays_cmd, pulse_cmd, pzfit_cmd, attn_cmd, noise_cmd, validate_cmd}) common(sub);
    attn_cmd->add_option("--mode", opt.attn_mode, "frequency or time")
        ->check(CLI::IsMember({"frequency", "time"}));
    attn_cmd->add_option("--variant", opt.attn_variant, "balanced or unbalanced")
        ->check(CLI::IsMember({"balanced", "unbalanced"}));
    validate_cmd->add_option("files", validate_files, "NetlistDoc or .ini files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "validate") {
        try {
            return cmd_validate(opt, validate_files);
        } catch (const ConfigError& e) {
            report_error("config", e.what());
            return kExitConfig;
        }
    }

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    std::optional<Run> run;
    try {
        run.emplace(name, opt);
        ordered_json summary;
        if (name == "sweep") summary = cmd_sweep(*run);
        if (name == "delays") summary = cmd_delays(*run);
        if (name == "pulse") summary = cmd_pulse(*run);
        if (name == "pzfit") summary = cmd_pzfit(*run);
        if (name == "attnsweep") summary = cmd_attnsweep(*run, opt);
        if (name == "noise") summary = cmd_noise(*run);
        const double seconds = elapsed();
        run->finish(0, "", seconds);
        ordered_json line{{"command", name}, {"status", "ok"}, {"wall_time_s", seconds}};
        line.update(summary);
        std::cout << line.dump() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        report_error("config", e.what());
        if (run) run->finish(kExitConfig, e.what(), elapsed());
        return kExitConfig;
    } catch (const ResonanceError& e) {
        report_error("resonance", e.what());
        if (run) run->finish(kExitNumerical, e.what(), elapsed());
        return kExitNumerical;
    } catch (const std::exception& e) {
        report_error("numerical", e.what());
        if (run) run->finish(kExitNumerical, e.what(), elapsed());
        return kExitNumerical;
    }
}
