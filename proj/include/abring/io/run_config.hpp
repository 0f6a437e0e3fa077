#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "abring/metrics.hpp"
#include "abring/pulse.hpp"
#include "abring/pzfit.hpp"
#include "abring/ring.hpp"

namespace abring::io {

// Gamma grid given as start/stop/step in Np per bond, stop inclusive.
struct GammaRange {
    double start = 0.0;
    double stop = 0.9;
    double step = 0.03;

    std::vector<double> values() const;
};

// INI file; every dimensioned value carries its unit. Relative paths resolve
// against the config file's directory.
//
//   [run]       output, workers, seed, netlist (optional: use instead of [ring])
//   [grid]      start, stop, points
//   [ring]      branch_length, gamma_upper, gamma_lower, gyrator, gyrator_phase, uniform_loss
//   [coax]      inner, outer, eps_r, tan_delta, rho
//   [band]      lo, hi
//   [pulse]     fc, fwhm, amplitude, t_center, sample_rate, duration
//   [attnsweep] start, stop, step, mode, variant, band_points
//   [noise]     block, stochastic, realizations
//   [pzfit]     modes, start, stop, step, free_eta
struct RunConfig {
    std::filesystem::path source;
    std::filesystem::path output_dir = "out";
    int workers = 0;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> netlist;

    FrequencyGrid grid{7.0e9, 12.4e9, 5401};
    bool grid_given = false;  // [grid] present; otherwise a netlist's sweep line may apply
    RingParams ring{};
    Band band{8.0e9, 9.0e9};
    PulseSpec pulse{};
    double sample_rate = kDefaultSampleRate;
    double duration = kDefaultRecordLength;
    GammaRange attn{};
    AsymmetryMode attn_mode = AsymmetryMode::frequency;
    RingVariant attn_variant = RingVariant::balanced;
    int attn_band_points = 1001;
    NoiseOptions noise{};
    int pz_modes = 7;
    GammaRange pz_gamma{0.0, 0.84, 0.04};
    bool pz_free_eta = false;

    // Band inside the grid, referenced paths exist.
    void check() const;
};

RunConfig read_run_config(const std::filesystem::path& path);

} // namespace abring::io
