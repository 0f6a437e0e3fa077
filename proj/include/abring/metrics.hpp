#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "abring/pulse.hpp"
#include "abring/ring.hpp"
#include "abring/sweep.hpp"

namespace abring {

enum class AsymmetryMode { frequency, time, noise };
enum class RingVariant { balanced, unbalanced };

const char* to_string(AsymmetryMode mode);
const char* to_string(RingVariant variant);

struct Band {
    double lo = 0.0;  // Hz
    double hi = 0.0;
};

// |S21|^2 - |S12|^2 per grid point of a 2-port spectrum.
std::vector<double> asymmetry_spectrum(const FrequencySpectrum& spectrum);

// Arithmetic mean of series over grid points in [lo, hi].
double band_average(const FrequencyGrid& grid, std::span<const double> series, Band band);

// Ring for one attenuation value. gamma_half is the per-bond value Gamma_A/2;
// the unbalanced variant puts the full Gamma_A on the gyrator bond.
RingParams ring_at(const RingParams& base, double gamma_half, RingVariant variant);

struct AsymmetryCurve {
    std::vector<double> gamma_half;  // Np per bond
    std::vector<double> value;       // <P21 - P12> or sigma_V
    AsymmetryMode mode = AsymmetryMode::frequency;
    RingVariant variant = RingVariant::balanced;
    int argmax = 0;
    int local_maxima = 0;          // interior strict local maxima
    bool rises_then_falls = false; // interior argmax above both endpoints
    bool ambiguous_pulses = false; // time mode: some sigma_V used ambiguous peaks
};

struct AttenuationSweepOptions {
    AsymmetryMode mode = AsymmetryMode::frequency;
    RingVariant variant = RingVariant::balanced;
    Band band{8.25e9, 8.75e9};
    int band_points = 1001;                          // frequency mode grid over the band
    FrequencyGrid pulse_grid{7.0e9, 12.4e9, 5401};   // time mode sweep grid
    PulseSpec pulse{};                               // time mode; fc is set to the band center
    double sample_rate = kDefaultSampleRate;
    double duration = kDefaultRecordLength;
    int workers = 0;
};

// Parallel across gamma values; inner sweeps are serial.
AsymmetryCurve attenuation_sweep(const RingParams& base, std::span<const double> gamma_half,
                                 const AttenuationSweepOptions& options = {});

struct NoiseOptions {
    int block = 50;
    bool stochastic = false;
    int realizations = 10000;
    std::uint64_t seed = 1;
    int workers = 0;
};

struct NoiseReport {
    FrequencyGrid grid;
    std::vector<double> np21;  // |S21|^2 x unit source PSD
    std::vector<double> np12;
    std::vector<double> block_f;  // block centre frequencies
    std::vector<double> block21;
    std::vector<double> block12;
    double mean_ratio = 0.0;  // mean over grid of NP21 / NP12
    int block = 1;
    bool stochastic = false;
    int realizations = 0;
};

std::vector<double> block_average(std::span<const double> series, int block);

NoiseReport noise_transmission(const FrequencySpectrum& spectrum, const NoiseOptions& options = {});
NoiseReport noise_transmission(const RingParams& ring, const FrequencyGrid& grid,
                               const NoiseOptions& options = {});

} // namespace abring
