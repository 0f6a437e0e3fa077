#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abring/delays.hpp"
#include "abring/ring.hpp"

namespace abring {

// Pole f_n - i Gamma_n and zero z_re + i z_im, all in Hz.
struct Mode {
    double f_n = 0.0;
    double gamma_n = 0.0;
    double z_re = 0.0;
    double z_im = 0.0;
};

struct PoleZeroSet {
    std::vector<Mode> modes;
    double eta = 0.0;  // Hz, uniform attenuation offset (eta_of_f / 2pi)
    int m_ports = 2;

    void sort_modes();
};

// Wigner-Smith delay of the pole/zero model, 1/(2 pi M) times the sum of the
// zero Lorentzians (width Im z - eta) and pole Lorentzians (width Gamma + eta).
Complex model_tau(const PoleZeroSet& pzs, double f);

struct FitOptions {
    int max_iterations = 200;
    double relative_tolerance = 1e-10;
    bool free_eta = false;
    // Restrict the fit to [band_lo, band_hi]; zeros mean the whole grid.
    double band_lo = 0.0;
    double band_hi = 0.0;
    // Minimum spacing of auto-init peaks in Hz; zero picks a quarter of the
    // fit band per mode.
    double min_peak_separation = 0.0;
};

struct FitResult {
    PoleZeroSet set;
    double residual_norm = 0.0;  // |tau_model - tau_data| over the band, seconds
    int iterations = 0;
    bool converged = false;
    std::vector<double> cost_history;
    bool poles_low_confidence = false;
    std::vector<std::string> diagnostics;
};

// Poles at the tallest |Re tau| peaks, zeros at the conjugate positions.
PoleZeroSet auto_init(const ComplexDelaySpectrum& delay, int n_modes, double eta, int m_ports,
                      const FitOptions& options = {});

FitResult fit(const ComplexDelaySpectrum& delay, int n_modes, std::optional<PoleZeroSet> init,
              double eta, const FitOptions& options = {});

struct ScanPoint {
    double gamma_half = 0.0;  // Np per bond
    FitResult fit;
    double mean_zero_im = 0.0;  // Hz
};

struct ZeroCrossingScan {
    std::vector<ScanPoint> points;
    std::optional<double> crossing;  // Np per bond
    double zero_re_drift = 0.0;      // max relative shift of Re z_n over the scan
    double pole_re_drift = 0.0;      // same for f_n, over points with trusted poles
    std::string note;
};

// Per gamma: balanced ring with both bonds at gamma, Wigner-Smith delay on
// `grid`, auto-initialized fit. Parallel across gamma values.
ZeroCrossingScan zero_crossing_scan(const RingParams& ring, std::span<const double> gamma_half,
                                    const FrequencyGrid& grid, int n_modes,
                                    const FitOptions& options = {}, int workers = 0);

} // namespace abring
