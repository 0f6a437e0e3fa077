#pragma once

#include <vector>

#include "abring/sweep.hpp"

namespace abring {

struct TimeSeries {
    double sample_rate = 0.0;  // Hz
    double t0 = 0.0;           // s
    std::vector<double> samples;

    int size() const { return static_cast<int>(samples.size()); }
    double time(int k) const { return t0 + k / sample_rate; }
    double duration() const { return samples.size() / sample_rate; }
};

// Gaussian amplitude envelope (FWHM of the amplitude) on a cosine carrier.
struct PulseSpec {
    double fc = 8.5e9;         // Hz
    double fwhm = 1e-9;        // s
    double amplitude = 1.0;    // V
    double t_center = 5e-9;    // s

    void check() const;
};

inline constexpr double kDefaultSampleRate = 64e9;   // Hz
inline constexpr double kDefaultRecordLength = 64e-9; // s
// Largest tolerated fraction of input energy outside the swept band.
inline constexpr double kMaxOutOfBandEnergy = 1e-6;

TimeSeries gaussian_pulse(const PulseSpec& spec, double sample_rate = kDefaultSampleRate,
                          double duration = kDefaultRecordLength);

// Output at port `to` for `input` driven at port `from` (0-based), by
// multiplying the input spectrum with S_{to,from}. Bins outside the swept band
// are zeroed.
TimeSeries propagate(const FrequencySpectrum& spectrum, const TimeSeries& input, int from, int to);

// Magnitude of the analytic signal.
TimeSeries envelope(const TimeSeries& ts);

// Linear interpolation of the samples at time t (0 outside the record).
double sample_at(const TimeSeries& ts, double t);

struct EnvelopePeak {
    double time = 0.0;
    double amplitude = 0.0;
};

// Local maxima of the envelope above rel_threshold * global maximum, with
// parabolic refinement, in descending amplitude.
std::vector<EnvelopePeak> envelope_peaks(const TimeSeries& ts, double rel_threshold = 0.5);

struct PulseMetrics {
    double arrival = 0.0;   // s, envelope maximum
    double peak_amp = 0.0;  // V
    bool ambiguous = false; // another peak exceeds half the main one
    std::vector<EnvelopePeak> peaks;
};

PulseMetrics pulse_metrics(const TimeSeries& ts);

struct SigmaV {
    double value = 0.0;
    bool ambiguous = false;
};

// (|V21|^2 - |V12|^2) / |Vin|^2 from envelope peak amplitudes.
SigmaV sigma_v(const TimeSeries& v21, const TimeSeries& v12, const TimeSeries& vin);

} // namespace abring
