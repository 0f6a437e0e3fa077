#include "abring/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include <omp.h>

namespace abring {

const char* to_string(AsymmetryMode mode) {
    switch (mode) {
    case AsymmetryMode::frequency: return "frequency";
    case AsymmetryMode::time: return "time";
    case AsymmetryMode::noise: return "noise";
    }
    return "?";
}

const char* to_string(RingVariant variant) {
    return variant == RingVariant::balanced ? "balanced" : "unbalanced";
}

std::vector<double> asymmetry_spectrum(const FrequencySpectrum& spectrum) {
    if (spectrum.ports() != 2) throw DomainError("asymmetry: need a 2-port spectrum");
    std::vector<double> out(spectrum.matrices.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto& s = spectrum.matrices[k];
        out[k] = std::norm(s(1, 0)) - std::norm(s(0, 1));
    }
    return out;
}

double band_average(const FrequencyGrid& grid, std::span<const double> series, Band band) {
    if (static_cast<int>(series.size()) != grid.size()) {
        throw DomainError("band_average: series length does not match grid");
    }
    double sum = 0.0;
    int count = 0;
    for (int k = 0; k < grid.size(); ++k) {
        if (grid[k] < band.lo || grid[k] > band.hi) continue;
        sum += series[k];
        ++count;
    }
    if (count == 0) throw DomainError("band_average: no grid points in band");
    return sum / count;
}

RingParams ring_at(const RingParams& base, double gamma_half, RingVariant variant) {
    RingParams p = base;
    if (variant == RingVariant::balanced) {
        p.gamma_upper = gamma_half;
        p.gamma_lower = gamma_half;
    } else {
        p.gamma_upper = 0.0;
        p.gamma_lower = 2.0 * gamma_half;
    }
    return p;
}

namespace {

template <typename F>
void parallel_for(int n, int workers, F&& body) {
    if (workers <= 0) workers = omp_get_max_threads();
    std::exception_ptr error;
    int error_index = n;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(abring_metrics_error)
            if (i < error_index) {
                error_index = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
}

} // namespace

AsymmetryCurve attenuation_sweep(const RingParams& base, std::span<const double> gamma_half,
                                 const AttenuationSweepOptions& options) {
    if (gamma_half.empty()) throw DomainError("attenuation_sweep: empty gamma grid");
    if (!std::ranges::is_sorted(gamma_half)) {
        throw DomainError("attenuation_sweep: gamma grid must be ascending");
    }
    if (!(options.band.hi > options.band.lo)) throw DomainError("attenuation_sweep: empty band");
    if (options.mode == AsymmetryMode::noise) {
        throw DomainError("attenuation_sweep: mode must be frequency or time");
    }
    const int n = static_cast<int>(gamma_half.size());
    AsymmetryCurve out;
    out.gamma_half.assign(gamma_half.begin(), gamma_half.end());
    out.value.resize(n);
    out.mode = options.mode;
    out.variant = options.variant;
    std::vector<std::uint8_t> ambiguous(n, 0);

    const FrequencyGrid band_grid(options.band.lo, options.band.hi, options.band_points);
    PulseSpec pulse = options.pulse;
    pulse.fc = 0.5 * (options.band.lo + options.band.hi);
    TimeSeries vin;
    if (options.mode == AsymmetryMode::time) vin = gaussian_pulse(pulse, options.sample_rate, options.duration);

    parallel_for(n, options.workers, [&](int i) {
        const CompiledNetlist ring(build_ab_ring(ring_at(base, gamma_half[i], options.variant)));
        if (options.mode == AsymmetryMode::frequency) {
            const auto spectrum = sweep_serial(ring, band_grid);
            out.value[i] = band_average(band_grid, asymmetry_spectrum(spectrum), options.band);
        } else {
            const auto spectrum = sweep_serial(ring, options.pulse_grid);
            const auto v21 = propagate(spectrum, vin, 0, 1);
            const auto v12 = propagate(spectrum, vin, 1, 0);
            const auto s = sigma_v(v21, v12, vin);
            out.value[i] = s.value;
            ambiguous[i] = s.ambiguous;
        }
    });

    out.ambiguous_pulses = std::ranges::any_of(ambiguous, [](auto a) { return a != 0; });
    out.argmax = static_cast<int>(std::ranges::max_element(out.value) - out.value.begin());
    for (int i = 1; i + 1 < n; ++i) {
        if (out.value[i] > out.value[i - 1] && out.value[i] > out.value[i + 1]) ++out.local_maxima;
    }
    out.rises_then_falls = out.argmax > 0 && out.argmax < n - 1 &&
                           out.value[out.argmax] > out.value.front() &&
                           out.value[out.argmax] > out.value.back();
    return out;
}

std::vector<double> block_average(std::span<const double> series, int block) {
    if (block < 1) throw DomainError("block_average: block must be >= 1");
    std::vector<double> out;
    for (std::size_t start = 0; start < series.size(); start += block) {
        const std::size_t stop = std::min(series.size(), start + block);
        double sum = 0.0;
        for (std::size_t k = start; k < stop; ++k) sum += series[k];
        out.push_back(sum / static_cast<double>(stop - start));
    }
    return out;
}

namespace {

// Mean |S a|^2 over complex Gaussian amplitudes a with E|a|^2 = 1. Each grid
// point owns a substream seeded from (seed, index, direction).
double sampled_power(Complex s, std::uint64_t seed, int index, int direction, int realizations) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(direction)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double gain = std::norm(s);
    double sum = 0.0;
    for (int r = 0; r < realizations; ++r) {
        const double re = normal(rng);
        const double im = normal(rng);
        sum += gain * (re * re + im * im);
    }
    return sum / realizations;
}

} // namespace

NoiseReport noise_transmission(const FrequencySpectrum& spectrum, const NoiseOptions& options) {
    if (spectrum.ports() != 2) throw DomainError("noise: need a 2-port spectrum");
    if (options.block < 1) throw DomainError("noise: block must be >= 1");
    if (options.stochastic && options.realizations < 1) {
        throw DomainError("noise: realizations must be >= 1");
    }
    const int n = spectrum.grid.size();
    NoiseReport out{spectrum.grid, {}, {}, {}, {}, {}};
    out.np21.resize(n);
    out.np12.resize(n);
    out.block = options.block;
    out.stochastic = options.stochastic;
    out.realizations = options.stochastic ? options.realizations : 0;

    parallel_for(n, options.workers, [&](int k) {
        const Complex s21 = spectrum.matrices[k](1, 0);
        const Complex s12 = spectrum.matrices[k](0, 1);
        if (options.stochastic) {
            out.np21[k] = sampled_power(s21, options.seed, k, 0, options.realizations);
            out.np12[k] = sampled_power(s12, options.seed, k, 1, options.realizations);
        } else {
            out.np21[k] = std::norm(s21);
            out.np12[k] = std::norm(s12);
        }
    });

    std::vector<double> f(n);
    for (int k = 0; k < n; ++k) f[k] = spectrum.grid[k];
    out.block_f = block_average(f, options.block);
    out.block21 = block_average(out.np21, options.block);
    out.block12 = block_average(out.np12, options.block);

    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        if (!(out.np12[k] > 0.0)) throw DomainError("noise: zero reverse transmission, ratio undefined");
        sum += out.np21[k] / out.np12[k];
    }
    out.mean_ratio = sum / n;
    return out;
}

NoiseReport noise_transmission(const RingParams& ring, const FrequencyGrid& grid,
                               const NoiseOptions& options) {
    const auto spectrum = sweep(build_ab_ring(ring), grid, options.workers);
    return noise_transmission(spectrum, options);
}

} // namespace abring
