#include "abring/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

namespace abring {

namespace {

// fftw planner calls are not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!p) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan p) : plan_(p) {
        if (!plan_) throw std::runtime_error("fftw: plan creation failed");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::scoped_lock lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

// Forward real transform; returns n/2 + 1 complex bins.
std::vector<Complex> forward(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    auto in = fftw_buffer<double>(n);
    auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
    std::unique_ptr<Plan> plan;
    {
        std::scoped_lock lock(planner_mutex());
        plan = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE));
    }
    std::copy(x.begin(), x.end(), in.get());
    plan->execute();
    std::vector<Complex> bins(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) bins[k] = {out[k][0], out[k][1]};
    return bins;
}

// Inverse of `forward`, normalized.
std::vector<double> inverse(const std::vector<Complex>& bins, int n) {
    auto in = fftw_buffer<fftw_complex>(n / 2 + 1);
    auto out = fftw_buffer<double>(n);
    std::unique_ptr<Plan> plan;
    {
        std::scoped_lock lock(planner_mutex());
        plan = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(n, in.get(), out.get(), FFTW_ESTIMATE));
    }
    for (int k = 0; k <= n / 2; ++k) {
        in[k][0] = bins[k].real();
        in[k][1] = bins[k].imag();
    }
    // DC and Nyquist bins of a real signal are real.
    in[0][1] = 0.0;
    if (n % 2 == 0) in[n / 2][1] = 0.0;
    plan->execute();
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k) x[k] = out[k] / n;
    return x;
}

Complex interpolate(const FrequencyGrid& grid, const std::vector<Complex>& s, double f) {
    const double pos = (f - grid.start()) / grid.step();
    const int k = std::clamp(static_cast<int>(std::floor(pos)), 0, grid.size() - 2);
    const double w = pos - k;
    return s[k] * (1.0 - w) + s[k + 1] * w;
}

void check_series(const TimeSeries& ts) {
    if (!(ts.sample_rate > 0.0)) throw DomainError("time series: sample rate must be > 0");
    if (ts.size() < 4) throw DomainError("time series: need at least 4 samples");
}

} // namespace

void PulseSpec::check() const {
    if (!(fc > 0.0)) throw DomainError("pulse: fc must be > 0");
    if (!(fwhm > 0.0)) throw DomainError("pulse: fwhm must be > 0");
    if (!std::isfinite(amplitude)) throw DomainError("pulse: amplitude must be finite");
}

TimeSeries gaussian_pulse(const PulseSpec& spec, double sample_rate, double duration) {
    spec.check();
    const double highest = spec.fc + 3.0 / spec.fwhm;
    if (!(sample_rate > 2.0 * highest)) {
        std::ostringstream msg;
        msg << "pulse: sample rate " << sample_rate << " Hz is below 2 x " << highest << " Hz";
        throw DomainError(msg.str());
    }
    if (spec.t_center - 5.0 * spec.fwhm < 0.0 || spec.t_center + 5.0 * spec.fwhm > duration) {
        throw DomainError("pulse: record does not cover t_center +/- 5 fwhm");
    }
    TimeSeries out{sample_rate, 0.0, {}};
    const int n = static_cast<int>(std::lround(duration * sample_rate));
    out.samples.resize(n);
    const double k = 4.0 * std::numbers::ln2 / (spec.fwhm * spec.fwhm);
    for (int i = 0; i < n; ++i) {
        const double dt = out.time(i) - spec.t_center;
        out.samples[i] = spec.amplitude * std::exp(-k * dt * dt) * std::cos(kTwoPi * spec.fc * dt);
    }
    return out;
}

TimeSeries propagate(const FrequencySpectrum& spectrum, const TimeSeries& input, int from, int to) {
    check_series(input);
    const auto s = spectrum.element(to, from);
    const FrequencyGrid& grid = spectrum.grid;
    const int n = input.size();
    auto bins = forward(input.samples);

    double total = 0.0;
    double outside = 0.0;
    for (int k = 0; k < static_cast<int>(bins.size()); ++k) {
        const double f = k * input.sample_rate / n;
        const double energy = std::norm(bins[k]);
        total += energy;
        if (f < grid.start() || f > grid.stop()) {
            outside += energy;
            bins[k] = 0.0;
        } else {
            bins[k] *= interpolate(grid, s, f);
        }
    }
    if (total > 0.0 && outside / total > kMaxOutOfBandEnergy) {
        std::ostringstream msg;
        msg << "propagate: input energy outside the swept band, fraction " << outside / total;
        throw DomainError(msg.str());
    }
    return {input.sample_rate, input.t0, inverse(bins, n)};
}

TimeSeries envelope(const TimeSeries& ts) {
    check_series(ts);
    const int n = ts.size();
    const auto bins = forward(ts.samples);
    auto buf = fftw_buffer<fftw_complex>(n);
    std::unique_ptr<Plan> plan;
    {
        std::scoped_lock lock(planner_mutex());
        plan = std::make_unique<Plan>(
            fftw_plan_dft_1d(n, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
    }
    for (int k = 0; k < n; ++k) {
        Complex z = 0.0;
        if (k == 0 || (n % 2 == 0 && k == n / 2)) {
            z = bins[k];
        } else if (k < (n + 1) / 2) {
            z = 2.0 * bins[k];
        }
        buf[k][0] = z.real();
        buf[k][1] = z.imag();
    }
    plan->execute();
    TimeSeries out{ts.sample_rate, ts.t0, std::vector<double>(n)};
    for (int k = 0; k < n; ++k) out.samples[k] = std::hypot(buf[k][0], buf[k][1]) / n;
    return out;
}

double sample_at(const TimeSeries& ts, double t) {
    const double pos = (t - ts.t0) * ts.sample_rate;
    if (pos < 0.0 || pos > ts.size() - 1) return 0.0;
    const int k = std::min(static_cast<int>(pos), ts.size() - 2);
    const double w = pos - k;
    return ts.samples[k] * (1.0 - w) + ts.samples[k + 1] * w;
}

std::vector<EnvelopePeak> envelope_peaks(const TimeSeries& ts, double rel_threshold) {
    const auto env = envelope(ts);
    const auto& e = env.samples;
    const double top = *std::ranges::max_element(e);
    std::vector<EnvelopePeak> out;
    if (!(top > 0.0)) return out;
    const int n = env.size();
    for (int k = 0; k < n; ++k) {
        const double left = k > 0 ? e[k - 1] : -1.0;
        const double right = k + 1 < n ? e[k + 1] : -1.0;
        if (!(e[k] >= left && e[k] > right) || e[k] < rel_threshold * top) continue;
        double offset = 0.0;
        double amp = e[k];
        if (k > 0 && k + 1 < n) {
            const double denom = left - 2.0 * e[k] + right;
            if (denom < 0.0) {
                offset = 0.5 * (left - right) / denom;
                amp = e[k] - 0.25 * (left - right) * offset;
            }
        }
        out.push_back({env.time(k) + offset / env.sample_rate, amp});
    }
    std::ranges::sort(out, [](const auto& a, const auto& b) { return a.amplitude > b.amplitude; });
    return out;
}

PulseMetrics pulse_metrics(const TimeSeries& ts) {
    PulseMetrics out;
    out.peaks = envelope_peaks(ts, 0.5);
    if (out.peaks.empty()) throw DomainError("pulse_metrics: signal is identically zero");
    out.arrival = out.peaks.front().time;
    out.peak_amp = out.peaks.front().amplitude;
    out.ambiguous = out.peaks.size() > 1;
    return out;
}

SigmaV sigma_v(const TimeSeries& v21, const TimeSeries& v12, const TimeSeries& vin) {
    const auto m21 = pulse_metrics(v21);
    const auto m12 = pulse_metrics(v12);
    const auto min = pulse_metrics(vin);
    const double a21 = m21.peak_amp;
    const double a12 = m12.peak_amp;
    return {(a21 * a21 - a12 * a12) / (min.peak_amp * min.peak_amp),
            m21.ambiguous || m12.ambiguous || min.ambiguous};
}

} // namespace abring
