// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "abring/delays.hpp"
#include "abring/metrics.hpp"
#include "abring/pulse.hpp"
#include "abring/pzfit.hpp"
#include "abring/ring.hpp"
#include "../oracles/path_sum.hpp"

using namespace abring;

namespace {

namespace tol {
constexpr double unitarity = 1e-10;
constexpr double reciprocity = 1e-12;
constexpr double ac1_seconds = 10.0;
constexpr double ratio = 0.05;
constexpr double experiment_rel = 0.10;
constexpr double experiment_ratio = 0.1;
constexpr double asymmetry = 0.03;
constexpr double bell_start = 1e-10;
constexpr double bell_peak = 0.07;
constexpr double arrival = 0.05e-9;
constexpr double reflection = 0.1e-9;
constexpr double consistency = 0.03;
constexpr double round_trip = 1e-3;
constexpr double crossing = 0.05;
constexpr double drift = 0.005;
constexpr double oracle = 1e-8;
constexpr double noise_lo = 1.2;
constexpr double noise_hi = 1.5;
constexpr double stochastic_rel = 0.01;
} // namespace tol

// Experiment-matched ring: 0.8771 m circumference, cable loss only.
RingParams experiment_ring() {
    RingParams p;
    p.branch_electrical_length = 0.43855;
    p.uniform_loss = true;
    return p;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool within(double x, double target, double t) { return std::abs(x - target) <= t; }

Outcome ac1() {
    const auto t0 = std::chrono::steady_clock::now();
    RingParams p;
    p.gyrator_mode = GyratorMode::ideal;
    const FrequencyGrid grid(7e9, 12.4e9, 5501);
    const auto gyr = sweep(build_ab_ring(p), grid);
    p.gyrator_phase = 0.0;
    const auto line = sweep(build_ab_ring(p), grid);
    double worst_u = 0.0, worst_r = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
        const auto& s = gyr.matrices[k];
        const CMatrix e = s * s.adjoint() - CMatrix::Identity(2, 2);
        worst_u = std::max(worst_u, e.cwiseAbs().rowwise().sum().maxCoeff());
        worst_r = std::max(worst_r, std::abs(line.matrices[k](1, 0) - line.matrices[k](0, 1)));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst_u < tol::unitarity && worst_r < tol::reciprocity && secs < tol::ac1_seconds,
            fmt("max|SS'-I|inf=%.2e max|S21-S12|=%.2e time=%.2fs", worst_u, worst_r, secs)};
}

Outcome ac2() {
    auto means = [](const RingParams& p) {
        const auto spec = sweep(build_ab_ring(p), FrequencyGrid(8e9, 9e9, 2001));
        return std::pair{transmission_delay(spec, 0, 1).band_mean_real(8e9, 9e9),
                         transmission_delay(spec, 1, 0).band_mean_real(8e9, 9e9)};
    };
    const auto [l21, l12] = means(RingParams{});
    const double r = l12 / l21;
    const auto [e21, e12] = means(experiment_ring());
    const double re = e12 / e21;
    const bool ok = within(r, 3.0, tol::ratio) && within(e21, 1.49e-9, tol::experiment_rel * 1.49e-9) &&
                    within(e12, 4.47e-9, tol::experiment_rel * 4.47e-9) &&
                    within(re, 2.99, tol::experiment_ratio);
    return {ok, fmt("lossless ratio=%.4f; experiment tau21=%.4f ns tau12=%.4f ns ratio=%.4f", r,
                    e21 * 1e9, e12 * 1e9, re)};
}

Outcome ac3() {
    RingParams p;
    p.gamma_upper = p.gamma_lower = 0.18;
    const FrequencyGrid g(8.25e9, 8.75e9, 1001);
    const double v = band_average(g, asymmetry_spectrum(sweep(build_ab_ring(p), g)), {8.25e9, 8.75e9});
    return {within(v, 0.28, tol::asymmetry), fmt("<P21-P12>=%.4f", v)};
}

std::vector<double> bell_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 30; ++i) g.push_back(0.03 * i);
    return g;
}

Outcome ac4() {
    const auto g = bell_grid();
    const auto c = attenuation_sweep(RingParams{}, g);
    RingParams lossy;
    lossy.uniform_loss = true;
    const auto u = attenuation_sweep(lossy, std::vector<double>{0.0});
    const double peak = c.gamma_half[c.argmax];
    const bool ok = std::abs(c.value.front()) <= tol::bell_start && c.rises_then_falls &&
                    c.local_maxima == 1 && within(peak, 0.3, tol::bell_peak) && u.value[0] > 0.0;
    return {ok, fmt("start=%.2e peak at %.2f Np (%.4f) local maxima=%d; uniform loss at 0: %.4e",
                    c.value.front(), peak, c.value[c.argmax], c.local_maxima, u.value[0])};
}

struct Traces {
    TimeSeries vin, v21, v12, v11;
};

Traces pulse_traces(double gamma_upper, double gamma_lower) {
    RingParams p;
    p.gamma_upper = gamma_upper;
    p.gamma_lower = gamma_lower;
    p.uniform_loss = true;
    const auto spec = sweep(build_ab_ring(p), FrequencyGrid(7e9, 12.4e9, 5401));
    PulseSpec ps;
    ps.fc = 9.7e9;
    Traces t;
    t.vin = gaussian_pulse(ps);
    t.v21 = propagate(spec, t.vin, 0, 1);
    t.v12 = propagate(spec, t.vin, 1, 0);
    t.v11 = propagate(spec, t.vin, 0, 0);
    return t;
}

// Envelope peak nearest `delay` after the input centre, if within `window`.
std::optional<EnvelopePeak> peak_near(const TimeSeries& ts, double delay, double window) {
    const double t = PulseSpec{}.t_center + delay;
    std::optional<EnvelopePeak> best;
    for (const auto& pk : envelope_peaks(ts, 0.01)) {
        if (std::abs(pk.time - t) <= window && (!best || pk.amplitude > best->amplitude)) best = pk;
    }
    return best;
}

Outcome ac5() {
    const double tc = PulseSpec{}.t_center;
    const auto bal = pulse_traces(0.175, 0.175);
    const auto m21 = pulse_metrics(bal.v21);
    const auto m12 = pulse_metrics(bal.v12);
    const double a21 = m21.arrival - tc, a12 = m12.arrival - tc;
    const bool bal_ok = within(a21, 1e-9, tol::arrival) && within(a12, 3e-9, tol::arrival) &&
                        m12.peak_amp < m21.peak_amp;

    const auto unb = pulse_traces(0.0, 0.35);
    const auto refl = peak_near(unb.v11, 2e-9, tol::reflection);
    const auto main21 = pulse_metrics(unb.v21);
    const auto main12 = pulse_metrics(unb.v12);
    const auto co21 = peak_near(unb.v21, 3e-9, tol::arrival);
    const auto co12 = peak_near(unb.v12, 1e-9, tol::arrival);
    const bool unb_ok = refl && refl->amplitude > 0.0 && co21 && co12 &&
                        co21->amplitude < main21.peak_amp && co12->amplitude < main12.peak_amp &&
                        within(main21.arrival - tc, 1e-9, tol::arrival) &&
                        within(main12.arrival - tc, 3e-9, tol::arrival);
    return {bal_ok && unb_ok,
            fmt("balanced: t21=%.3f ns |V21|=%.3f t12=%.3f ns |V12|=%.3f; unbalanced: reflection %.3f ns "
                "(%.3f), co-arrivals v21@%.3f ns (%.3f) v12@%.3f ns (%.3f)",
                a21 * 1e9, m21.peak_amp, a12 * 1e9, m12.peak_amp, refl ? (refl->time - tc) * 1e9 : NAN,
                refl ? refl->amplitude : 0.0, co21 ? (co21->time - tc) * 1e9 : NAN,
                co21 ? co21->amplitude : 0.0, co12 ? (co12->time - tc) * 1e9 : NAN,
                co12 ? co12->amplitude : 0.0)};
}

Outcome ac6() {
    const auto g = bell_grid();
    AttenuationSweepOptions o;
    const auto freq = attenuation_sweep(RingParams{}, g, o);
    o.mode = AsymmetryMode::time;
    const auto time = attenuation_sweep(RingParams{}, g, o);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(freq.value[i] - time.value[i]));
    return {worst < tol::consistency,
            fmt("max|<P21-P12> - sigma_V|=%.4f over %zu points%s", worst, g.size(),
                time.ambiguous_pulses ? " (ambiguous pulses)" : "")};
}

Outcome ac7() {
    PoleZeroSet truth;
    const double fn[5] = {8.1e9, 8.35e9, 8.6e9, 8.85e9, 9.1e9};
    for (int i = 0; i < 5; ++i) truth.modes.push_back({fn[i], 30e6 + 5e6 * i, fn[i] + 3e6 * (i - 2), 20e6 - 8e6 * i});
    const FrequencyGrid g(7.95e9, 9.25e9, 2601);
    ComplexDelaySpectrum d{g, {}, {}, DelayKind::wigner_smith};
    for (int k = 0; k < g.size(); ++k) {
        d.values.push_back(model_tau(truth, g[k]));
        d.valid.push_back(1);
    }
    const auto r = fit(d, 5, std::nullopt, 0.0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const auto& a = r.set.modes[i];
        const auto& b = truth.modes[i];
        worst = std::max({worst, std::abs(a.f_n - b.f_n) / b.f_n, std::abs(a.gamma_n - b.gamma_n) / b.gamma_n,
                          std::abs(a.z_re - b.z_re) / b.z_re, std::abs(a.z_im - b.z_im) / std::abs(b.z_im)});
    }
    std::vector<double> gammas;
    for (int i = 0; i <= 21; ++i) gammas.push_back(0.04 * i);
    const auto scan = zero_crossing_scan(RingParams{}, gammas, FrequencyGrid(7.87e9, 9.62e9, 3501), 7);
    const bool ok = worst < tol::round_trip && scan.crossing && within(*scan.crossing, 0.52, tol::crossing) &&
                    scan.zero_re_drift < tol::drift && scan.pole_re_drift < tol::drift;
    return {ok, fmt("round trip worst rel=%.2e; crossing=%.4f Np; Re drift zeros=%.3f%% poles=%.3f%%", worst,
                    scan.crossing.value_or(NAN), 100 * scan.zero_re_drift, 100 * scan.pole_re_drift)};
}

Outcome ac8() {
    RingParams p;
    p.gyrator_mode = GyratorMode::ideal;
    p.gamma_upper = p.gamma_lower = 0.18;
    p.uniform_loss = true;
    oracle::RingSpec r;
    r.gamma_upper = r.gamma_lower = 0.18;
    r.uniform_loss = true;
    const CompiledNetlist ring(build_ab_ring(p));
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> freq(7e9, 12.4e9);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double f = freq(rng);
        const auto s = ring.evaluate(f);
        const auto o = oracle::path_sum(r, f, 1e-12);
        worst = std::max({worst, std::abs(s(0, 0) - o.s11), std::abs(s(1, 0) - o.s21),
                          std::abs(s(0, 1) - o.s12), std::abs(s(1, 1) - o.s22)});
    }
    return {worst < tol::oracle, fmt("max|dS|=%.2e at 50 frequencies", worst)};
}

Outcome ac9() {
    const FrequencyGrid g(7e9, 12.4e9, 3201);
    const auto spectrum = sweep(build_ab_ring(experiment_ring()), g);
    NoiseOptions o;
    o.block = 50;
    const auto det = noise_transmission(spectrum, o);
    o.stochastic = true;
    o.realizations = 10000;
    o.seed = 7;
    const auto sto = noise_transmission(spectrum, o);
    const double rel = std::abs(sto.mean_ratio / det.mean_ratio - 1.0);
    const bool ok = det.mean_ratio >= tol::noise_lo && det.mean_ratio <= tol::noise_hi && rel < tol::stochastic_rel;
    return {ok, fmt("NP21/NP12 deterministic=%.4f stochastic=%.4f (rel %.2e)", det.mean_ratio, sto.mean_ratio, rel)};
}

Outcome ac10() {
    RingParams p;
    const FrequencyGrid g(7e9, 12.4e9, 5401);
    const auto spec = sweep(build_ab_ring(p), g);
    const double delta = p.mode_spacing();
    const double step = g.step();
    std::vector<double> peaks;
    for (int k = 1; k + 1 < g.size(); ++k) {
        const double a = std::norm(spec.matrices[k - 1](1, 0));
        const double b = std::norm(spec.matrices[k](1, 0));
        const double c = std::norm(spec.matrices[k + 1](1, 0));
        if (b > a && b > c) peaks.push_back(g[k]);
    }
    // Every peak on a comb line, and every comb line in the band has a peak.
    double worst = 0.0;
    for (double f : peaks) worst = std::max(worst, std::abs(f - 0.5 * delta * std::round(2.0 * f / delta)));
    int integer_lines = 0, half_lines = 0, missing = 0;
    for (int j = static_cast<int>(std::ceil(2.0 * (g.start() + step) / delta));
         0.5 * j * delta < g.stop() - step; ++j) {
        const double line = 0.5 * j * delta;
        const bool hit = std::ranges::any_of(peaks, [&](double f) { return std::abs(f - line) <= step; });
        if (!hit) ++missing;
        (j % 2 == 0 ? integer_lines : half_lines) += hit;
    }
    const bool ok = worst <= step && missing == 0 && integer_lines > 0 && half_lines > 0;
    return {ok, fmt("%zu peaks; worst offset %.3f MHz (step %.3f MHz); n*D lines %d, (m-1/2)*D lines %d, missing %d",
                    peaks.size(), worst / 1e6, step / 1e6, integer_lines, half_lines, missing)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10},
    };
    int failed = 0;
    for (const auto& [id, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%-4s %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
