#include "abring/pzfit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include <omp.h>

#include "abring/levmar.hpp"

namespace abring {

void PoleZeroSet::sort_modes() {
    std::ranges::sort(modes, {}, &Mode::f_n);
}

namespace {

struct Lorentz {
    double re;
    double im;
};

// Contribution of one mode in units where the prefactor is 1, at offset
// u = f - f_n (pole) and v = f - z_re (zero), widths b = Gamma + eta, a = Im z - eta.
Lorentz mode_terms(double u, double b, double v, double a) {
    Lorentz out{0.0, 0.0};
    const double e = v * v + a * a;
    if (e == 0.0) throw DomainError("model_tau: zero on the real axis at the evaluation frequency");
    const double d = u * u + b * b;
    if (d == 0.0) throw DomainError("model_tau: pole on the real axis at the evaluation frequency");
    out.re = a / e + b / d;
    out.im = -v / e + u / d;
    return out;
}

} // namespace

Complex model_tau(const PoleZeroSet& pzs, double f) {
    if (pzs.m_ports < 1) throw DomainError("model_tau: m_ports must be >= 1");
    double re = 0.0;
    double im = 0.0;
    for (const auto& m : pzs.modes) {
        const auto t = mode_terms(f - m.f_n, m.gamma_n + pzs.eta, f - m.z_re, m.z_im - pzs.eta);
        re += t.re;
        im += t.im;
    }
    return Complex(re, im) / (kTwoPi * pzs.m_ports);
}

namespace {

// Fit data in normalized units x = (f - center) / scale, tau' = 2 pi M scale tau.
struct FitProblem {
    double center = 0.0;
    double scale = 1.0;
    std::vector<double> x;
    std::vector<Complex> d;
    int n_modes = 0;
    bool free_eta = false;
    double eta = 0.0;  // normalized, used when fixed

    Eigen::Index n_params() const { return 4 * n_modes + (free_eta ? 1 : 0); }

    double eta_of(const Eigen::VectorXd& p) const { return free_eta ? p[4 * n_modes] : eta; }

    void residuals(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) const {
        const auto k_count = static_cast<Eigen::Index>(x.size());
        r.resize(2 * k_count);
        if (jac) jac->setZero(2 * k_count, n_params());
        const double e = eta_of(p);
        for (Eigen::Index k = 0; k < k_count; ++k) {
            double re = 0.0;
            double im = 0.0;
            for (int m = 0; m < n_modes; ++m) {
                const double u = x[k] - p[4 * m];
                const double b = p[4 * m + 1] + e;
                const double v = x[k] - p[4 * m + 2];
                const double a = p[4 * m + 3] - e;
                const double dd = u * u + b * b;
                const double ee = v * v + a * a;
                re += a / ee + b / dd;
                im += -v / ee + u / dd;
                if (!jac) continue;
                const double dd2 = dd * dd;
                const double ee2 = ee * ee;
                auto& J = *jac;
                // pole: d/df_n (u -> -1) and d/db
                J(k, 4 * m) = 2.0 * u * b / dd2;
                J(k_count + k, 4 * m) = (u * u - b * b) / dd2;
                const double re_b = (u * u - b * b) / dd2;
                const double im_b = -2.0 * u * b / dd2;
                J(k, 4 * m + 1) = re_b;
                J(k_count + k, 4 * m + 1) = im_b;
                // zero: d/dz_re (v -> -1) and d/da
                J(k, 4 * m + 2) = 2.0 * v * a / ee2;
                J(k_count + k, 4 * m + 2) = (a * a - v * v) / ee2;
                const double re_a = (v * v - a * a) / ee2;
                const double im_a = 2.0 * v * a / ee2;
                J(k, 4 * m + 3) = re_a;
                J(k_count + k, 4 * m + 3) = im_a;
                if (free_eta) {
                    J(k, 4 * n_modes) += re_b - re_a;
                    J(k_count + k, 4 * n_modes) += im_b - im_a;
                }
            }
            r[k] = re - d[k].real();
            r[k_count + k] = im - d[k].imag();
        }
    }

    // Normalized units put the band at +-n_modes/2. Poles and zeros stay
    // within half a band of its edges, widths below the band width.
    bool feasible(const Eigen::VectorXd& p) const {
        if (!p.allFinite()) return false;
        const double e = eta_of(p);
        const double reach = n_modes;
        for (int m = 0; m < n_modes; ++m) {
            const double width = p[4 * m + 1] + e;
            if (!(width > 0.0) || width > reach) return false;
            if (std::abs(p[4 * m]) > reach || std::abs(p[4 * m + 2]) > reach) return false;
            if (std::abs(p[4 * m + 3]) > reach) return false;
        }
        return true;
    }
};

struct BandSamples {
    std::vector<double> f;
    std::vector<Complex> tau;
};

BandSamples band_samples(const ComplexDelaySpectrum& delay, const FitOptions& options) {
    const bool whole = options.band_lo == 0.0 && options.band_hi == 0.0;
    if (!whole && !(options.band_hi > options.band_lo)) {
        throw DomainError("fit: band_hi must exceed band_lo");
    }
    BandSamples out;
    for (int k = 0; k < delay.grid.size(); ++k) {
        const double f = delay.grid[k];
        if (!delay.valid[k]) continue;
        if (!whole && (f < options.band_lo || f > options.band_hi)) continue;
        if (!std::isfinite(delay.values[k].real()) || !std::isfinite(delay.values[k].imag())) {
            throw DomainError("fit: delay is not finite on the band");
        }
        out.f.push_back(f);
        out.tau.push_back(delay.values[k]);
    }
    if (out.f.size() < 3) throw DomainError("fit: fewer than 3 valid points in band");
    return out;
}

int ports_of(const ComplexDelaySpectrum& delay) {
    return delay.kind == DelayKind::wigner_smith ? 2 : 1;
}

} // namespace

PoleZeroSet auto_init(const ComplexDelaySpectrum& delay, int n_modes, double eta, int m_ports,
                      const FitOptions& options) {
    if (n_modes < 1) throw DomainError("auto_init: n_modes must be >= 1");
    const auto band = band_samples(delay, options);
    const auto n = static_cast<int>(band.f.size());
    const double width = band.f.back() - band.f.front();
    const double step = delay.grid.step();
    const double separation =
        options.min_peak_separation > 0.0 ? options.min_peak_separation : 0.5 * width / n_modes;

    std::vector<double> mag(n);
    for (int k = 0; k < n; ++k) mag[k] = std::abs(band.tau[k].real());
    std::vector<int> peaks;
    for (int k = 1; k + 1 < n; ++k) {
        if (mag[k] >= mag[k - 1] && mag[k] > mag[k + 1]) peaks.push_back(k);
    }
    std::ranges::sort(peaks, [&](int a, int b) { return mag[a] > mag[b]; });

    std::vector<int> chosen;
    for (int k : peaks) {
        const bool clear = std::ranges::all_of(chosen, [&](int c) {
            return std::abs(band.f[k] - band.f[c]) >= separation - step;
        });
        if (clear) chosen.push_back(k);
        if (static_cast<int>(chosen.size()) == n_modes) break;
    }
    if (static_cast<int>(chosen.size()) < n_modes) {
        std::ostringstream msg;
        msg << "auto_init: found " << chosen.size() << " separated peaks, need " << n_modes;
        throw DomainError(msg.str());
    }

    PoleZeroSet out;
    out.eta = eta;
    out.m_ports = m_ports;
    for (int k : chosen) {
        const double half = 0.5 * mag[k];
        int lo = k;
        int hi = k;
        while (lo > 0 && mag[lo] > half) --lo;
        while (hi < n - 1 && mag[hi] > half) ++hi;
        const double hwhm = std::max(0.5 * (band.f[hi] - band.f[lo]), step);
        const double sign = band.tau[k].real() >= 0.0 ? 1.0 : -1.0;
        const double pole_width = std::max(hwhm, 0.25 * separation);
        out.modes.push_back({band.f[k], pole_width - eta, band.f[k], sign * hwhm + eta});
    }
    out.sort_modes();
    return out;
}

FitResult fit(const ComplexDelaySpectrum& delay, int n_modes, std::optional<PoleZeroSet> init,
              double eta, const FitOptions& options) {
    const auto band = band_samples(delay, options);
    const int m_ports = ports_of(delay);
    if (n_modes < 1) throw DomainError("fit: n_modes must be >= 1");
    PoleZeroSet start = init ? *init : auto_init(delay, n_modes, eta, m_ports, options);
    if (static_cast<int>(start.modes.size()) != n_modes) {
        throw DomainError("fit: initial set does not have n_modes modes");
    }
    start.m_ports = m_ports;
    if (!options.free_eta) start.eta = eta;

    FitProblem problem;
    problem.center = 0.5 * (band.f.front() + band.f.back());
    problem.scale = (band.f.back() - band.f.front()) / n_modes;
    problem.n_modes = n_modes;
    problem.free_eta = options.free_eta;
    problem.eta = start.eta / problem.scale;
    const double tau_scale = kTwoPi * m_ports * problem.scale;
    for (std::size_t k = 0; k < band.f.size(); ++k) {
        problem.x.push_back((band.f[k] - problem.center) / problem.scale);
        problem.d.push_back(band.tau[k] * tau_scale);
    }

    Eigen::VectorXd p0(problem.n_params());
    for (int m = 0; m < n_modes; ++m) {
        const auto& mode = start.modes[m];
        p0[4 * m] = (mode.f_n - problem.center) / problem.scale;
        p0[4 * m + 1] = mode.gamma_n / problem.scale;
        p0[4 * m + 2] = (mode.z_re - problem.center) / problem.scale;
        p0[4 * m + 3] = mode.z_im / problem.scale;
    }
    if (options.free_eta) p0[4 * n_modes] = problem.eta;
    if (!problem.feasible(p0)) throw DomainError("fit: initial set violates Gamma_n + eta > 0 or lies far outside the band");

    LevMarOptions lm;
    lm.max_iterations = options.max_iterations;
    lm.relative_tolerance = options.relative_tolerance;
    const auto res = levenberg_marquardt(
        [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* j) {
            problem.residuals(p, r, j);
        },
        p0, lm, [&](const Eigen::VectorXd& p) { return problem.feasible(p); });

    FitResult out;
    out.set.m_ports = m_ports;
    out.set.eta = problem.eta_of(res.params) * problem.scale;
    for (int m = 0; m < n_modes; ++m) {
        out.set.modes.push_back({problem.center + problem.scale * res.params[4 * m],
                                 problem.scale * res.params[4 * m + 1],
                                 problem.center + problem.scale * res.params[4 * m + 2],
                                 problem.scale * res.params[4 * m + 3]});
    }
    out.set.sort_modes();
    out.residual_norm = std::sqrt(2.0 * res.cost) / tau_scale;
    out.iterations = res.iterations;
    out.converged = res.converged;
    out.cost_history = res.cost_history;
    if (!res.converged) {
        out.diagnostics.push_back("not converged after " + std::to_string(res.iterations) +
                                  " iterations; parameters are best-so-far");
    }
    if (!res.collinear.empty()) {
        static constexpr const char* names[] = {"f_n", "Gamma_n", "z_re", "z_im"};
        std::ostringstream msg;
        msg << "degenerate Jacobian, collinear parameters:";
        for (int j : res.collinear) {
            if (j == 4 * n_modes) {
                msg << " eta";
            } else {
                msg << ' ' << names[j % 4] << '[' << j / 4 << ']';
            }
        }
        out.diagnostics.push_back(msg.str());
    }
    const double threshold = 2.0 * delay.grid.step();
    out.poles_low_confidence = std::ranges::any_of(
        out.set.modes, [&](const Mode& m) { return std::abs(m.z_im) < threshold; });
    if (out.poles_low_confidence) {
        out.diagnostics.push_back("zeros within 2 grid steps of the real axis; poles low-confidence");
    }
    return out;
}

ZeroCrossingScan zero_crossing_scan(const RingParams& ring, std::span<const double> gamma_half,
                                    const FrequencyGrid& grid, int n_modes,
                                    const FitOptions& options, int workers) {
    if (gamma_half.size() < 2) throw DomainError("zero_crossing_scan: need at least 2 gamma values");
    if (!std::ranges::is_sorted(gamma_half)) {
        throw DomainError("zero_crossing_scan: gamma grid must be ascending");
    }
    const double center = 0.5 * (grid.start() + grid.stop());
    const double eta = ring.uniform_loss ? eta_of_f(center, ring.coax) / kTwoPi : 0.0;
    FitOptions opts = options;
    if (opts.min_peak_separation == 0.0) opts.min_peak_separation = 0.5 * ring.mode_spacing();

    const int n = static_cast<int>(gamma_half.size());
    ZeroCrossingScan out;
    out.points.resize(n);
    if (workers <= 0) workers = omp_get_max_threads();
    std::exception_ptr error;
    int error_index = n;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int i = 0; i < n; ++i) {
        try {
            RingParams p = ring;
            p.gamma_upper = gamma_half[i];
            p.gamma_lower = gamma_half[i];
            const CompiledNetlist compiled(build_ab_ring(p));
            const auto delay = wigner_smith_delay(sweep_serial(compiled, grid));
            ScanPoint point;
            point.gamma_half = gamma_half[i];
            point.fit = fit(delay, n_modes, std::nullopt, eta, opts);
            double sum = 0.0;
            for (const auto& m : point.fit.set.modes) sum += m.z_im;
            point.mean_zero_im = sum / n_modes;
            out.points[i] = std::move(point);
        } catch (...) {
#pragma omp critical(abring_scan_error)
            if (i < error_index) {
                error_index = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);

    for (int i = 0; i + 1 < n; ++i) {
        const double y0 = out.points[i].mean_zero_im;
        const double y1 = out.points[i + 1].mean_zero_im;
        if ((y0 > 0.0) != (y1 > 0.0)) {
            const double g0 = out.points[i].gamma_half;
            const double g1 = out.points[i + 1].gamma_half;
            out.crossing = g0 + (g1 - g0) * y0 / (y0 - y1);
            break;
        }
    }
    if (!out.crossing) out.note = "no sign change of mean Im z_n in range; trajectory is monotone";

    const auto& ref = out.points.front().fit.set.modes;
    for (const auto& point : out.points) {
        const auto& modes = point.fit.set.modes;
        for (int m = 0; m < n_modes; ++m) {
            out.zero_re_drift =
                std::max(out.zero_re_drift, std::abs(modes[m].z_re - ref[m].z_re) / ref[m].z_re);
            if (!point.fit.poles_low_confidence) {
                out.pole_re_drift =
                    std::max(out.pole_re_drift, std::abs(modes[m].f_n - ref[m].f_n) / ref[m].f_n);
            }
        }
    }
    return out;
}

} // namespace abring
