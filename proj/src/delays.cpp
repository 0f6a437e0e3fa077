#include "abring/delays.hpp"

#include <cmath>

namespace abring {

double ComplexDelaySpectrum::band_mean_real(double lo, double hi) const {
    double sum = 0.0;
    int count = 0;
    for (int k = 0; k < grid.size(); ++k) {
        const double f = grid[k];
        if (f < lo || f > hi || !valid[k]) continue;
        sum += values[k].real();
        ++count;
    }
    if (count == 0) throw DomainError("band mean: no valid points in band");
    return sum / count;
}

ComplexDelaySpectrum log_derivative_delay(const FrequencyGrid& grid, std::span<const Complex> g) {
    const int n = grid.size();
    if (static_cast<int>(g.size()) != n) throw DomainError("delay: sample count does not match grid");
    ComplexDelaySpectrum out{grid, std::vector<Complex>(n), std::vector<std::uint8_t>(n, 0)};
    const double h = grid.step();

    // conj(q) with q = g'/g; tau = -(i/2pi) conj(q) = -(Im q + i Re q) / 2pi
    auto delay = [](Complex q) { return Complex(-q.imag(), -q.real()) / kTwoPi; };

#pragma omp parallel for schedule(static)
    for (int k = 0; k < n; ++k) {
        if (std::abs(g[k]) < kDelayMagnitudeFloor) continue;
        Complex derivative;
        if (k == 0) {
            derivative = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
        } else if (k == n - 1) {
            derivative = (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) / (2.0 * h);
        } else {
            derivative = (g[k + 1] - g[k - 1]) / (2.0 * h);
        }
        out.values[k] = delay(derivative / g[k]);
        // one-sided endpoints are reported but excluded from statistics
        out.valid[k] = k > 0 && k < n - 1;
    }
    return out;
}

ComplexDelaySpectrum transmission_delay(const FrequencySpectrum& spectrum, int from, int to) {
    if (spectrum.grid.size() < 3) throw DomainError("delay: need at least 3 grid points");
    const auto s = spectrum.element(to, from);
    auto out = log_derivative_delay(spectrum.grid, s);
    out.kind = DelayKind::transmission;
    out.from = from;
    out.to = to;
    return out;
}

ComplexDelaySpectrum wigner_smith_delay(const FrequencySpectrum& spectrum) {
    if (spectrum.grid.size() < 3) throw DomainError("delay: need at least 3 grid points");
    std::vector<Complex> det(spectrum.matrices.size());
    for (std::size_t k = 0; k < det.size(); ++k) det[k] = spectrum.matrices[k].determinant();
    auto out = log_derivative_delay(spectrum.grid, det);
    const double m = spectrum.ports();
    for (auto& v : out.values) v /= m;
    out.kind = DelayKind::wigner_smith;
    return out;
}

} // namespace abring
