#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "abring/sweep.hpp"

namespace abring {

enum class DelayKind { transmission, wigner_smith };

// Complex time delay per grid point, in seconds. Real part is the group
// delay; the imaginary part tracks d/df of the log-magnitude.
struct ComplexDelaySpectrum {
    FrequencyGrid grid;
    std::vector<Complex> values;
    std::vector<std::uint8_t> valid;  // false at endpoints and at zeros of the differentiated function
    DelayKind kind = DelayKind::transmission;
    int from = -1;  // transmission only, 0-based
    int to = -1;

    // Arithmetic mean of Re tau over valid points with lo <= f <= hi.
    double band_mean_real(double lo, double hi) const;
};

// Values below this magnitude are treated as zeros and marked invalid.
inline constexpr double kDelayMagnitudeFloor = 1e-14;

// tau = -(i / 2pi) d/df log conj(g) for samples g of a function on `grid`,
// by second-order central differences of the quotient g'/g.
ComplexDelaySpectrum log_derivative_delay(const FrequencyGrid& grid, std::span<const Complex> g);

// tau_T for S_{to,from}.
ComplexDelaySpectrum transmission_delay(const FrequencySpectrum& spectrum, int from, int to);

// tau_W = (1/M) tau(det S).
ComplexDelaySpectrum wigner_smith_delay(const FrequencySpectrum& spectrum);

} // namespace abring
