#pragma once

#include <vector>

#include "abring/netlist.hpp"

namespace abring {

// Uniform frequency grid, f_start < f_stop, n_points >= 2.
class FrequencyGrid {
public:
    FrequencyGrid(double f_start, double f_stop, int n_points);

    double start() const { return start_; }
    double stop() const { return stop_; }
    int size() const { return n_; }
    double step() const { return (stop_ - start_) / (n_ - 1); }
    double operator[](int k) const { return k == n_ - 1 ? stop_ : start_ + k * step(); }

    // Grid with the same spacing translated by `shift` Hz.
    FrequencyGrid shifted(double shift) const { return {start_ + shift, stop_ + shift, n_}; }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

private:
    double start_;
    double stop_;
    int n_;
};

struct FrequencySpectrum {
    FrequencyGrid grid;
    std::vector<CMatrix> matrices;

    int ports() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
    // S_{to,from} over the grid.
    std::vector<Complex> element(int to, int from) const;
    void check() const;
};

// Reference implementation: one point after another.
FrequencySpectrum sweep_serial(const CompiledNetlist& netlist, const FrequencyGrid& grid);

// OpenMP kernel over grid points; results are bit-identical to sweep_serial.
// workers <= 0 uses the OpenMP default.
FrequencySpectrum sweep_parallel(const CompiledNetlist& netlist, const FrequencyGrid& grid,
                                 int workers = 0);

FrequencySpectrum sweep(const Netlist& netlist, const FrequencyGrid& grid, int workers = 0);

} // namespace abring
