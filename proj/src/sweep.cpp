#include "abring/sweep.hpp"

#include <cmath>
#include <exception>

#include <omp.h>

namespace abring {

FrequencyGrid::FrequencyGrid(double f_start, double f_stop, int n_points)
    : start_(f_start), stop_(f_stop), n_(n_points) {
    if (!(f_start > 0.0)) throw DomainError("frequency grid: start must be > 0");
    if (!(f_stop > f_start)) throw DomainError("frequency grid: stop must exceed start");
    if (n_points < 2) throw DomainError("frequency grid: need at least 2 points");
}

std::vector<Complex> FrequencySpectrum::element(int to, int from) const {
    if (to < 0 || from < 0 || to >= ports() || from >= ports()) {
        throw DomainError("spectrum: port index out of range");
    }
    std::vector<Complex> out(matrices.size());
    for (std::size_t k = 0; k < matrices.size(); ++k) out[k] = matrices[k](to, from);
    return out;
}

void FrequencySpectrum::check() const {
    if (static_cast<int>(matrices.size()) != grid.size()) {
        throw DomainError("spectrum: matrix count does not match grid");
    }
    for (const auto& m : matrices) {
        if (m.rows() != ports() || m.cols() != ports()) {
            throw DomainError("spectrum: inconsistent matrix dimensions");
        }
    }
}

FrequencySpectrum sweep_serial(const CompiledNetlist& netlist, const FrequencyGrid& grid) {
    FrequencySpectrum out{grid, {}};
    out.matrices.reserve(grid.size());
    for (int k = 0; k < grid.size(); ++k) out.matrices.push_back(netlist.evaluate(grid[k]));
    return out;
}

FrequencySpectrum sweep_parallel(const CompiledNetlist& netlist, const FrequencyGrid& grid,
                                 int workers) {
    const int n = grid.size();
    FrequencySpectrum out{grid, std::vector<CMatrix>(n)};
    if (workers <= 0) workers = omp_get_max_threads();

    // Exceptions cannot cross the parallel region; keep the lowest failing index.
    std::exception_ptr error;
    int error_index = n;
#pragma omp parallel for schedule(static) num_threads(workers)
    for (int k = 0; k < n; ++k) {
        try {
            out.matrices[k] = netlist.evaluate(grid[k]);
        } catch (...) {
#pragma omp critical(abring_sweep_error)
            if (k < error_index) {
                error_index = k;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

FrequencySpectrum sweep(const Netlist& netlist, const FrequencyGrid& grid, int workers) {
    const CompiledNetlist compiled(netlist);
    if (workers == 1) return sweep_serial(compiled, grid);
    return sweep_parallel(compiled, grid, workers);
}

} // namespace abring
