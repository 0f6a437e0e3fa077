#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "abring/sweep.hpp"

namespace abring::io {

// Touchstone v1 with option line `# HZ S RI R 50` only.
void write_touchstone(const FrequencySpectrum& spectrum, const std::filesystem::path& path,
                      const std::vector<std::string>& comments = {});

// 2-port files on a uniform grid.
FrequencySpectrum read_touchstone(const std::filesystem::path& path);

struct NPortData {
    std::vector<double> frequencies;
    std::vector<CMatrix> matrices;
};

// Any port count taken from the .sNp extension; the grid need not be uniform.
NPortData read_touchstone_nport(const std::filesystem::path& path);

} // namespace abring::io
