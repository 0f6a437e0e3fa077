#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace abring::io {

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

// Hash over file names and contents in the given order, as 16 hex digits.
std::string hash_inputs(const std::vector<std::filesystem::path>& inputs);

// abring, Eigen, FFTW, Boost, compiler.
std::map<std::string, std::string> library_versions();

struct Manifest {
    std::string command;
    std::vector<std::filesystem::path> inputs;
    std::string inputs_hash;
    std::vector<std::filesystem::path> artifacts;
    int workers = 1;
    std::uint64_t seed = 0;
    double wall_time = 0.0;  // s
    int exit_code = 0;
    std::string error;
};

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

} // namespace abring::io
