#include "abring/io/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>
#include <json.hpp>

#include "abring/types.hpp"

namespace abring::io {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ULL;
    }
    return state;
}

std::string hash_inputs(const std::vector<std::filesystem::path>& inputs) {
    std::uint64_t h = fnv1a64("");
    for (const auto& p : inputs) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw ConfigError("cannot read input " + p.string());
        const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        h = fnv1a64(p.filename().string(), h);
        h = fnv1a64(std::string_view("\0", 1), h);
        h = fnv1a64(content, h);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::map<std::string, std::string> library_versions() {
    return {
        {"abring", ABRING_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"fftw", fftw_version},
        {"boost", BOOST_LIB_VERSION},
        {"compiler", __VERSION__},
    };
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["inputs"] = nlohmann::json::array();
    for (const auto& p : m.inputs) j["inputs"].push_back(p.string());
    j["inputs_hash"] = m.inputs_hash;
    j["versions"] = library_versions();
    j["workers"] = m.workers;
    j["seed"] = m.seed;
    j["wall_time_s"] = m.wall_time;
    j["artifacts"] = nlohmann::json::array();
    for (const auto& p : m.artifacts) j["artifacts"].push_back(p.filename().string());
    j["exit_code"] = m.exit_code;
    if (!m.error.empty()) j["error"] = m.error;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace abring::io
