#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "abring/types.hpp"

namespace abring::test {

inline std::filesystem::path source_dir() { return ABRING_SOURCE_DIR; }

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("abring_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline double unitarity_error(const CMatrix& s) {
    return (s * s.adjoint() - CMatrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

} // namespace abring::test
