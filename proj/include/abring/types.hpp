#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace abring {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kSpeedOfLight = 299792458.0;           // m/s
inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;       // H/m
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Invalid argument or parameter outside the model's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// (I - S_II P) is numerically singular: a lossless trapped mode sits on the
// evaluation frequency.
class ResonanceError : public std::runtime_error {
public:
    ResonanceError(double frequency, double rcond);
    double frequency() const noexcept { return frequency_; }
    double rcond() const noexcept { return rcond_; }

private:
    double frequency_;
    double rcond_;
};

// Malformed or unsupported input file / configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FormatError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace abring
