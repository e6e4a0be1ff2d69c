#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spinsim {

inline constexpr const char* kVersion = "0.1.0";

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;
using Vec3    = Eigen::Vector3d;

/// Malformed experiment description or config file (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hilbert-space dimension not representable (CLI exit code 3).
class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical abort: non-finite values, step-size violation, failed
/// eigendecomposition (CLI exit code 4).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Chain of classical spin vectors, each of fixed length S (units of hbar).
struct ClassicalConfig {
    std::vector<Vec3> spins;

    int n_sites() const { return static_cast<int>(spins.size()); }
};

}  // namespace spinsim
