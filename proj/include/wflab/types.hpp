#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace wflab {

using Real = double;
using Complex = std::complex<Real>;
using CArray = Eigen::ArrayXcd;
using RArray = Eigen::ArrayXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};
inline constexpr Real kInf = std::numeric_limits<Real>::infinity();

/// Thrown when an operation is called outside its contract
/// (wrong domain tag, grid mismatch, invalid patch, ...).
class ContractError : public std::runtime_error {
public:
    explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed configuration / expression / weight syntax.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// ⟨x⟩ = sqrt(1 + |x|²), the Japanese bracket.
template <typename Scalar>
inline Scalar bracket(Scalar x) {
    return std::sqrt(Scalar(1) + x * x);
}

inline Real bracket2(Real x, Real y) { return std::sqrt(1.0 + x * x + y * y); }

}  // namespace wflab
