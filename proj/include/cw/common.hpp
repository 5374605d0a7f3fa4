#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cw {

using cxd = std::complex<double>;

// Dense complex matrix used for bundle-valued quantities (ranks stay small).
using MatC = Eigen::MatrixXcd;
// Real matrices/vectors bounded by the maximum chart dimension; stack-allocated.
inline constexpr int kMaxDim = 6;
using MatD = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using VecD = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Bad arguments or malformed configuration (CLI exit code 2).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Point outside a chart's usable interior.
class ChartDomainError : public std::domain_error {
public:
    explicit ChartDomainError(const std::string& what) : std::domain_error(what) {}
};

// Metric not invertible at an evaluation point.
class DegenerateMetricError : public std::runtime_error {
public:
    explicit DegenerateMetricError(const std::string& what) : std::runtime_error(what) {}
};

inline MatC to_complex(const MatD& m) {
    MatC r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = cxd(m(i, j), 0.0);
    return r;
}

}  // namespace cw
