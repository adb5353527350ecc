#pragma once

#include <Eigen/Dense>
#include <complex>

namespace entsim {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

/// Largest absolute entry of a - b.
inline double max_abs_diff(const Matrix4c& a, const Matrix4c& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Trace distance (1/2)||a - b||_1 for Hermitian a, b.
inline double trace_distance(const Matrix4c& a, const Matrix4c& b) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace entsim
