#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "entsim/errors.hpp"
#include "entsim/linalg.hpp"
#include "entsim/two_qubit.hpp"

namespace entsim {

/// sigma_y (x) sigma_y in the |ee>,|eg>,|ge>,|gg> basis.
inline const Matrix4c& sigma_y_sigma_y() {
  static const Matrix4c m = [] {
    Matrix4c y = Matrix4c::Zero();
    y(0, 3) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    y(3, 0) = -1.0;
    return y;
  }();
  return m;
}

/// Eigenvalues of rho (syy) rho* (syy) below this floor are treated as exact
/// zeros.  The product has operator norm at most 1 for density-matrix inputs,
/// so its true eigenvalues are resolved to roughly 1e-14 at best; rank
/// deficiency is common here (every pure product state yields a nilpotent
/// product), and taking sqrt of the leftover noise would otherwise inflate it
/// from ~1e-16 to ~1e-8.
inline constexpr double kSpectrumFloor = 1e-12;

/// Signed pre-form of the concurrence: sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)
/// over the descending eigenvalues of rho (syy) rho* (syy).  Negative values
/// are kept; they quantify the distance from the separable boundary.
inline double lambda_value(const Matrix4c& rho) {
  validate_density_matrix(rho);
  const Matrix4c& y = sigma_y_sigma_y();
  const Matrix4c r = rho * y * rho.conjugate() * y;
  Eigen::ComplexEigenSolver<Matrix4c> es(r);
  if (es.info() != Eigen::Success)
    throw DomainError("lambda_value: eigensolver failed");
  std::array<double, 4> lams{};
  for (int i = 0; i < 4; ++i) {
    // The product of two positive semidefinite matrices has real nonnegative
    // spectrum; tiny imaginary/negative parts are numerical noise.
    const double lam = es.eigenvalues()(i).real();
    lams[i] = lam < kSpectrumFloor ? 0.0 : lam;
  }
  std::sort(lams.begin(), lams.end(), std::greater<>());
  return std::sqrt(lams[0]) - std::sqrt(lams[1]) - std::sqrt(lams[2]) - std::sqrt(lams[3]);
}

inline double concurrence(const Matrix4c& rho) { return std::fmax(0.0, lambda_value(rho)); }

}  // namespace entsim
