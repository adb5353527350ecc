#pragma once

#include <cmath>

#include "entsim/errors.hpp"
#include "entsim/linalg.hpp"

namespace entsim {

/// Two-qubit basis order used throughout: |ee>, |eg>, |ge>, |gg>.
enum BasisIndex : int { kEE = 0, kEG = 1, kGE = 2, kGG = 3 };

using TwoQubitDensityMatrix = Matrix4c;

inline Vector4c basis_ket(int index) {
  if (index < 0 || index > 3) throw DomainError("basis_ket: index out of range");
  Vector4c v = Vector4c::Zero();
  v(index) = 1.0;
  return v;
}

inline Vector4c psi_plus() {
  Vector4c v = Vector4c::Zero();
  v(kEG) = v(kGE) = 1.0 / std::sqrt(2.0);
  return v;
}

inline Vector4c psi_minus() {
  Vector4c v = Vector4c::Zero();
  v(kEG) = 1.0 / std::sqrt(2.0);
  v(kGE) = -1.0 / std::sqrt(2.0);
  return v;
}

inline Matrix4c projector(const Vector4c& v) { return v * v.adjoint(); }

/// Collective raising/lowering operators S+- = sum_i sigma_i^+-.
struct CollectiveOperators {
  Matrix4c s_plus;
  Matrix4c s_minus;
};

inline CollectiveOperators collective_operators() {
  Matrix4c sp = Matrix4c::Zero();
  sp(kEE, kGE) = 1.0;
  sp(kEE, kEG) = 1.0;
  sp(kEG, kGG) = 1.0;
  sp(kGE, kGG) = 1.0;
  return {sp, sp.adjoint()};
}

/// Checks Hermiticity, unit trace and positivity; throws DomainError.
inline void validate_density_matrix(const Matrix4c& rho, double tol = 1e-9) {
  if (max_abs_diff(rho, rho.adjoint()) > tol)
    throw DomainError("density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    throw DomainError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  if (es.eigenvalues().minCoeff() < -tol)
    throw DomainError("density matrix has a negative eigenvalue");
}

}  // namespace entsim
