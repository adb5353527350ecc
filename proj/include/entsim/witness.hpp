#pragma once

#include <cmath>

#include "entsim/linalg.hpp"
#include "entsim/two_qubit.hpp"

namespace entsim {

/// 4x4 Hermitian observable; negative expectation certifies entanglement.
using WitnessOperator = Matrix4c;

/// Optimal entanglement witness for the collective-decay family, diagonal in
/// {|ee>, |psi+>, |psi->, |gg>} with eigenvalues 1 + 1/sqrt2, 1/sqrt2,
/// -1/sqrt2 and 1 - 1/sqrt2.
inline const WitnessOperator& witness_operator() {
  static const WitnessOperator w = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix4c m = Matrix4c::Zero();
    m += (1.0 + s) * projector(basis_ket(kEE));
    m += s * projector(psi_plus());
    m -= s * projector(psi_minus());
    m += (1.0 - s) * projector(basis_ket(kGG));
    return m;
  }();
  return w;
}

/// Witness expectation value Tr(W rho).
inline double witness_expectation(const Matrix4c& rho) {
  return (witness_operator() * rho).trace().real();
}

/// Lambda recovered from the witness: Tr(W rho) / (1 - sqrt2).  Coincides
/// with lambda_value on the collective-decay family of states.
inline double lambda_from_witness(const Matrix4c& rho) {
  validate_density_matrix(rho);
  return witness_expectation(rho) / (1.0 - std::sqrt(2.0));
}

}  // namespace entsim
