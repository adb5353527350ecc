#pragma once

#include <cmath>

#include "entsim/errors.hpp"
#include "entsim/linalg.hpp"
#include "entsim/two_qubit.hpp"

namespace entsim {

/// Spontaneous-emission rate, units 1/time; only the product gamma*t enters
/// the closed-form results.
using DecayRate = double;

/// Master-equation generator for collective decay into a common reservoir:
/// d(rho)/dt = (gamma/2)(2 S- rho S+ - rho S+S- - S+S- rho).
inline Matrix4c lindblad_rhs(const Matrix4c& rho, DecayRate gamma) {
  if (std::isnan(gamma) || gamma < 0.0)
    throw DomainError("lindblad_rhs: gamma must be >= 0");
  static const CollectiveOperators ops = collective_operators();
  static const Matrix4c number = ops.s_plus * ops.s_minus;
  const Matrix4c hop = ops.s_minus * rho * ops.s_plus;
  return 0.5 * gamma * (2.0 * hop - rho * number - number * rho);
}

struct IntegrationResult {
  TwoQubitDensityMatrix state;
  bool coarse_step_warning;  // set when gamma*dt > 0.1
};

/// Fixed-step RK4 integration of the master equation from rho0 over [0, t].
inline IntegrationResult integrate_master(const Matrix4c& rho0, DecayRate gamma,
                                          double t, int steps) {
  validate_density_matrix(rho0);
  if (std::isnan(gamma) || gamma < 0.0)
    throw DomainError("integrate_master: gamma must be >= 0");
  if (std::isnan(t) || t < 0.0 || std::isinf(t))
    throw DomainError("integrate_master: t must be finite and >= 0");
  if (steps < 1) throw DomainError("integrate_master: steps must be >= 1");

  const double dt = t / steps;
  IntegrationResult result{rho0, gamma * dt > 0.1};
  Matrix4c rho = rho0;
  for (int n = 0; n < steps; ++n) {
    const Matrix4c k1 = lindblad_rhs(rho, gamma);
    const Matrix4c k2 = lindblad_rhs(rho + 0.5 * dt * k1, gamma);
    const Matrix4c k3 = lindblad_rhs(rho + 0.5 * dt * k2, gamma);
    const Matrix4c k4 = lindblad_rhs(rho + dt * k3, gamma);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  result.state = rho;
  return result;
}

}  // namespace entsim
