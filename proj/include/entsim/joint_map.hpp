#pragma once

#include <cmath>

#include "entsim/errors.hpp"
#include "entsim/linalg.hpp"
#include "entsim/map_coefficients.hpp"
#include "entsim/two_qubit.hpp"

namespace entsim {

/// Reservoir states that the map can populate: vacuum, the one-excitation
/// state reached from |ee>, the distinct one-excitation state reached from
/// |eg>/|ge>, and the two-excitation state.  The two one-excitation states
/// are orthonormal.
enum EnvIndex : int { kEnvVacuum = 0, kEnvOneFromEE = 1, kEnvOneFromEG = 2, kEnvTwo = 3 };

/// Pure state of system (x) reservoir; amplitude index = system*4 + env.
using JointPureState = Eigen::Matrix<Complex, 16, 1>;

inline Complex& joint_amp(JointPureState& s, int sys, int env) { return s(sys * 4 + env); }
inline Complex joint_amp(const JointPureState& s, int sys, int env) { return s(sys * 4 + env); }

/// Applies the collective-decay unitary for time gt to |sys>|vacuum> with an
/// arbitrary system superposition.
inline JointPureState apply_map(const Vector4c& sys, double gt) {
  const MapCoefficients k = map_coefficients(gt);
  JointPureState out = JointPureState::Zero();
  // |ee>|0> -> a|ee>|0> + b(|eg> + |ge>)|1ee> + c|gg>|2>
  joint_amp(out, kEE, kEnvVacuum) += k.a * sys(kEE);
  joint_amp(out, kEG, kEnvOneFromEE) += k.b * sys(kEE);
  joint_amp(out, kGE, kEnvOneFromEE) += k.b * sys(kEE);
  joint_amp(out, kGG, kEnvTwo) += k.c * sys(kEE);
  // |eg>|0> -> d|eg>|0> + e|ge>|0> + f|gg>|1eg>, and symmetrically for |ge>.
  joint_amp(out, kEG, kEnvVacuum) += k.d * sys(kEG) + k.e * sys(kGE);
  joint_amp(out, kGE, kEnvVacuum) += k.d * sys(kGE) + k.e * sys(kEG);
  joint_amp(out, kGG, kEnvOneFromEG) += k.f * (sys(kEG) + sys(kGE));
  // |gg>|0> is stationary.
  joint_amp(out, kGG, kEnvVacuum) += sys(kGG);
  return out;
}

inline JointPureState apply_map(int sys_basis, double gt) {
  return apply_map(basis_ket(sys_basis), gt);
}

/// Reduced system state of a normalized joint pure state.
inline TwoQubitDensityMatrix partial_trace_env(const JointPureState& psi, double tol = 1e-9) {
  if (std::abs(psi.squaredNorm() - 1.0) > tol)
    throw DomainError("partial_trace_env: joint state is not normalized");
  Matrix4c rho = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int e = 0; e < 4; ++e)
        rho(i, j) += joint_amp(psi, i, e) * std::conj(joint_amp(psi, j, e));
  return rho;
}

/// Closed-form reduced state at time gt for the initial state |eg>.
inline TwoQubitDensityMatrix reduced_state_eg(double gt) {
  const MapCoefficients k = map_coefficients(gt);
  Matrix4c rho = Matrix4c::Zero();
  rho(kEG, kEG) = k.d * k.d;
  rho(kGE, kGE) = k.e * k.e;
  rho(kEG, kGE) = k.d * k.e;
  rho(kGE, kEG) = k.d * k.e;
  rho(kGG, kGG) = k.f * k.f;
  return rho;
}

/// Asymptotic state of |eg>: half singlet, half ground.
inline TwoQubitDensityMatrix asymptotic_state_eg() {
  return reduced_state_eg(std::numeric_limits<double>::infinity());
}

}  // namespace entsim
