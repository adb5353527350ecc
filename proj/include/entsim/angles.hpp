#pragma once

#include <cmath>
#include <numbers>

#include "entsim/errors.hpp"

namespace entsim {

/// Wave-plate and prism settings of the preparation stage.  theta1 turns
/// counterclockwise (>= 0), theta2 clockwise (<= 0).
struct AngleSetting {
  double theta1_deg;
  double theta2_deg;
};

/// Exact angle pair realizing the single-excitation decay state with decay
/// probability p: cos(2 theta1) = (1+q)/2 and
/// (sin 2 theta1 sin 2 theta2, sin 2 theta1 cos 2 theta2) = (E, F) with
/// q = 1-p, E = (q-1)/2, F = sqrt((1-q^2)/2).
inline AngleSetting angles_for_p(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0)
    throw DomainError("angles_for_p: p must be in [0, 1]");
  constexpr double kRadToDeg = 180.0 / std::numbers::pi_v<double>;
  const double q = 1.0 - p;
  const double theta1 = 0.5 * std::acos((1.0 + q) / 2.0) * kRadToDeg;
  const double big_e = (q - 1.0) / 2.0;
  const double big_f = std::sqrt((1.0 - q * q) / 2.0);
  // At p = 0 both coefficients vanish and theta2 is unobservable; zero is
  // the continuous limit.
  const double theta2 = (big_e == 0.0 && big_f == 0.0)
                            ? 0.0
                            : 0.5 * std::atan2(big_e, big_f) * kRadToDeg;
  return {theta1, theta2};
}

/// Angle pair rounded to whole degrees, matching how the settings are
/// dialed on the physical mounts.
inline AngleSetting rounded_angles_for_p(double p) {
  const AngleSetting exact = angles_for_p(p);
  return {std::round(exact.theta1_deg), std::round(exact.theta2_deg)};
}

}  // namespace entsim
