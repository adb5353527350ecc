#pragma once

#include <cmath>

#include "entsim/errors.hpp"

namespace entsim {

/// Amplitude coefficients of the collective-decay map at dimensionless time
/// gt.  a, b, c govern the doubly excited sector, d, e, f the singly excited
/// one.  Closed under a^2 + 2b^2 + c^2 = 1 and d^2 + e^2 + f^2 = 1, with
/// a, b, c, d, f >= 0 and e <= 0.
struct MapCoefficients {
  double a;
  double b;
  double c;
  double d;
  double e;
  double f;
};

inline MapCoefficients map_coefficients(double gt) {
  if (std::isnan(gt) || gt < 0.0)
    throw DomainError("map_coefficients: gt must be >= 0");
  if (std::isinf(gt)) {
    // Limit values; the finite-gt expression would evaluate inf*0.
    return {0.0, 0.0, 1.0, 0.5, -0.5, std::sqrt(0.5)};
  }
  const double x = std::exp(-gt);
  const double x2 = std::exp(-2.0 * gt);
  MapCoefficients k;
  k.a = x;
  k.b = std::sqrt(gt * x2);
  k.c = std::sqrt(std::fmax(0.0, 1.0 - x2 - 2.0 * gt * x2));
  k.d = 0.5 * (x + 1.0);
  k.e = 0.5 * (x - 1.0);
  k.f = std::sqrt(0.5 * (1.0 - x2));
  return k;
}

/// Decay probability of a single excited qubit after time gt.
inline double p_from_gt(double gt) {
  if (std::isnan(gt) || gt < 0.0)
    throw DomainError("p_from_gt: gt must be >= 0");
  return -std::expm1(-gt);
}

/// Inverse of p_from_gt; p = 1 maps to infinity.
inline double gt_from_p(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0)
    throw DomainError("gt_from_p: p must be in [0, 1]");
  return -std::log1p(-p);
}

}  // namespace entsim
