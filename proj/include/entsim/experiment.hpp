#pragma once

#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "entsim/angles.hpp"
#include "entsim/beam.hpp"
#include "entsim/elements.hpp"
#include "entsim/errors.hpp"
#include "entsim/map_coefficients.hpp"

namespace entsim {

/// Interferometer visibilities; 1 means a perfect sorter.
struct NoiseModel {
  double nu_prep = 1.0;
  double nu_dmzim = 1.0;
};

/// Phase of the reflected preparation arm at which the recombined state
/// carries the canonical coefficient signs (positive-real Hh amplitude).
inline constexpr double kPrepCalibratedPhase = 0.0;

/// Assembles the preparation stage: starting from |Vh> on path E0, a
/// half-wave plate at theta1, a polarizing split, a three-mirror arm with
/// phase dphi on the reflected beam, a Dove prism at theta2 plus a
/// mode-parity sorter on the transmitted beam, and a recombining
/// polarizing splitter.  The output occupies paths E0 and E1.
inline BeamState prepare(const AngleSetting& angles,
                         double dphi = kPrepCalibratedPhase,
                         double nu_prep = 1.0) {
  BeamState s = BeamState::single("E0", kCompVh);
  s = apply_half_wave_plate(s, "E0", angles.theta1_deg);
  s = apply_pbs(s, {"E0"}, "E1", "E0p");
  s = apply_mirror(s, "E0p");
  s = apply_mirror(s, "E0p");
  s = apply_mirror(s, "E0p");
  s = apply_phase(s, "E0p", dphi);
  s = apply_dove_prism(s, "E1", angles.theta2_deg);
  s = mzim_parity_sort(s, "E1", "E1", "E0pp", nu_prep);
  s = apply_pbs(s, {"E0pp", "E0p"}, "E0", "E0");
  return s;
}

/// Intensities read at the eight outputs O1..O8.
struct OutputIntensities {
  std::array<double, 8> intensity{};

  double total() const {
    return std::accumulate(intensity.begin(), intensity.end(), 0.0);
  }
};

/// Assembles the measurement stage on paths {E0, E1}: joint-parity sorting
/// on each beam, polarizing splitters on the even ports (O1..O4), and the
/// gate chain (CNOT, half-wave plate at 22.5 degrees, polarizing splitter)
/// on the odd ports (O5..O8).  O1 reads the Hh component of the E1 even
/// port; O5/O8 collect one Bell component, O6/O7 the other.
inline OutputIntensities measure(const BeamState& state,
                                 const NoiseModel& noise = {}) {
  for (const char* required : {"E0", "E1"})
    if (!state.has_path(required))
      throw WiringError(std::string("measure: expected path '") + required +
                        "'");
  BeamState s = dmzim_sort(state, "E0", "M0e", "M0o", noise.nu_dmzim);
  s = dmzim_sort(s, "E1", "M1e", "M1o", noise.nu_dmzim);
  s = apply_pbs(s, {"M1e"}, "O1", "O2");
  s = apply_pbs(s, {"M0e"}, "O3", "O4");
  s = cnot_gate(s, "M0o", kCnotCalibratedPhase);
  s = apply_half_wave_plate(s, "M0o", 22.5);
  s = apply_pbs(s, {"M0o"}, "O5", "O6");
  s = cnot_gate(s, "M1o", kCnotCalibratedPhase);
  s = apply_half_wave_plate(s, "M1o", 22.5);
  s = apply_pbs(s, {"M1o"}, "O8", "O7");
  OutputIntensities out;
  for (int j = 0; j < 8; ++j)
    out.intensity[j] = s.intensity("O" + std::to_string(j + 1));
  return out;
}

/// Normalized populations of the witness eigenbasis states.
struct Populations {
  double p_gg;
  double p_ee;
  double p_psi_plus;
  double p_psi_minus;
};

/// Pairs of normalized output intensities: gg from O1+O4, ee from O2+O3,
/// the Bell components from O5+O8 and O6+O7.
inline Populations populations(const OutputIntensities& i) {
  const double total = i.total();
  if (!(total > 0.0))
    throw DomainError("populations: zero total intensity");
  Populations pop;
  pop.p_gg = (i.intensity[0] + i.intensity[3]) / total;
  pop.p_ee = (i.intensity[1] + i.intensity[2]) / total;
  pop.p_psi_plus = (i.intensity[4] + i.intensity[7]) / total;
  pop.p_psi_minus = (i.intensity[5] + i.intensity[6]) / total;
  return pop;
}

namespace detail {

inline constexpr double kInvSqrt2Pop = 0.70710678118654752440;

/// Weights of the witness expectation in its eigenbasis, ordered
/// (ee, psi+, psi-, gg).
inline constexpr std::array<double, 4> kWitnessWeights = {
    1.0 + kInvSqrt2Pop, kInvSqrt2Pop, -kInvSqrt2Pop, 1.0 - kInvSqrt2Pop};

}  // namespace detail

/// Witness expectation value reconstructed from populations.
inline double witness_trace(const Populations& pop) {
  return detail::kWitnessWeights[0] * pop.p_ee +
         detail::kWitnessWeights[1] * pop.p_psi_plus +
         detail::kWitnessWeights[2] * pop.p_psi_minus +
         detail::kWitnessWeights[3] * pop.p_gg;
}

/// Entanglement estimate of a run: witness expectation over (1 - sqrt(2)).
inline double lambda_of_run(const OutputIntensities& i) {
  return witness_trace(populations(i)) / (1.0 - std::numbers::sqrt2_v<double>);
}

/// First-order propagation of a relative per-population intensity
/// uncertainty (the camera's calibration error) into the entanglement
/// estimate.
inline double lambda_uncertainty(const Populations& pop,
                                 double ccd_rel_error) {
  if (std::isnan(ccd_rel_error) || ccd_rel_error < 0.0)
    throw DomainError("lambda_uncertainty: relative error must be >= 0");
  const std::array<double, 4> p = {pop.p_ee, pop.p_psi_plus, pop.p_psi_minus,
                                   pop.p_gg};
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double term = detail::kWitnessWeights[k] * p[k];
    sum += term * term;
  }
  return ccd_rel_error * std::sqrt(sum) /
         std::abs(1.0 - std::numbers::sqrt2_v<double>);
}

/// One full run of the bench at a decay parameter p.
struct ExperimentRecord {
  double p;
  double gt;
  AngleSetting angles;
  OutputIntensities intensities;
  Populations pops;
  double witness;
  double lambda;
};

inline ExperimentRecord run_experiment(double p, const NoiseModel& noise = {},
                                       bool use_rounded_angles = false,
                                       double dphi = kPrepCalibratedPhase) {
  ExperimentRecord rec;
  rec.p = p;
  rec.gt = gt_from_p(p);
  rec.angles = use_rounded_angles ? rounded_angles_for_p(p) : angles_for_p(p);
  const BeamState state = prepare(rec.angles, dphi, noise.nu_prep);
  rec.intensities = measure(state, noise);
  rec.pops = populations(rec.intensities);
  rec.witness = witness_trace(rec.pops);
  rec.lambda = rec.witness / (1.0 - std::numbers::sqrt2_v<double>);
  return rec;
}

/// One record per p value, in input order.
inline std::vector<ExperimentRecord> sweep(const std::vector<double>& ps,
                                           const NoiseModel& noise = {},
                                           bool use_rounded_angles = false,
                                           double dphi = kPrepCalibratedPhase) {
  std::vector<ExperimentRecord> records;
  records.reserve(ps.size());
  for (double p : ps)
    records.push_back(run_experiment(p, noise, use_rounded_angles, dphi));
  return records;
}

}  // namespace entsim
