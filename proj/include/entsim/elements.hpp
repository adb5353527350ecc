#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "entsim/beam.hpp"
#include "entsim/errors.hpp"

namespace entsim {

namespace detail {

inline constexpr double kDegToRad = std::numbers::pi_v<double> / 180.0;

inline void require_path(const BeamState& s, const std::string& path,
                         const char* element) {
  if (!s.has_path(path))
    throw WiringError(std::string(element) + ": path '" + path +
                      "' does not exist");
}

/// Wave-plate style angles are 90-degree periodic up to an overall sign.
/// Angles outside [-45, 45] degrees are folded back with a warning.
inline double fold_plate_angle(double theta_deg, const char* element,
                               BeamState* s) {
  if (std::isnan(theta_deg))
    throw DomainError(std::string(element) + ": angle is NaN");
  if (theta_deg >= -45.0 && theta_deg <= 45.0) return theta_deg;
  const double folded = theta_deg - 90.0 * std::round(theta_deg / 90.0);
  std::ostringstream msg;
  msg << element << ": angle " << theta_deg << " deg folded to " << folded
      << " deg";
  s->add_warning(msg.str());
  return folded;
}

inline PathAmplitudes& slot(CoherentRegister& reg, const std::string& label) {
  auto it = reg.find(label);
  if (it == reg.end())
    it = reg.emplace(label, PathAmplitudes::Zero()).first;
  return it->second;
}

/// Checks that an output label is either absent from the state or one of
/// the element's own (consumed) inputs.
inline void require_fresh_or_input(const BeamState& s,
                                   const std::string& label,
                                   const std::vector<std::string>& inputs,
                                   const char* element) {
  if (label.empty())
    throw WiringError(std::string(element) + ": empty output label");
  for (const auto& in : inputs)
    if (label == in) return;
  if (s.has_path(label))
    throw WiringError(std::string(element) + ": output '" + label +
                      "' clobbers an existing path");
}

inline void check_input_list(const BeamState& s,
                             const std::vector<std::string>& inputs,
                             const char* element) {
  if (inputs.empty() || inputs.size() > 2)
    throw WiringError(std::string(element) + ": expects 1 or 2 input paths");
  if (inputs.size() == 2 && inputs[0] == inputs[1])
    throw WiringError(std::string(element) + ": duplicate input path");
  for (const auto& in : inputs) require_path(s, in, element);
}

/// Squared norm carried by a path in the given component pair, summed over
/// registers.
inline double pair_intensity(const BeamState& s, const std::string& path,
                             int c0, int c1) {
  double total = 0.0;
  for (int r = 0; r < s.register_count(); ++r) {
    total += std::norm(s.amp(r, path, c0)) + std::norm(s.amp(r, path, c1));
  }
  return total;
}

}  // namespace detail

/// Half-wave plate at theta degrees from the vertical axis, acting on
/// polarization only: V -> cos(2t)V + sin(2t)H, H -> sin(2t)V - cos(2t)H.
inline BeamState apply_half_wave_plate(const BeamState& state,
                                       const std::string& path,
                                       double theta_deg) {
  detail::require_path(state, path, "half_wave_plate");
  BeamState s = state;
  const double t = detail::fold_plate_angle(theta_deg, "half_wave_plate", &s);
  const double c = std::cos(2.0 * t * detail::kDegToRad);
  const double sn = std::sin(2.0 * t * detail::kDegToRad);
  for (int r = 0; r < s.register_count(); ++r) {
    auto& reg = s.register_at(r);
    auto it = reg.find(path);
    if (it == reg.end()) continue;
    PathAmplitudes& a = it->second;
    for (int m = 0; m < 2; ++m) {
      const std::complex<double> h = a(kCompHh + m);
      const std::complex<double> v = a(kCompVh + m);
      a(kCompHh + m) = sn * v - c * h;
      a(kCompVh + m) = c * v + sn * h;
    }
  }
  return s;
}

/// Dove prism at theta degrees, acting on the transverse mode only:
/// h -> cos(2t)h + sin(2t)v, v -> sin(2t)h - cos(2t)v.
inline BeamState apply_dove_prism(const BeamState& state,
                                  const std::string& path, double theta_deg) {
  detail::require_path(state, path, "dove_prism");
  BeamState s = state;
  const double t = detail::fold_plate_angle(theta_deg, "dove_prism", &s);
  const double c = std::cos(2.0 * t * detail::kDegToRad);
  const double sn = std::sin(2.0 * t * detail::kDegToRad);
  for (int r = 0; r < s.register_count(); ++r) {
    auto& reg = s.register_at(r);
    auto it = reg.find(path);
    if (it == reg.end()) continue;
    PathAmplitudes& a = it->second;
    for (int p = 0; p < 2; ++p) {
      const std::complex<double> h = a(2 * p);
      const std::complex<double> v = a(2 * p + 1);
      a(2 * p) = c * h + sn * v;
      a(2 * p + 1) = sn * h - c * v;
    }
  }
  return s;
}

/// Polarizing beam splitter: H components of the inputs are routed to
/// out_transmit, V components to out_reflect, with no extra phase.  The two
/// output labels may coincide, realizing a coherent recombination.  Two
/// inputs both carrying the same polarization cannot be routed to a single
/// label and raise a wiring error.
inline BeamState apply_pbs(const BeamState& state,
                           const std::vector<std::string>& in_paths,
                           const std::string& out_transmit,
                           const std::string& out_reflect) {
  detail::check_input_list(state, in_paths, "pbs");
  detail::require_fresh_or_input(state, out_transmit, in_paths, "pbs");
  detail::require_fresh_or_input(state, out_reflect, in_paths, "pbs");
  if (in_paths.size() == 2) {
    constexpr double kEps = 1e-24;
    int h_carriers = 0;
    int v_carriers = 0;
    for (const auto& in : in_paths) {
      if (detail::pair_intensity(state, in, kCompHh, kCompHv) > kEps)
        ++h_carriers;
      if (detail::pair_intensity(state, in, kCompVh, kCompVv) > kEps)
        ++v_carriers;
    }
    if (h_carriers == 2)
      throw WiringError("pbs: both inputs carry H at output '" +
                        out_transmit + "'");
    if (v_carriers == 2)
      throw WiringError("pbs: both inputs carry V at output '" + out_reflect +
                        "'");
  }
  BeamState s = state;
  for (int r = 0; r < s.register_count(); ++r) {
    auto& reg = s.register_at(r);
    PathAmplitudes total = PathAmplitudes::Zero();
    bool present = false;
    for (const auto& in : in_paths) {
      auto it = reg.find(in);
      if (it == reg.end()) continue;
      present = true;
      total += it->second;
      reg.erase(it);
    }
    if (!present) continue;
    PathAmplitudes& t = detail::slot(reg, out_transmit);
    t(kCompHh) += total(kCompHh);
    t(kCompHv) += total(kCompHv);
    PathAmplitudes& f = detail::slot(reg, out_reflect);
    f(kCompVh) += total(kCompVh);
    f(kCompVv) += total(kCompVv);
  }
  return s;
}

/// Symmetric 50/50 beam splitter with transfer matrix
/// (1/sqrt(2)) [[1, i], [i, 1]] between in_paths[k] and out_paths[k];
/// polarization and transverse mode are untouched.
inline BeamState apply_bs(const BeamState& state,
                          const std::vector<std::string>& in_paths,
                          const std::array<std::string, 2>& out_paths) {
  detail::check_input_list(state, in_paths, "bs");
  if (out_paths[0] == out_paths[1])
    throw WiringError("bs: output labels must be distinct");
  detail::require_fresh_or_input(state, out_paths[0], in_paths, "bs");
  detail::require_fresh_or_input(state, out_paths[1], in_paths, "bs");
  const std::complex<double> i_unit(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2_v<double>;
  BeamState s = state;
  for (int r = 0; r < s.register_count(); ++r) {
    auto& reg = s.register_at(r);
    PathAmplitudes a0 = PathAmplitudes::Zero();
    PathAmplitudes a1 = PathAmplitudes::Zero();
    bool present = false;
    if (auto it = reg.find(in_paths[0]); it != reg.end()) {
      a0 = it->second;
      reg.erase(it);
      present = true;
    }
    if (in_paths.size() == 2) {
      if (auto it = reg.find(in_paths[1]); it != reg.end()) {
        a1 = it->second;
        reg.erase(it);
        present = true;
      }
    }
    if (!present) continue;
    detail::slot(reg, out_paths[0]) += inv_sqrt2 * (a0 + i_unit * a1);
    detail::slot(reg, out_paths[1]) += inv_sqrt2 * (i_unit * a0 + a1);
  }
  return s;
}

/// Mirror: transverse-parity flip |v> -> -|v>, |h> -> |h>; the path
/// redirection itself is pure bookkeeping and keeps the label.
inline BeamState apply_mirror(const BeamState& state,
                              const std::string& path) {
  detail::require_path(state, path, "mirror");
  BeamState s = state;
  for (int r = 0; r < s.register_count(); ++r) {
    auto& reg = s.register_at(r);
    auto it = reg.find(path);
    if (it == reg.end()) continue;
    it->second(kCompHv) = -it->second(kCompHv);
    it->second(kCompVv) = -it->second(kCompVv);
  }
  return s;
}

/// Multiplies every amplitude on the path by exp(i phi).
inline BeamState apply_phase(const BeamState& state, const std::string& path,
                             double phi_rad) {
  detail::require_path(state, path, "phase");
  if (std::isnan(phi_rad)) throw DomainError("phase: phi is NaN");
  BeamState s = state;
  const std::complex<double> factor = std::polar(1.0, phi_rad);
  for (int r = 0; r < s.register_count(); ++r) {
    auto& reg = s.register_at(r);
    auto it = reg.find(path);
    if (it == reg.end()) continue;
    it->second *= factor;
  }
  return s;
}

/// S-wave plate: converts a V-polarized input into the vector vortex beam
/// (|Vh> + |Hv>)/sqrt(2).  Modeled only for that input; anything carrying
/// H or Vv amplitude is rejected.
inline BeamState apply_swave_plate(const BeamState& state,
                                   const std::string& path) {
  detail::require_path(state, path, "s_wave_plate");
  constexpr double kEps = 1e-24;
  double bad = 0.0;
  for (int r = 0; r < state.register_count(); ++r) {
    bad += std::norm(state.amp(r, path, kCompHh)) +
           std::norm(state.amp(r, path, kCompHv)) +
           std::norm(state.amp(r, path, kCompVv));
  }
  if (bad > kEps)
    throw DomainError("s_wave_plate: unsupported input; expects |Vh> only");
  BeamState s = state;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2_v<double>;
  for (int r = 0; r < s.register_count(); ++r) {
    auto& reg = s.register_at(r);
    auto it = reg.find(path);
    if (it == reg.end()) continue;
    const std::complex<double> a = it->second(kCompVh);
    it->second(kCompVh) = inv_sqrt2 * a;
    it->second(kCompHv) = inv_sqrt2 * a;
  }
  return s;
}

/// Removes all amplitude on the path (post-selection); the label remains
/// with zero amplitude and the state becomes sub-normalized.
inline BeamState apply_blocker(const BeamState& state,
                               const std::string& path) {
  detail::require_path(state, path, "blocker");
  BeamState s = state;
  for (int r = 0; r < s.register_count(); ++r) {
    auto& reg = s.register_at(r);
    auto it = reg.find(path);
    if (it != reg.end()) it->second.setZero();
  }
  return s;
}

/// Removes a single component on the path.
inline BeamState apply_blocker(const BeamState& state, const std::string& path,
                               int comp) {
  detail::require_path(state, path, "blocker");
  if (comp < 0 || comp > 3)
    throw DomainError("blocker: component index out of range");
  BeamState s = state;
  for (int r = 0; r < s.register_count(); ++r) {
    auto& reg = s.register_at(r);
    auto it = reg.find(path);
    if (it != reg.end()) it->second(comp) = 0.0;
  }
  return s;
}

namespace detail {

/// Shared sorter body: routes the components selected by `even_mask` to
/// out_even and the rest to out_odd.  A visibility nu < 1 sends amplitude
/// sqrt((1-nu)/2) of each component to the wrong port inside a fresh,
/// mutually incoherent leakage register; the correctly sorted amplitude is
/// scaled by sqrt((1+nu)/2).
inline BeamState parity_sort(const BeamState& state, const std::string& in,
                             const std::string& out_even,
                             const std::string& out_odd, double nu,
                             const std::array<bool, 4>& even_mask,
                             const char* element) {
  if (std::isnan(nu) || nu < 0.0 || nu > 1.0)
    throw DomainError(std::string(element) + ": visibility must be in [0,1]");
  require_path(state, in, element);
  if (out_even == out_odd)
    throw WiringError(std::string(element) + ": ports must be distinct");
  const std::vector<std::string> inputs = {in};
  require_fresh_or_input(state, out_even, inputs, element);
  require_fresh_or_input(state, out_odd, inputs, element);
  const double keep = std::sqrt((1.0 + nu) / 2.0);
  const double leak = std::sqrt((1.0 - nu) / 2.0);
  BeamState s = state;
  const int n = s.register_count();
  for (int r = 0; r < n; ++r) {
    auto& reg = s.register_at(r);
    auto it = reg.find(in);
    if (it == reg.end()) continue;
    const PathAmplitudes a = it->second;
    reg.erase(it);
    PathAmplitudes even = PathAmplitudes::Zero();
    PathAmplitudes odd = PathAmplitudes::Zero();
    for (int c = 0; c < 4; ++c) (even_mask[c] ? even : odd)(c) = a(c);
    slot(reg, out_even) += keep * even;
    slot(reg, out_odd) += keep * odd;
    if (leak > 0.0 && a.squaredNorm() > 0.0) {
      const int lr = s.add_register();
      auto& lreg = s.register_at(lr);
      slot(lreg, out_even) = leak * odd;
      slot(lreg, out_odd) = leak * even;
    }
  }
  return s;
}

}  // namespace detail

/// Mach-Zehnder interferometer with an additional mirror: sorts by
/// transverse-mode parity, |h> components to out_even and |v> components
/// to out_odd, with visibility-limited leakage to the wrong port.
inline BeamState mzim_parity_sort(const BeamState& state,
                                  const std::string& in_path,
                                  const std::string& out_even,
                                  const std::string& out_odd, double nu) {
  return detail::parity_sort(state, in_path, out_even, out_odd, nu,
                             {true, false, true, false}, "mzim");
}

/// Double-MZIM port: sorts by the joint polarization-mode parity, which is
/// the parity of the encoded excitation number.  {Hh, Vv} exit even,
/// {Hv, Vh} exit odd.
inline BeamState dmzim_sort(const BeamState& state, const std::string& in_path,
                            const std::string& out_even,
                            const std::string& out_odd, double nu) {
  return detail::parity_sort(state, in_path, out_even, out_odd, nu,
                             {true, false, false, true}, "dmzim");
}

/// Phase setting of the CNOT interferometer at which the gate table below
/// holds; fixed by requiring the downstream Hadamard plus polarizing
/// splitter to separate the two Bell components onto their designated
/// ports.
inline constexpr double kCnotCalibratedPhase = std::numbers::pi_v<double>;

/// Polarization-controlled NOT on the transverse mode, built from a
/// polarizing splitter, a Dove prism at 45 degrees plus a phase dphi on the
/// H arm, and a recombining splitter.  At dphi = kCnotCalibratedPhase:
/// |Hh> -> -|Hv>, |Hv> -> -|Hh>, |Vh> -> |Vh>, |Vv> -> |Vv>.
inline BeamState cnot_gate(const BeamState& state, const std::string& path,
                           double dphi_rad = kCnotCalibratedPhase) {
  detail::require_path(state, path, "cnot");
  const std::string arm_h = path + "#cnotH";
  const std::string arm_v = path + "#cnotV";
  BeamState s = apply_pbs(state, {path}, arm_h, arm_v);
  s = apply_dove_prism(s, arm_h, 45.0);
  s = apply_phase(s, arm_h, dphi_rad);
  return apply_pbs(s, {arm_h, arm_v}, path, path);
}

}  // namespace entsim
