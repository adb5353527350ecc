#pragma once

#include <complex>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "entsim/errors.hpp"

namespace entsim {

/// Polarization basis of the first encoded qubit: H encodes the ground
/// state, V the excited state.
enum class Polarization : int { kH = 0, kV = 1 };

/// First-order Hermite-Gaussian transverse mode of the second encoded
/// qubit: h (horizontal nodal line) encodes ground, v encodes excited.
enum class TransverseMode : int { kH = 0, kV = 1 };

/// Component indices of the 4-vector carried by each path, ordered
/// {Hh, Hv, Vh, Vv}.
enum ComponentIndex : int {
  kCompHh = 0,
  kCompHv = 1,
  kCompVh = 2,
  kCompVv = 3,
};

inline constexpr int component_index(Polarization p, TransverseMode m) {
  return 2 * static_cast<int>(p) + static_cast<int>(m);
}

/// Maps an optical component to the two-qubit basis index used by the
/// open-system engine ({ee, eg, ge, gg} = 0..3): Vv carries ee, Vh
/// carries eg, Hv carries ge, Hh carries gg.
inline constexpr int system_basis_from_component(int comp) { return 3 - comp; }
inline constexpr int component_from_system_basis(int sys) { return 3 - sys; }

inline const char* component_name(int comp) {
  static const char* kNames[4] = {"Hh", "Hv", "Vh", "Vv"};
  return kNames[comp];
}

/// Opaque path identifier; unique within a register.
using PathLabel = std::string;

/// Amplitudes over {Hh, Hv, Vh, Vv} carried by one labeled path.
using PathAmplitudes = Eigen::Vector4cd;

/// One coherent register: every amplitude in it may interfere with every
/// other.  Separate registers are mutually incoherent; their intensities
/// add.
using CoherentRegister = std::map<PathLabel, PathAmplitudes>;

/// State of the optical bench: a set of labeled paths, each carrying a
/// polarization (x) transverse-mode 4-vector, tracked per coherent
/// register.  Register 0 is the main register; imperfect-visibility
/// sorters append leakage registers.
class BeamState {
 public:
  BeamState() : registers_(1) {}

  /// Unit amplitude in one component on one path, main register.
  static BeamState single(const std::string& path, int comp) {
    BeamState s;
    PathAmplitudes a = PathAmplitudes::Zero();
    a(comp) = 1.0;
    s.registers_[0][path] = a;
    return s;
  }

  static BeamState from_amplitudes(const std::string& path,
                                   const PathAmplitudes& amps) {
    BeamState s;
    s.registers_[0][path] = amps;
    return s;
  }

  int register_count() const { return static_cast<int>(registers_.size()); }

  const CoherentRegister& register_at(int r) const { return registers_.at(r); }
  CoherentRegister& register_at(int r) { return registers_.at(r); }

  /// Appends a leakage register and returns its index.
  int add_register() {
    registers_.emplace_back();
    return static_cast<int>(registers_.size()) - 1;
  }

  bool has_path(const std::string& path) const {
    for (const auto& reg : registers_)
      if (reg.count(path) > 0) return true;
    return false;
  }

  /// Sorted union of path labels across registers.
  std::vector<std::string> paths() const {
    std::set<std::string> labels;
    for (const auto& reg : registers_)
      for (const auto& [label, amps] : reg) labels.insert(label);
    return {labels.begin(), labels.end()};
  }

  std::complex<double> amp(int r, const std::string& path, int comp) const {
    const auto& reg = registers_.at(r);
    auto it = reg.find(path);
    if (it == reg.end()) return {0.0, 0.0};
    return it->second(comp);
  }

  /// Squared-amplitude sum over all components and registers of a path.
  /// Absent paths read zero.
  double intensity(const std::string& path) const {
    double total = 0.0;
    for (const auto& reg : registers_) {
      auto it = reg.find(path);
      if (it != reg.end()) total += it->second.squaredNorm();
    }
    return total;
  }

  double intensity_component(const std::string& path, Polarization p,
                             TransverseMode m) const {
    const int comp = component_index(p, m);
    double total = 0.0;
    for (const auto& reg : registers_) {
      auto it = reg.find(path);
      if (it != reg.end()) total += std::norm(it->second(comp));
    }
    return total;
  }

  double total_intensity() const {
    double total = 0.0;
    for (const auto& reg : registers_)
      for (const auto& [label, amps] : reg) total += amps.squaredNorm();
    return total;
  }

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string message) {
    warnings_.push_back(std::move(message));
  }

 private:
  std::vector<CoherentRegister> registers_;
  std::vector<std::string> warnings_;
};

}  // namespace entsim
