#pragma once

#include <stdexcept>
#include <string>

namespace entsim {

/// Numeric input outside its mathematical domain (bad angle range, invalid
/// density matrix, probability outside [0,1], ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Inconsistent circuit wiring: element reads a path that carries no beam,
/// or two beams of equal polarization collide at one splitter output.
class WiringError : public std::logic_error {
 public:
  explicit WiringError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace entsim
