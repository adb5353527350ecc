// Integrates the master equation from |eg> and compares the numerical state
// against the closed-form map at each output time.

#include <cstdio>

#include "entsim/concurrence.hpp"
#include "entsim/joint_map.hpp"
#include "entsim/lindblad.hpp"

int main() {
  const entsim::Matrix4c rho0 =
      entsim::projector(entsim::basis_ket(entsim::kEG));
  const double gamma = 1.0;

  std::printf("%6s %12s %12s %12s %14s\n", "t", "rho_eg,eg", "rho_eg,ge",
              "concurrence", "trace distance");
  for (int i = 0; i <= 8; ++i) {
    const double t = 0.5 * i;
    entsim::Matrix4c rho = rho0;
    if (i > 0) {
      const int steps = static_cast<int>(t / 0.001);
      rho = entsim::integrate_master(rho0, gamma, t, steps).state;
    }
    const double dist =
        entsim::trace_distance(rho, entsim::reduced_state_eg(gamma * t));
    std::printf("%6.2f %12.8f %12.8f %12.8f %14.3e\n", t,
                std::real(rho(1, 1)), std::real(rho(1, 2)),
                entsim::concurrence(rho), dist);
  }
  return 0;
}
