// Sweeps the decay parameter and prints the population table next to the
// closed-form entanglement curve.

#include <cstdio>

#include "entsim/experiment.hpp"

int main() {
  std::printf("%6s %10s %10s %10s %10s %12s %12s\n", "p", "P_psi+", "P_psi-",
              "P_ee", "P_gg", "lambda", "closed form");
  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    const entsim::ExperimentRecord rec = entsim::run_experiment(p);
    const entsim::Populations pop = entsim::populations(rec.intensities);
    std::printf("%6.2f %10.6f %10.6f %10.6f %10.6f %12.9f %12.9f\n", p,
                pop.p_psi_plus, pop.p_psi_minus, pop.p_ee, pop.p_gg,
                rec.lambda, p * (2.0 - p) / 2.0);
  }
  return 0;
}
