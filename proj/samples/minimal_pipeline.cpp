// Two real sources seen by the six-sensor array, once with zero initial
// phases and once with random ones.

#include <iostream>

#include "sdca/sdca.hpp"

int main() {
  sdca::ExperimentConfig cfg;
  cfg.snr_db = 10.0;
  const sdca::Experiment exp(cfg);

  for (auto model : {sdca::SignalModel::simplified, sdca::SignalModel::practical}) {
    const auto res = exp.run_trial(cfg.snr_db, model, 0);
    std::cout << sdca::to_string(model) << ": truth";
    for (double t : res.truth_deg) std::cout << ' ' << t;
    std::cout << "  estimate";
    for (double e : res.estimate.angles_deg) std::cout << ' ' << e;
    std::cout << '\n';
  }
}
