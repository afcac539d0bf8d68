#include "b2o/calibrate.hpp"

#include <cmath>

#include "b2o/instances.hpp"
#include "b2o/lewis.hpp"
#include "b2o/rng.hpp"
#include "b2o/sparsify.hpp"
#include "b2o/submodular.hpp"

namespace b2o {

double sparsifier_sandwich_rate(int n, int num_edges, double eps, double delta,
                                double c_m_const, int trials, std::uint64_t seed) {
  int successes = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = mix64(seed + trial);
    const SubmodularHypergraph h = random_hypergraph(n, num_edges, trial_seed);
    const ImportanceScores scores = importance_scores(h, eps, delta, c_m_const);
    const SparsifierOutput sample = sample_sparsifier(scores, eps, trial_seed);
    const SubmodularHypergraph sparse = apply_sparsifier(h, sample);
    bool ok = true;
    const Subset end = Subset{1} << n;
    for (Subset s = 0; s < end && ok; ++s) {
      const double exact = cut_value(h, s);
      const double approx = cut_value(sparse, s);
      if (approx < (1.0 - eps) * exact - 1e-12 ||
          approx > (1.0 + eps) * exact + 1e-12)
        ok = false;
    }
    if (ok) ++successes;
  }
  return static_cast<double>(successes) / trials;
}

double l1_objective_success_rate(int horizon, int d, double eps, double c_m_const,
                                 int trials, std::uint64_t seed) {
  int successes = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = mix64(seed + trial);
    const L1Instance inst = random_l1_instance(horizon, d, 0.25, trial_seed);
    const L1Solution exact = l1_exact_opt(inst.a, inst.b, inst.box_lo, inst.box_hi);
    RngStream rng(trial_seed, "l1-calibration");
    Eigen::VectorXd theta =
        offline_l1_oracle(inst.a, inst.b, eps, horizon, rng, c_m_const);
    for (int k = 0; k < d; ++k)
      theta[k] = std::min(std::max(theta[k], inst.box_lo[k]), inst.box_hi[k]);
    const double obj = (inst.a * theta - inst.b).cwiseAbs().sum();
    if (obj <= (1.0 + eps / 2.0) * exact.objective + 1e-9) ++successes;
  }
  return static_cast<double>(successes) / trials;
}

namespace {

CalibrationReport pick_smallest(const std::vector<double>& candidates,
                                const std::vector<double>& rates, double threshold) {
  CalibrationReport rep;
  rep.candidates = candidates;
  rep.rates = rates;
  rep.threshold = threshold;
  rep.chosen = candidates.back();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (rates[i] >= threshold) {
      rep.chosen = candidates[i];
      break;
    }
  }
  return rep;
}

std::vector<double> power_of_two_candidates() {
  return {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
}

}  // namespace

CalibrationReport calibrate_sparsifier_cm(std::uint64_t seed, int trials) {
  const std::vector<double> candidates = power_of_two_candidates();
  std::vector<double> rates;
  for (double c : candidates)
    rates.push_back(sparsifier_sandwich_rate(5, 200, 0.5, 0.05, c, trials, seed));
  return pick_smallest(candidates, rates, 0.95);
}

CalibrationReport calibrate_l1_cm(std::uint64_t seed, int trials) {
  const std::vector<double> candidates = power_of_two_candidates();
  std::vector<double> rates;
  for (double c : candidates)
    rates.push_back(l1_objective_success_rate(64, 1, 0.5, c, trials, seed));
  return pick_smallest(candidates, rates, 0.95);
}

}  // namespace b2o
