#pragma once

#include <cstdint>
#include <vector>

namespace b2o {

/// Fraction of seeded trials on the reference hypergraph family whose
/// perturbed sparsifier satisfies the (1 +- eps) sandwich over all cuts.
double sparsifier_sandwich_rate(int n, int num_edges, double eps, double delta,
                                double c_m_const, int trials, std::uint64_t seed);

/// Fraction of seeded trials on the reference regression family whose sampled
/// solve stays within (1 + eps/2) of the exact prefix optimum.
double l1_objective_success_rate(int horizon, int d, double eps, double c_m_const,
                                 int trials, std::uint64_t seed);

struct CalibrationReport {
  std::vector<double> candidates;
  std::vector<double> rates;
  double threshold = 0.95;
  double chosen = 0.0;  // smallest candidate with rate >= threshold
};

/// Smallest power of two (out of 2^-2 .. 2^5) meeting the success threshold
/// on the reference family (n=5, |E|=200, eps=0.5, delta=0.05, 400 trials).
CalibrationReport calibrate_sparsifier_cm(std::uint64_t seed, int trials = 400);

/// Same protocol for the regression sample-count constant
/// (d=1, t=64, eps=0.5, 400 trials).
CalibrationReport calibrate_l1_cm(std::uint64_t seed, int trials = 400);

}  // namespace b2o
