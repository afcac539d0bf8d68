#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "b2o/submodular.hpp"

namespace b2o {

class RngStream;

/// Default calibrated constant behind M = c_M * eps^{-2} (n + ln(1/delta)).
/// Produced by the shipped calibration protocol (see cmd_calibrate).
inline constexpr double kDefaultCM = 4.0;

struct ImportanceScores {
  std::vector<double> rho;        // directed min-cut ratios
  std::vector<double> rho_prime;  // full-value ratios
  std::vector<double> s;          // rho + rho_prime
  std::vector<double> p;          // min(1, M * s)
  double m = 0.0;
  double sum_s = 0.0;
};

/// Exact importance scores via directed min-cut enumeration. Zero denominators
/// yield zero ratios. M = c_m_const * eps^{-2} * (n + ln(1/delta)).
ImportanceScores importance_scores(const SubmodularHypergraph& h, double eps,
                                   double delta, double c_m_const = kDefaultCM);

/// Same computation over precomputed (deletion-invariant) per-edge cut tables.
ImportanceScores importance_scores_from_tables(const std::vector<EdgeCutTable>& tables,
                                               int n, double eps, double delta,
                                               double c_m_const = kDefaultCM);

struct SparsifierOutput {
  std::vector<std::size_t> kept;  // indices into the source edge multiset
  std::vector<double> weights;    // 1 / perturbed keep probability
  double eps = 0.0;
  double m = 0.0;
  std::uint64_t seed = 0;
};

/// Independent Bernoulli(p_e) keep decisions; kept edges weighted by 1/p~_e
/// with p~_e uniform on [p_e, (1+eps/2) p_e]. Requires eps in (0, 1].
SparsifierOutput sample_sparsifier(const ImportanceScores& scores, double eps,
                                   std::uint64_t seed);
SparsifierOutput sample_sparsifier(const ImportanceScores& scores, double eps,
                                   RngStream& rng);

/// Reweighted subgraph induced by a sample.
SubmodularHypergraph apply_sparsifier(const SubmodularHypergraph& h,
                                      const SparsifierOutput& out);

/// Offline oracle: sparsify the prefix hypergraph (delta = 1/horizon) and
/// return the smallest-bitmask minimizer of the sparsified cut.
Subset offline_submod_solve(const SubmodularHypergraph& prefix, double eps,
                            int horizon, std::uint64_t seed,
                            double c_m_const = kDefaultCM);

struct SensitivityReport {
  std::vector<double> per_edge;        // (4/eps) sum_f |p_f(H) - p_f(H-e)|
  std::vector<double> per_edge_tight;  // (1/2 + (2+eps)/eps) factor variant
  std::vector<double> s_change;        // sum_{f != e} |s_f(H) - s_f(H-e)|
  std::vector<double> s_self;          // s_e(H)
  double average = 0.0;
  double average_tight = 0.0;
  double cap = 0.0;  // 8 M (n^2 + 1) / (eps |E|)
  double m = 0.0;
};

/// Exact single-deletion sensitivity bounds from recomputed scores, with the
/// analytic cap. Requires |E| >= 2.
SensitivityReport sensitivity_audit(const SubmodularHypergraph& h, double eps,
                                    double delta, double c_m_const = kDefaultCM);

nlohmann::json sparsifier_to_json(const SparsifierOutput& out);

}  // namespace b2o
