#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "b2o/lewis.hpp"
#include "b2o/phi.hpp"
#include "b2o/rng.hpp"
#include "b2o/sparsify.hpp"
#include "b2o/submodular.hpp"

namespace b2o {

/// Default measured constants behind the registered trade-off specs.
/// See the calibration notes in README; surfaced in the CLI config.
inline constexpr double kDefaultSubmodCPhi = 0.01;
inline constexpr double kDefaultL1CPhi = 0.25;

// ---------------------------------------------------------------------------
// Online submodular minimization backed by the cut sparsifier oracle.

/// One distinct loss function: full-support value table plus its directed
/// min-cut table (deletion-invariant, shared across copies).
struct SubmodProto {
  SplittingFunction g;
  EdgeCutTable cuts;
};

struct SubmodInstance {
  int n = 0;
  std::vector<SubmodProto> protos;
  std::vector<int> item_proto;  // item id -> proto id
  double c_m_const = kDefaultCM;
  double c_phi = kDefaultSubmodCPhi;

  int size() const { return static_cast<int>(item_proto.size()); }
  /// PowerLog(c_phi * (n^3 + n^2 ln T), q = 3, c2 = 0).
  PhiSpec registered_phi(int horizon) const;

  /// Items become hyperedges with support V. Validates range [0,1] and
  /// (for n <= 12) submodularity when `validate` is set.
  static SubmodInstance from_losses(int n, std::vector<SplittingFunction> losses,
                                    bool validate = true);
  static SubmodInstance from_hypergraph(const SubmodularHypergraph& h,
                                        bool validate = true);
};

class SubmodPrefix {
 public:
  using Decision = Subset;

  explicit SubmodPrefix(const SubmodInstance& inst);

  int size() const { return inst_->size(); }
  Decision initial_decision() const { return 0; }
  double eps_max() const { return 1.0; }
  double loss(Decision s, int item) const {
    return inst_->protos[inst_->item_proto[item]].g(s);
  }
  void push(int item);
  double opt() const;
  Subset opt_arg() const;
  int count() const { return static_cast<int>(prefix_items_.size()); }
  Decision solve(double eps, RngStream& rng) const;

  /// Per-distinct-loss importance scores of the current prefix hypergraph.
  ImportanceScores proto_scores(double eps) const;

 private:
  const SubmodInstance* inst_;
  std::vector<double> cum_;       // 2^n cumulative losses
  std::vector<double> denom_uv_;  // directed-cut denominators
  double denom_full_ = 0.0;
  std::vector<int> prefix_items_;
};

// ---------------------------------------------------------------------------
// Online l1 regression backed by the Lewis-weight sampling oracle.

struct L1Instance {
  Eigen::MatrixXd a;  // T x d
  Eigen::VectorXd b;
  Eigen::VectorXd box_lo, box_hi;  // decision box keeping losses in [0,1]
  double c_m_const = kDefaultCm;
  double c_phi = kDefaultL1CPhi;

  int size() const { return static_cast<int>(a.rows()); }
  int dim() const { return static_cast<int>(a.cols()); }
  /// PowerLog(c_phi * d * log(dT), q = 3, c2 = d*T).
  PhiSpec registered_phi(int horizon) const;
};

class L1Prefix {
 public:
  using Decision = std::vector<double>;

  explicit L1Prefix(const L1Instance& inst);

  int size() const { return inst_->size(); }
  Decision initial_decision() const;  // zero vector, clamped into the box
  double eps_max() const { return 1.0; }
  double loss(const Decision& theta, int item) const;
  void push(int item);
  double opt() const;
  Decision solve(double eps, RngStream& rng) const;

 private:
  Eigen::MatrixXd prefix_matrix() const;
  Eigen::VectorXd prefix_rhs() const;

  const L1Instance* inst_;
  std::vector<int> rows_;
};

// ---------------------------------------------------------------------------
// Synthetic finite-decision problem with a configurable trade-off function.
// The oracle returns the exact prefix argmin, replaced by a uniformly random
// decision with probability min(1, phi(eps)/(2t)). Exercises the regret
// machinery in regimes whose real oracles live elsewhere.

struct SyntheticInstance {
  int num_decisions = 0;
  std::vector<std::vector<double>> losses;  // item -> per-decision loss in [0,1]
  PhiSpec phi = PhiSpec::power_log(1.0, 1.0, 0.0);
  std::uint64_t oracle_salt = 0;

  int size() const { return static_cast<int>(losses.size()); }
};

class SyntheticPrefix {
 public:
  using Decision = int;

  explicit SyntheticPrefix(const SyntheticInstance& inst);

  int size() const { return inst_->size(); }
  Decision initial_decision() const { return 0; }
  double eps_max() const { return std::numeric_limits<double>::infinity(); }
  double loss(Decision k, int item) const { return inst_->losses[item][k]; }
  void push(int item);
  double opt() const;
  Decision solve(double eps, RngStream& rng) const;

 private:
  const SyntheticInstance* inst_;
  std::vector<double> cum_;
  int count_ = 0;
};

// ---------------------------------------------------------------------------
// Generators.

/// Random submodular hypergraph: a mix of directed cuts and concave-of-
/// cardinality edges with values in [0,1].
SubmodularHypergraph random_hypergraph(int n, int num_edges, std::uint64_t seed);

/// Per-element majority instance: element i carries k_i "penalize-out" items
/// (loss 1[i not in S]) and m - k_i "penalize-in" items (loss 1[i in S]),
/// k_i < m/2, plus zero-loss filler so that exactly T items exist.
/// OPT_T = sum_i k_i, attained at the empty set.
SubmodInstance majority_instance(int n, int horizon, const std::vector<int>& k);

/// Split a planted optimum into per-element counts for majority_instance.
std::vector<int> majority_counts(int n, int horizon, int planted_opt);

/// Random l1 regression data: rows a ~ N(0,1)^d, b = <a, theta0> + noise,
/// rescaled so the loss stays in [0,1] over the box [-1,1]^d.
L1Instance random_l1_instance(int horizon, int d, double noise, std::uint64_t seed);

/// Random synthetic instance with K decisions and i.i.d. uniform losses,
/// one planted decision biased low.
SyntheticInstance random_synthetic_instance(int num_decisions, int horizon,
                                            double bias, std::uint64_t seed,
                                            const PhiSpec& phi);

SubmodInstance submod_instance_from_json(const nlohmann::json& j, bool validate = true);

}  // namespace b2o
