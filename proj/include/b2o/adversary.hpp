#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "b2o/engine.hpp"
#include "b2o/instances.hpp"
#include "b2o/submodular.hpp"

namespace b2o {

/// Stochastic lower-bound instance: round t (0-based) touches element
/// t mod n with a Rademacher sign; loss is (1+sigma)/2 when the element is
/// played, (1-sigma)/2 otherwise. All losses are modular.
struct RademacherInstance {
  SubmodInstance instance;
  std::vector<int> sigma;    // +1 / -1 per round
  double opt_formula = 0.0;  // (T - sum_i |sum_{t: i(t)=i} sigma_t|) / 2
};

RademacherInstance rademacher_instance(int n, int horizon, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Mistake-tree adversary over ground set {u0, u1, v_1..v_T} (u0 = 0, u1 = 1,
// v_t = t + 1). Feasible decisions: u0 in S, u1 not in S. The adversary labels
// each v_t opposite to the learner's prediction, charging unit loss per round
// while keeping the offline optimum at zero.

/// Learner: given (n, horizon, round t (1-based), losses revealed so far),
/// play a feasible set.
using MistakeLearner =
    std::function<Subset(int n, int horizon, int t,
                         const std::vector<SplittingFunction>& revealed)>;

struct MistakeTreeResult {
  RegretTrace trace;  // model = "adaptive"; loss 1 per round, opt rows 0
  std::vector<int> labels;
  Subset witness = 0;        // {u0} + {v_t : y_t = 1}; zero loss on all rounds
  double witness_loss = 0.0;
};

/// Runs the adaptive protocol. Throws std::runtime_error when the learner
/// plays outside the feasible set.
MistakeTreeResult mistake_tree_run(const MistakeLearner& learner, int horizon);

/// f_t^y as a splitting function on its true two-element support.
SplittingFunction mistake_loss(int horizon, int t, int y);

/// Exact minimum over the feasible set by enumeration (horizon <= 18).
double mistake_tree_enumerate_opt(const std::vector<SplittingFunction>& losses,
                                  int horizon);

MistakeLearner constant_mistake_learner(bool predict_one);

/// Batch-to-online learner restricted to the feasible set: sparsifies the
/// revealed prefix (true supports) and returns the feasible minimizer of the
/// sparsified cut, with eps driven by the adaptive rule.
MistakeLearner engine_mistake_learner(std::uint64_t seed,
                                      double c_m_const = kDefaultCM,
                                      double c_phi = kDefaultSubmodCPhi);

}  // namespace b2o
