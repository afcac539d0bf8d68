#include "b2o/adversary.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "b2o/controller.hpp"
#include "b2o/sparsify.hpp"

namespace b2o {

RademacherInstance rademacher_instance(int n, int horizon, std::uint64_t seed) {
  if (n > horizon) throw std::invalid_argument("rademacher_instance: need n <= T");
  if (n < 1 || n > 16) throw std::invalid_argument("rademacher_instance: need n in [1, 16]");
  RngStream rng(seed, "rademacher");
  RademacherInstance out;
  out.sigma.resize(horizon);
  std::vector<SplittingFunction> losses;
  losses.reserve(horizon);
  std::vector<double> elem_sum(n, 0.0);
  for (int t = 0; t < horizon; ++t) {
    const int i = t % n;
    const int sigma = rng.rademacher();
    out.sigma[t] = sigma;
    elem_sum[i] += sigma;
    // (1+sigma)/2 when i is played, (1-sigma)/2 otherwise.
    if (sigma > 0)
      losses.push_back(make_table_function({i}, {0.0, 1.0}));
    else
      losses.push_back(make_table_function({i}, {1.0, 0.0}));
  }
  double abs_sums = 0.0;
  for (double s : elem_sum) abs_sums += std::abs(s);
  out.opt_formula = 0.5 * (horizon - abs_sums);
  out.instance = SubmodInstance::from_losses(n, std::move(losses));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kMistakeAnchor0 = 0;
constexpr int kMistakeAnchor1 = 1;

bool feasible(Subset s) {
  return ((s >> kMistakeAnchor0) & 1u) && !((s >> kMistakeAnchor1) & 1u);
}

}  // namespace

SplittingFunction mistake_loss(int horizon, int t, int y) {
  const int v = t + 2;  // element id of v_{t+1} for 0-based t
  if (t < 0 || t >= horizon) throw std::out_of_range("mistake_loss: round out of range");
  if (y == 0) {
    // 1[v in S, u1 not in S]
    return make_table_function({kMistakeAnchor1, v}, {0.0, 0.0, 1.0, 0.0});
  }
  // 1[u0 in S, v not in S]
  return make_table_function({kMistakeAnchor0, v}, {0.0, 1.0, 0.0, 0.0});
}

double mistake_tree_enumerate_opt(const std::vector<SplittingFunction>& losses,
                                  int horizon) {
  if (horizon > 18)
    throw std::length_error("mistake_tree_enumerate_opt: horizon capped at 18");
  double best = std::numeric_limits<double>::infinity();
  const Subset v_end = Subset{1} << horizon;
  for (Subset v_mask = 0; v_mask < v_end; ++v_mask) {
    const Subset s = (v_mask << 2) | 1u;  // u0 in, u1 out
    double sum = 0.0;
    for (const SplittingFunction& f : losses) sum += f(s);
    best = std::min(best, sum);
  }
  return best;
}

MistakeTreeResult mistake_tree_run(const MistakeLearner& learner, int horizon) {
  if (horizon < 1) throw std::invalid_argument("mistake_tree_run: horizon must be >= 1");
  const int n = horizon + 2;
  if (n > kMaxGroundSet)
    throw std::length_error("mistake_tree_run: ground set exceeds enumeration cap");
  MistakeTreeResult result;
  result.trace.model = "adaptive";
  std::vector<SplittingFunction> revealed;
  Subset prev = 0;
  for (int t = 1; t <= horizon; ++t) {
    const Subset s = learner(n, horizon, t, revealed);
    if (!feasible(s))
      throw std::runtime_error("mistake_tree_run: learner played an infeasible set at round " +
                               std::to_string(t));
    const int v = t + 1;
    const int prediction = (s >> v) & 1u;
    const int label = 1 - prediction;
    result.labels.push_back(label);
    SplittingFunction f = mistake_loss(horizon, t - 1, label);
    const double loss = f(s);
    revealed.push_back(std::move(f));
    TraceRow row{t, t - 1, loss, 0.0, 0.0, 0.0, t > 1 && s != prev};
    if (row.changed) ++result.trace.inconsistency;
    result.trace.cum_loss += loss;
    result.trace.rows.push_back(row);
    prev = s;
  }
  result.witness = 1u;  // u0
  for (int t = 0; t < horizon; ++t)
    if (result.labels[t] == 1) result.witness |= Subset{1} << (t + 2);
  for (int t = 0; t < horizon; ++t)
    result.witness_loss += mistake_loss(horizon, t, result.labels[t])(result.witness);
  result.trace.opt_T = 0.0;
  result.trace.regret = result.trace.cum_loss;
  return result;
}

MistakeLearner constant_mistake_learner(bool predict_one) {
  return [predict_one](int n, int /*horizon*/, int /*t*/,
                       const std::vector<SplittingFunction>&) -> Subset {
    Subset s = 1u;  // u0
    if (predict_one)
      for (int v = 2; v < n; ++v) s |= Subset{1} << v;
    return s;
  };
}

MistakeLearner engine_mistake_learner(std::uint64_t seed, double c_m_const,
                                      double c_phi) {
  struct State {
    ControllerState controller;
    bool init = false;
  };
  auto state = std::make_shared<State>();
  return [state, seed, c_m_const, c_phi](
             int n, int horizon, int t,
             const std::vector<SplittingFunction>& revealed) -> Subset {
    const double nn = n;
    const PhiSpec phi = PhiSpec::power_log(
        c_phi * (nn * nn * nn + nn * nn * std::log(std::max(2, horizon))), 3.0, 0.0);
    if (!state->init) {
      state->controller = ControllerState::init(default_a0(phi, horizon), 1.0);
      state->init = true;
    }
    if (revealed.empty()) return 1u;  // smallest feasible set
    // The running witness keeps the prefix realizable, so opt_{t-1} = 0.
    auto [next, eps] = controller_step(state->controller, 0.0, phi);
    state->controller = next;

    SubmodularHypergraph prefix;
    prefix.n = n;
    for (const SplittingFunction& f : revealed)
      prefix.edges.push_back(Hyperedge{f, 0.0, 1.0});
    ImportanceScores scores =
        importance_scores(prefix, eps, 1.0 / horizon, c_m_const);
    RngStream rng(seed, "mistake-oracle", static_cast<std::uint64_t>(t));
    SparsifierOutput sample = sample_sparsifier(scores, eps, rng);
    SubmodularHypergraph sparse = apply_sparsifier(prefix, sample);

    double best_val = std::numeric_limits<double>::infinity();
    Subset best = 1u;
    const Subset v_end = Subset{1} << (n - 2);
    for (Subset v_mask = 0; v_mask < v_end; ++v_mask) {
      const Subset s = (v_mask << 2) | 1u;
      const double val = cut_value(sparse, s);
      if (val < best_val) {
        best_val = val;
        best = s;
      }
    }
    return best;
  };
}

}  // namespace b2o
