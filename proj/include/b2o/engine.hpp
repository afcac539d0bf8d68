#pragma once

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "b2o/controller.hpp"
#include "b2o/phi.hpp"
#include "b2o/rng.hpp"

namespace b2o {

struct TraceRow {
  int t = 0;
  int item = 0;  // original index of the item revealed at round t
  double loss = 0.0;
  double opt = 0.0;
  double eps = 0.0;
  double u = 0.0;
  bool changed = false;  // decision differs between rounds t and t+1
};

struct RegretTrace {
  std::vector<TraceRow> rows;
  double cum_loss = 0.0;
  double opt_T = 0.0;
  double regret = 0.0;
  int inconsistency = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::string model = "random_order";
};

/// Pinned CSV format: header
///   t,loss,opt_t,eps_t,u_t,cum_loss,cum_regret,changed
/// with 17-significant-digit floats.
void write_trace_csv(std::ostream& os, const RegretTrace& trace);
nlohmann::json trace_summary(const RegretTrace& trace, const std::string& config_digest);

/// Uniformly random arrival order of `count` items (indices 0..count-1),
/// Fisher-Yates driven by the stream ("order", seed).
std::vector<int> random_order_stream(int count, std::uint64_t seed);

/// FNV-1a digest of a canonical JSON dump, hex-encoded.
std::string config_digest(const nlohmann::json& config);

/// Stateful online problem: reveals items by original index, maintains the
/// prefix optimum, and produces the next decision through a seeded
/// approximate solve.
template <class P>
concept OnlineProblem = requires(P p, const P& cp, const typename P::Decision& d,
                                 int item, double eps, RngStream& rng) {
  requires std::equality_comparable<typename P::Decision>;
  { cp.size() } -> std::convertible_to<int>;
  { cp.initial_decision() } -> std::convertible_to<typename P::Decision>;
  { cp.loss(d, item) } -> std::convertible_to<double>;
  { p.push(item) };
  { cp.opt() } -> std::convertible_to<double>;
  { p.solve(eps, rng) } -> std::convertible_to<typename P::Decision>;
  { cp.eps_max() } -> std::convertible_to<double>;
};

struct EngineConfig {
  PhiSpec phi = PhiSpec::power_log(1.0, 1.0, 0.0);
  double a0 = 1e-6;
  std::optional<double> controller_cap;  // cap inside the eps rule
  std::optional<double> fixed_eps;       // bypass the rule (comparison arms)
  std::uint64_t seed = 0;
  double slack_const = 1.0;  // declared additive-slack constant (per-round t/T)
};

/// Batch-to-online conversion under a seeded random order.
template <OnlineProblem P>
RegretTrace run_online(P& problem, const EngineConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const int horizon = problem.size();
  const std::vector<int> order = random_order_stream(horizon, cfg.seed);

  RegretTrace trace;
  trace.seed = cfg.seed;
  trace.rows.reserve(horizon);
  ControllerState state = ControllerState::init(cfg.a0, cfg.controller_cap);
  typename P::Decision theta = problem.initial_decision();

  for (int t = 1; t <= horizon; ++t) {
    const int item = order[t - 1];
    const double loss = problem.loss(theta, item);
    trace.cum_loss += loss;
    problem.push(item);
    const double opt_t = problem.opt();
    auto [next_state, eps_rule] = controller_step(state, opt_t, cfg.phi);
    state = next_state;
    const double eps_t = cfg.fixed_eps ? *cfg.fixed_eps : eps_rule;

    TraceRow row{t, item, loss, opt_t, eps_t, state.u, false};
    if (t < horizon) {
      RngStream rng(cfg.seed, "oracle", static_cast<std::uint64_t>(t));
      typename P::Decision next = problem.solve(std::min(eps_t, problem.eps_max()), rng);
      row.changed = !(next == theta);
      if (row.changed) ++trace.inconsistency;
      theta = std::move(next);
    }
    trace.rows.push_back(std::move(row));
  }
  trace.opt_T = trace.rows.empty() ? 0.0 : trace.rows.back().opt;
  trace.regret = trace.cum_loss - trace.opt_T;
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

struct PrefixOptimaAudit {
  double mc_mean = 0.0;  // Monte-Carlo estimate of E[sum_t opt_t / t]
  double mc_se = 0.0;
  double opt_T = 0.0;
};

/// Monte-Carlo check of E[sum_t OPT_t/t] <= OPT_T over random orders.
/// `make_problem` returns a fresh prefix state.
template <class Factory>
PrefixOptimaAudit audit_prefix_optima(Factory&& make_problem, int num_seeds,
                                      std::uint64_t root_seed = 0) {
  PrefixOptimaAudit audit;
  std::vector<double> sums;
  sums.reserve(num_seeds);
  for (int s = 0; s < num_seeds; ++s) {
    auto problem = make_problem();
    const int horizon = problem.size();
    const std::vector<int> order =
        random_order_stream(horizon, mix64(root_seed + s));
    double sum = 0.0;
    for (int t = 1; t <= horizon; ++t) {
      problem.push(order[t - 1]);
      sum += problem.opt() / t;
    }
    audit.opt_T = problem.opt();
    sums.push_back(sum);
  }
  for (double s : sums) audit.mc_mean += s / num_seeds;
  double var = 0.0;
  for (double s : sums) var += (s - audit.mc_mean) * (s - audit.mc_mean);
  if (num_seeds > 1) var /= (num_seeds - 1.0);
  audit.mc_se = std::sqrt(var / num_seeds);
  return audit;
}

struct SingleStepAudit {
  double mc_loss = 0.0;  // E[loss(theta_{t+1}, x_{t+1})]
  double mc_se = 0.0;
  double bound = 0.0;        // E[(1+eps)/t opt_t + phi(eps)/t]
  double slack = 0.0;        // declared additive slack (slack_const / T)
};

/// Monte-Carlo check of the single-step bound at a fixed eps.
template <class Factory>
SingleStepAudit audit_single_step(Factory&& make_problem, const PhiSpec& phi, int t,
                                  double eps, int num_seeds, double slack_const = 1.0,
                                  std::uint64_t root_seed = 0) {
  SingleStepAudit audit;
  std::vector<double> losses;
  losses.reserve(num_seeds);
  double bound_sum = 0.0;
  int horizon = 0;
  for (int s = 0; s < num_seeds; ++s) {
    auto problem = make_problem();
    horizon = problem.size();
    if (t >= horizon) throw std::invalid_argument("audit_single_step: need t < T");
    const std::vector<int> order =
        random_order_stream(horizon, mix64(root_seed + s));
    for (int i = 0; i < t; ++i) problem.push(order[i]);
    RngStream rng(mix64(root_seed + s), "audit-oracle");
    auto theta = problem.solve(std::min(eps, problem.eps_max()), rng);
    losses.push_back(problem.loss(theta, order[t]));
    bound_sum += (1.0 + eps) / t * problem.opt() + phi(eps) / t;
  }
  for (double l : losses) audit.mc_loss += l / num_seeds;
  double var = 0.0;
  for (double l : losses) var += (l - audit.mc_loss) * (l - audit.mc_loss);
  if (num_seeds > 1) var /= (num_seeds - 1.0);
  audit.mc_se = std::sqrt(var / num_seeds);
  audit.bound = bound_sum / num_seeds;
  audit.slack = slack_const / horizon;
  return audit;
}

}  // namespace b2o
