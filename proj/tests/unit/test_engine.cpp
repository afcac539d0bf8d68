#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>
#include <sstream>

#include "b2o/engine.hpp"
#include "b2o/instances.hpp"

#include <nlohmann/json.hpp>

using namespace b2o;

TEST_CASE("random order stream: determinism and degenerate cases") {
  CHECK(random_order_stream(1, 42) == std::vector<int>{0});
  CHECK(random_order_stream(5, 99) == random_order_stream(5, 99));
  CHECK_THROWS_AS(random_order_stream(0, 1), std::invalid_argument);
}

TEST_CASE("random order stream: all 6 orders of 3 items are uniform") {
  std::map<std::vector<int>, int> counts;
  const int trials = 60000;
  for (int seed = 0; seed < trials; ++seed) ++counts[random_order_stream(3, seed)];
  REQUIRE(counts.size() == 6);
  // chi-square against uniform: 5 dof, 1e-3 tail at ~20.5
  double chi2 = 0.0;
  const double expected = trials / 6.0;
  for (const auto& [order, c] : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 20.5);
  // binomial 3-sigma window per order
  const double sigma = std::sqrt(trials * (1.0 / 6) * (5.0 / 6));
  for (const auto& [order, c] : counts) CHECK(std::abs(c - expected) <= 3 * sigma);
}

TEST_CASE("engine run on all-zero losses has zero regret") {
  std::vector<SplittingFunction> losses;
  for (int i = 0; i < 16; ++i)
    losses.push_back(make_table_function({}, {0.0}));
  SubmodInstance inst = SubmodInstance::from_losses(3, std::move(losses));
  SubmodPrefix prefix(inst);
  EngineConfig cfg;
  cfg.phi = inst.registered_phi(inst.size());
  cfg.a0 = default_a0(cfg.phi, inst.size());
  cfg.controller_cap = 1.0;
  cfg.seed = 5;
  RegretTrace trace = run_online(prefix, cfg);
  CHECK(trace.regret == doctest::Approx(0.0));
  CHECK(trace.cum_loss == doctest::Approx(0.0));
  CHECK(trace.opt_T == doctest::Approx(0.0));
}

TEST_CASE("single-round run: regret is bounded by the loss range") {
  std::vector<SplittingFunction> losses{make_table_function({0}, {0.0, 1.0})};
  SubmodInstance inst = SubmodInstance::from_losses(2, std::move(losses));
  SubmodPrefix prefix(inst);
  EngineConfig cfg;
  cfg.phi = inst.registered_phi(1);
  cfg.a0 = 1e-6;
  cfg.controller_cap = 1.0;
  RegretTrace trace = run_online(prefix, cfg);
  REQUIRE(trace.rows.size() == 1);
  CHECK(trace.regret >= 0.0);
  CHECK(trace.regret <= 1.0);
  CHECK(trace.rows[0].changed == false);
}

TEST_CASE("trace internal consistency and CSV determinism") {
  SubmodInstance inst = majority_instance(4, 64, {2, 3, 1, 0});
  auto run_once = [&](std::uint64_t seed) {
    SubmodPrefix prefix(inst);
    EngineConfig cfg;
    cfg.phi = inst.registered_phi(inst.size());
    cfg.a0 = default_a0(cfg.phi, inst.size());
    cfg.controller_cap = 1.0;
    cfg.seed = seed;
    return run_online(prefix, cfg);
  };
  RegretTrace trace = run_once(17);

  // opt_t nondecreasing; regret recomputable from rows
  double cum = 0.0, prev_opt = 0.0;
  int changes = 0;
  for (const TraceRow& row : trace.rows) {
    CHECK(row.opt >= prev_opt - 1e-12);
    prev_opt = row.opt;
    cum += row.loss;
    if (row.changed) ++changes;
  }
  CHECK(cum == doctest::Approx(trace.cum_loss));
  CHECK(trace.regret == doctest::Approx(cum - trace.opt_T));
  CHECK(changes == trace.inconsistency);

  // opt_T equals the exact optimum of the full multiset (planted value 6)
  CHECK(trace.opt_T == doctest::Approx(6.0));

  std::ostringstream csv_a, csv_b;
  write_trace_csv(csv_a, trace);
  write_trace_csv(csv_b, run_once(17));
  CHECK(csv_a.str() == csv_b.str());
  CHECK(csv_a.str().substr(0, 46) ==
        "t,loss,opt_t,eps_t,u_t,cum_loss,cum_regret,cha");

  RegretTrace other = run_once(18);
  std::ostringstream csv_c;
  write_trace_csv(csv_c, other);
  CHECK(csv_a.str() != csv_c.str());

  nlohmann::json summary = trace_summary(trace, "deadbeef");
  CHECK(summary.at("seed") == 17);
  CHECK(summary.at("config_digest") == "deadbeef");
  CHECK(summary.at("opt_T") == doctest::Approx(6.0));
}

TEST_CASE("prefix optima audit on toy instances") {
  // one decision with zero loss everywhere: both sides zero
  std::vector<SplittingFunction> losses;
  for (int i = 0; i < 8; ++i)
    losses.push_back(make_table_function({0}, {0.0, 1.0}));
  SubmodInstance zero_inst = SubmodInstance::from_losses(2, std::move(losses));
  auto audit = audit_prefix_optima([&] { return SubmodPrefix(zero_inst); }, 50, 1);
  CHECK(audit.opt_T == doctest::Approx(0.0));
  CHECK(audit.mc_mean == doctest::Approx(0.0));

  // T = 1: sum equals OPT_1 = OPT_T deterministically
  std::vector<SplittingFunction> one{make_table_function({0}, {0.25, 1.0})};
  SubmodInstance one_inst = SubmodInstance::from_losses(2, std::move(one), true);
  auto audit1 = audit_prefix_optima([&] { return SubmodPrefix(one_inst); }, 10, 2);
  CHECK(audit1.mc_mean == doctest::Approx(audit1.opt_T));

  // mixed instance: lemma inequality with Monte-Carlo margin
  SubmodInstance mixed = majority_instance(4, 32, {1, 2, 3, 0});
  auto audit2 = audit_prefix_optima([&] { return SubmodPrefix(mixed); }, 200, 3);
  CHECK(audit2.mc_mean <= audit2.opt_T + 3 * audit2.mc_se);
}

TEST_CASE("single step audit holds on a small sparsifier instance") {
  SubmodInstance inst = majority_instance(4, 16, {1, 1, 1, 1});
  PhiSpec phi = inst.registered_phi(inst.size());
  auto audit = audit_single_step([&] { return SubmodPrefix(inst); }, phi, 8, 0.5, 300,
                                 1.0, 11);
  CHECK(audit.mc_loss <= audit.bound + 3 * audit.mc_se + audit.slack);
}

TEST_CASE("synthetic oracle engine run exercises the controller") {
  PhiSpec phi = PhiSpec::power_log(1.0, 2.0, 0.0);
  SyntheticInstance inst = random_synthetic_instance(6, 128, 0.7, 10, phi);
  SyntheticPrefix prefix(inst);
  EngineConfig cfg;
  cfg.phi = phi;
  cfg.a0 = default_a0(phi, inst.size());
  cfg.seed = 4;
  RegretTrace trace = run_online(prefix, cfg);
  CHECK(trace.rows.size() == 128);
  // losses are in [0,1], so regret is at most T
  CHECK(trace.regret <= 128.0);
  double prev_u = -1.0;
  for (const TraceRow& row : trace.rows) {
    CHECK(row.eps > 0.0);
    prev_u = row.u;
  }
  CHECK(prev_u > 0.0);
}

TEST_CASE("l1 prefix engine run on a small instance") {
  L1Instance inst = random_l1_instance(24, 1, 0.2, 77);
  L1Prefix prefix(inst);
  EngineConfig cfg;
  cfg.phi = inst.registered_phi(inst.size());
  cfg.a0 = default_a0(cfg.phi, inst.size());
  cfg.seed = 9;
  RegretTrace trace = run_online(prefix, cfg);
  CHECK(trace.rows.size() == 24);
  CHECK(trace.opt_T > 0.0);
  for (const TraceRow& row : trace.rows) {
    CHECK(row.loss >= 0.0);
    CHECK(row.loss <= 1.0 + 1e-9);
  }
}

TEST_CASE("config digest is stable and sensitive") {
  nlohmann::json a{{"seed", 1}, {"T", 10}};
  nlohmann::json b{{"seed", 2}, {"T", 10}};
  CHECK(config_digest(a) == config_digest(a));
  CHECK(config_digest(a) != config_digest(b));
  CHECK(config_digest(a).size() == 16);
}
