// Command-line experiment runner: batch-to-online conversion experiments,
// conjugate tables, sensitivity audits, lower-bound harnesses, and the
// calibration protocol for the sampling constants.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "b2o/adversary.hpp"
#include "b2o/calibrate.hpp"
#include "b2o/controller.hpp"
#include "b2o/engine.hpp"
#include "b2o/instances.hpp"
#include "b2o/lewis.hpp"
#include "b2o/phi.hpp"
#include "b2o/sparsify.hpp"
#include "b2o/submodular.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitAuditFailure = 2;

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_text_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

b2o::PhiSpec phi_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power_log") return b2o::PhiSpec::from_json(j);
  if (kind == "tabulated") {
    // piecewise-linear interpolant in log-eps as the custom callable
    auto eps = j.at("eps").get<std::vector<double>>();
    auto phi = j.at("phi").get<std::vector<double>>();
    if (eps.size() != phi.size() || eps.size() < 2)
      throw std::invalid_argument("tabulated phi: need matching arrays, length >= 2");
    return b2o::PhiSpec::custom(
        [eps, phi](double e) {
          if (e <= eps.front()) return phi.front();
          if (e >= eps.back()) return phi.back();
          auto it = std::upper_bound(eps.begin(), eps.end(), e);
          const std::size_t hi = it - eps.begin();
          const double lam = (std::log(e) - std::log(eps[hi - 1])) /
                             (std::log(eps[hi]) - std::log(eps[hi - 1]));
          return (1 - lam) * phi[hi - 1] + lam * phi[hi];
        },
        eps.front(), eps.back());
  }
  throw std::invalid_argument("unknown phi kind " + kind);
}

// ---------------------------------------------------------------------------
// simulate

struct Arm {
  std::string name;
  std::optional<double> fixed_eps;  // nullopt: adaptive rule
};

struct SimulateSpec {
  json config;
  std::string experiment = "experiment";
  std::uint64_t root_seed = 0;
  int num_seeds = 1;
  std::vector<Arm> arms;
};

struct RunResult {
  std::string arm;
  std::uint64_t seed = 0;
  b2o::RegretTrace trace;
};

template <class MakePrefix>
void run_arms(const SimulateSpec& spec, const b2o::PhiSpec& phi, double a0,
              std::optional<double> controller_cap, double slack_const, int jobs,
              MakePrefix&& make_prefix, std::vector<RunResult>& results) {
  std::vector<std::pair<int, int>> tasks;  // (arm index, seed index)
  for (int a = 0; a < static_cast<int>(spec.arms.size()); ++a)
    for (int s = 0; s < spec.num_seeds; ++s) tasks.emplace_back(a, s);
  results.resize(tasks.size());

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= tasks.size()) return;
      const auto [a, s] = tasks[k];
      b2o::EngineConfig cfg;
      cfg.phi = phi;
      cfg.a0 = a0;
      cfg.controller_cap = controller_cap;
      cfg.fixed_eps = spec.arms[a].fixed_eps;
      cfg.seed = b2o::mix64(spec.root_seed + 0x9e37 * (s + 1));
      cfg.slack_const = slack_const;
      auto prefix = make_prefix();
      results[k] = RunResult{spec.arms[a].name, cfg.seed, b2o::run_online(prefix, cfg)};
    }
  };
  std::vector<std::thread> pool;
  const int threads = std::max(1, jobs);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed_override,
                 const std::string& out_dir, int jobs) {
  json config = load_json_file(config_path);
  SimulateSpec spec;
  spec.config = config;
  spec.experiment = config.value("experiment", std::string("experiment"));
  if (!config.contains("seed") && !seed_override)
    throw std::invalid_argument("config: root seed is mandatory");
  spec.root_seed = seed_override ? *seed_override : config.at("seed").get<std::uint64_t>();
  spec.num_seeds = config.value("num_seeds", 1);

  const json controller = config.value("controller", json{{"mode", "adaptive"}});
  const std::string mode = controller.value("mode", std::string("adaptive"));
  if (mode == "adaptive") {
    spec.arms.push_back({"adaptive", std::nullopt});
  } else if (mode == "fixed") {
    spec.arms.push_back({"fixed_eps", controller.at("eps").get<double>()});
  } else if (mode == "adaptive_vs_grid") {
    spec.arms.push_back({"adaptive", std::nullopt});
    for (double e : controller.at("eps_grid").get<std::vector<double>>())
      spec.arms.push_back({"eps_" + format_g17(e), e});
  } else {
    throw std::invalid_argument("controller.mode must be adaptive|fixed|adaptive_vs_grid");
  }

  const json oracle = config.value("oracle", json::object());
  const double slack_const = oracle.value("slack_const", 1.0);

  const json& inst_cfg = config.at("instance");
  const std::string kind = inst_cfg.at("kind").get<std::string>();

  std::vector<RunResult> results;
  b2o::PhiSpec phi = b2o::PhiSpec::power_log(1, 1, 0);

  if (kind == "submodular_file" || kind == "majority" || kind == "rademacher") {
    b2o::SubmodInstance inst;
    if (kind == "submodular_file") {
      inst = b2o::submod_instance_from_json(load_json_file(inst_cfg.at("path")));
    } else if (kind == "majority") {
      const int n = inst_cfg.at("n").get<int>();
      const int horizon = inst_cfg.at("T").get<int>();
      inst = b2o::majority_instance(
          n, horizon, b2o::majority_counts(n, horizon, inst_cfg.at("planted_opt").get<int>()));
    } else {
      inst = b2o::rademacher_instance(inst_cfg.at("n").get<int>(), inst_cfg.at("T").get<int>(),
                                      spec.root_seed)
                 .instance;
    }
    inst.c_m_const = oracle.value("c_M", b2o::kDefaultCM);
    inst.c_phi = oracle.value("c_phi", b2o::kDefaultSubmodCPhi);
    phi = inst.registered_phi(inst.size());
    const double a0 = controller.contains("A0") && controller.at("A0").is_number()
                          ? controller.at("A0").get<double>()
                          : b2o::default_a0(phi, inst.size());
    std::optional<double> cap = 1.0;  // sparsifier-backed oracle default
    if (controller.contains("eps_cap")) {
      if (controller.at("eps_cap").is_null())
        cap = std::nullopt;
      else
        cap = controller.at("eps_cap").get<double>();
    }
    run_arms(spec, phi, a0, cap, slack_const, jobs,
             [&] { return b2o::SubmodPrefix(inst); }, results);
  } else if (kind == "l1") {
    b2o::L1Instance inst = b2o::random_l1_instance(
        inst_cfg.at("T").get<int>(), inst_cfg.at("d").get<int>(),
        inst_cfg.value("noise", 0.25), spec.root_seed);
    inst.c_m_const = oracle.value("c_m", b2o::kDefaultCm);
    inst.c_phi = oracle.value("c_phi", b2o::kDefaultL1CPhi);
    phi = inst.registered_phi(inst.size());
    const double a0 = controller.contains("A0") && controller.at("A0").is_number()
                          ? controller.at("A0").get<double>()
                          : b2o::default_a0(phi, inst.size());
    run_arms(spec, phi, a0, std::nullopt, slack_const, jobs,
             [&] { return b2o::L1Prefix(inst); }, results);
  } else if (kind == "synthetic") {
    phi = phi_from_json(inst_cfg.at("phi"));
    b2o::SyntheticInstance inst = b2o::random_synthetic_instance(
        inst_cfg.at("decisions").get<int>(), inst_cfg.at("T").get<int>(),
        inst_cfg.value("bias", 0.5), spec.root_seed, phi);
    const double a0 = controller.contains("A0") && controller.at("A0").is_number()
                          ? controller.at("A0").get<double>()
                          : b2o::default_a0(phi, inst.size());
    run_arms(spec, phi, a0, std::nullopt, slack_const, jobs,
             [&] { return b2o::SyntheticPrefix(inst); }, results);
  } else {
    throw std::invalid_argument("unknown instance kind " + kind);
  }

  // Deterministic merge keyed by (arm, seed).
  const std::string digest = b2o::config_digest(config);
  const fs::path root = fs::path(out_dir) / spec.experiment;
  json arm_summaries = json::object();
  for (const RunResult& r : results) {
    std::ostringstream csv;
    b2o::write_trace_csv(csv, r.trace);
    write_text_file(root / r.arm / (std::to_string(r.seed) + ".csv"), csv.str());
    arm_summaries[r.arm].push_back(b2o::trace_summary(r.trace, digest));
  }
  json summary{{"experiment", spec.experiment},
               {"config_digest", digest},
               {"root_seed", spec.root_seed},
               {"num_seeds", spec.num_seeds},
               {"arms", json::array()}};
  for (const Arm& arm : spec.arms) {
    double mean_regret = 0.0, mean_inconsistency = 0.0;
    const json& runs = arm_summaries[arm.name];
    for (const json& run : runs) {
      mean_regret += run.at("regret").get<double>() / runs.size();
      mean_inconsistency += run.at("inconsistency").get<double>() / runs.size();
    }
    summary["arms"].push_back(json{{"name", arm.name},
                                   {"mean_regret", mean_regret},
                                   {"mean_inconsistency", mean_inconsistency},
                                   {"runs", runs}});
  }
  write_text_file(root / "summary.json", summary.dump(2) + "\n");
  std::cout << "wrote " << (root / "summary.json").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// conjugate

int cmd_conjugate(const b2o::PhiSpec& spec, double u_min, double u_max, int points,
                  const std::string& out_path) {
  if (!(u_min > 0.0) || !(u_max >= u_min))
    throw std::invalid_argument("conjugate: need 0 < u-min <= u-max");
  std::string csv = "u,eps_min,phi_star\n";
  for (int i = 0; i < points; ++i) {
    const double u =
        points == 1 ? u_min
                    : std::exp(std::log(u_min) + (std::log(u_max) - std::log(u_min)) *
                                                     i / (points - 1));
    const b2o::ConjugatePoint pt = b2o::phi_star(spec, u);
    csv += format_g17(u);
    csv += ',';
    csv += format_g17(pt.eps_min);
    csv += ',';
    csv += format_g17(pt.phi_star);
    csv += '\n';
  }
  if (out_path.empty())
    std::cout << csv;
  else
    write_text_file(out_path, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// sensitivity

int cmd_sensitivity_submod(const std::string& instance_path, double eps, double delta,
                           double c_M, const std::string& out_path) {
  const b2o::SubmodularHypergraph h =
      b2o::hypergraph_from_json(load_json_file(instance_path));
  const b2o::SensitivityReport rep = b2o::sensitivity_audit(h, eps, delta, c_M);
  std::string csv = "edge,bound,bound_tight,s_change,s_self\n";
  for (std::size_t e = 0; e < rep.per_edge.size(); ++e) {
    csv += std::to_string(e) + ',' + format_g17(rep.per_edge[e]) + ',' +
           format_g17(rep.per_edge_tight[e]) + ',' + format_g17(rep.s_change[e]) +
           ',' + format_g17(rep.s_self[e]) + '\n';
  }
  if (out_path.empty())
    std::cout << csv;
  else
    write_text_file(out_path, csv);
  std::cout << "average=" << format_g17(rep.average)
            << " average_tight=" << format_g17(rep.average_tight)
            << " cap=" << format_g17(rep.cap) << " M=" << format_g17(rep.m) << "\n";
  bool ok = rep.average <= rep.cap + 1e-9;
  for (std::size_t e = 0; e < rep.s_change.size() && ok; ++e)
    if (rep.s_change[e] > rep.s_self[e] + 1e-9) ok = false;
  if (!ok) {
    std::cerr << "sensitivity audit failed\n";
    return kExitAuditFailure;
  }
  return 0;
}

int cmd_sensitivity_l1(int rows, int dim, std::uint64_t seed, double eps,
                       const std::string& out_path) {
  b2o::RngStream rng(seed, "cli-l1-audit");
  Eigen::MatrixXd a(rows, dim);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = rng.next_uniform(-1.0, 1.0);
  const b2o::L1SensitivityReport rep = b2o::l1_sensitivity_audit(a);
  const int m = b2o::l1_sample_count(dim, eps, rows);
  std::string csv = "row,l1_change,identity_rhs,tv_bound\n";
  for (int i = 0; i < rows; ++i)
    csv += std::to_string(i) + ',' + format_g17(rep.l1_change[i]) + ',' +
           format_g17(rep.identity_rhs[i]) + ',' +
           format_g17(4.0 * m / eps * rep.l1_change[i]) + '\n';
  if (out_path.empty())
    std::cout << csv;
  else
    write_text_file(out_path, csv);
  std::cout << "average=" << format_g17(rep.average) << " bound=" << format_g17(rep.bound)
            << " identity_gap=" << format_g17(rep.max_identity_gap)
            << " tv_bound_avg=" << format_g17(4.0 * m / eps * rep.average) << "\n";
  if (rep.max_identity_gap > 1e-6 || rep.average > rep.bound + 1e-9 ||
      !rep.monotone_ok) {
    std::cerr << "l1 sensitivity audit failed\n";
    return kExitAuditFailure;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// lowerbound

int cmd_lowerbound(const std::string& kind, int n, int horizon, std::uint64_t seed,
                   const std::string& learner_name, const std::string& out_dir) {
  const fs::path root = fs::path(out_dir) / ("lowerbound_" + kind);
  if (kind == "rademacher") {
    b2o::RademacherInstance inst = b2o::rademacher_instance(n, horizon, seed);
    b2o::SubmodPrefix prefix(inst.instance);
    b2o::EngineConfig cfg;
    cfg.phi = inst.instance.registered_phi(horizon);
    cfg.a0 = b2o::default_a0(cfg.phi, horizon);
    cfg.controller_cap = 1.0;
    cfg.seed = seed;
    b2o::RegretTrace trace = b2o::run_online(prefix, cfg);
    std::ostringstream csv;
    b2o::write_trace_csv(csv, trace);
    write_text_file(root / (std::to_string(seed) + ".csv"), csv.str());
    json summary = b2o::trace_summary(
        trace, b2o::config_digest(json{{"kind", kind}, {"n", n}, {"T", horizon}}));
    summary["opt_formula"] = inst.opt_formula;
    write_text_file(root / "summary.json", summary.dump(2) + "\n");
    std::cout << "regret=" << format_g17(trace.regret)
              << " opt_T=" << format_g17(trace.opt_T) << "\n";
    return 0;
  }
  if (kind == "mistake_tree") {
    b2o::MistakeLearner learner;
    if (learner_name == "engine")
      learner = b2o::engine_mistake_learner(seed);
    else if (learner_name == "zero")
      learner = b2o::constant_mistake_learner(false);
    else if (learner_name == "one")
      learner = b2o::constant_mistake_learner(true);
    else
      throw std::invalid_argument("learner must be engine|zero|one");
    b2o::MistakeTreeResult res = b2o::mistake_tree_run(learner, horizon);
    std::ostringstream csv;
    b2o::write_trace_csv(csv, res.trace);
    write_text_file(root / (learner_name + "_" + std::to_string(seed) + ".csv"),
                    csv.str());
    json summary = b2o::trace_summary(
        res.trace,
        b2o::config_digest(json{{"kind", kind}, {"T", horizon}, {"learner", learner_name}}));
    summary["witness_loss"] = res.witness_loss;
    if (horizon <= 18) {
      std::vector<b2o::SplittingFunction> losses;
      for (int t = 0; t < horizon; ++t)
        losses.push_back(b2o::mistake_loss(horizon, t, res.labels[t]));
      summary["opt_enumerated"] = b2o::mistake_tree_enumerate_opt(losses, horizon);
    }
    write_text_file(root / "summary.json", summary.dump(2) + "\n");
    std::cout << "total_loss=" << format_g17(res.trace.cum_loss)
              << " witness_loss=" << format_g17(res.witness_loss) << "\n";
    return 0;
  }
  throw std::invalid_argument("kind must be rademacher|mistake_tree");
}

// ---------------------------------------------------------------------------
// calibrate

int cmd_calibrate(const std::string& target, std::uint64_t seed, int trials,
                  const std::string& out_path) {
  b2o::CalibrationReport rep;
  if (target == "c_M")
    rep = b2o::calibrate_sparsifier_cm(seed, trials);
  else if (target == "c_m")
    rep = b2o::calibrate_l1_cm(seed, trials);
  else
    throw std::invalid_argument("target must be c_M|c_m");
  json out{{"target", target},
           {"seed", seed},
           {"trials", trials},
           {"threshold", rep.threshold},
           {"chosen", rep.chosen},
           {"candidates", rep.candidates},
           {"rates", rep.rates}};
  if (!out_path.empty()) write_text_file(out_path, out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch-to-online conversion experiments"};
  app.require_subcommand(1);

  // conjugate
  auto* conj = app.add_subcommand("conjugate", "emit (u, eps_min, phi_star) over a log grid");
  double c1 = 1.0, q = 1.0, c2 = 0.0, u_min = 1e-2, u_max = 1e2;
  int points = 25;
  std::string spec_file, conj_out;
  conj->add_option("--c1", c1, "power-log c1");
  conj->add_option("--q", q, "power-log exponent");
  conj->add_option("--c2", c2, "power-log c2");
  conj->add_option("--spec-file", spec_file, "phi spec JSON (power_log or tabulated)");
  conj->add_option("--u-min", u_min, "grid start (positive)");
  conj->add_option("--u-max", u_max, "grid end");
  conj->add_option("--points", points, "grid size");
  conj->add_option("--out", conj_out, "output CSV path (stdout when empty)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run engine experiments from a config file");
  std::string sim_config, sim_out = "out";
  int jobs = 1;
  std::optional<std::uint64_t> sim_seed;
  std::uint64_t sim_seed_value = 0;
  bool sim_seed_set = false;
  sim->add_option("--config", sim_config, "config JSON path")->required();
  sim->add_option("--seed", sim_seed_value, "root seed override")
      ->each([&](const std::string&) { sim_seed_set = true; });
  sim->add_option("--out", sim_out, "output directory");
  sim->add_option("--jobs", jobs, "worker threads for seed fan-out");

  // sensitivity
  auto* sens = app.add_subcommand("sensitivity", "per-edge / per-row sensitivity audits");
  std::string sens_instance, sens_out;
  double sens_eps = 0.5, sens_delta = 0.05, sens_cM = b2o::kDefaultCM;
  int l1_rows = 0, l1_dim = 1;
  std::uint64_t sens_seed = 0;
  sens->add_option("--instance", sens_instance, "hypergraph instance JSON");
  sens->add_option("--eps", sens_eps, "approximation parameter");
  sens->add_option("--delta", sens_delta, "failure probability");
  sens->add_option("--c-M", sens_cM, "sparsifier sampling constant");
  sens->add_option("--l1-rows", l1_rows, "audit a random t x d matrix instead");
  sens->add_option("--l1-dim", l1_dim, "columns of the random matrix");
  sens->add_option("--seed", sens_seed, "seed for the random matrix");
  sens->add_option("--out", sens_out, "output CSV path (stdout when empty)");

  // lowerbound
  auto* low = app.add_subcommand("lowerbound", "adversarial lower-bound harnesses");
  std::string low_kind = "rademacher", low_learner = "engine", low_out = "out";
  int low_n = 8, low_T = 64;
  std::uint64_t low_seed = 0;
  low->add_option("--kind", low_kind, "rademacher|mistake_tree")->required();
  low->add_option("--n", low_n, "ground-set size (rademacher)");
  low->add_option("--T", low_T, "horizon")->required();
  low->add_option("--seed", low_seed, "seed");
  low->add_option("--learner", low_learner, "engine|zero|one (mistake_tree)");
  low->add_option("--out", low_out, "output directory");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "calibrate c_M / c_m by the shipped protocol");
  std::string cal_target = "c_M", cal_out;
  std::uint64_t cal_seed = 0;
  int cal_trials = 400;
  cal->add_option("--target", cal_target, "c_M|c_m")->required();
  cal->add_option("--seed", cal_seed, "protocol seed");
  cal->add_option("--trials", cal_trials, "trials per candidate");
  cal->add_option("--out", cal_out, "report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (conj->parsed()) {
      b2o::PhiSpec spec = spec_file.empty()
                              ? b2o::PhiSpec::power_log(c1, q, c2)
                              : phi_from_json(load_json_file(spec_file));
      return cmd_conjugate(spec, u_min, u_max, points, conj_out);
    }
    if (sim->parsed()) {
      if (sim_seed_set) sim_seed = sim_seed_value;
      return cmd_simulate(sim_config, sim_seed, sim_out, jobs);
    }
    if (sens->parsed()) {
      if (l1_rows > 0) return cmd_sensitivity_l1(l1_rows, l1_dim, sens_seed, sens_eps, sens_out);
      if (sens_instance.empty())
        throw std::invalid_argument("sensitivity: need --instance or --l1-rows");
      return cmd_sensitivity_submod(sens_instance, sens_eps, sens_delta, sens_cM, sens_out);
    }
    if (low->parsed()) return cmd_lowerbound(low_kind, low_n, low_T, low_seed, low_learner, low_out);
    if (cal->parsed()) return cmd_calibrate(cal_target, cal_seed, cal_trials, cal_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
