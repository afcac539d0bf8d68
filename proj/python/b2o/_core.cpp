#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

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
#include "b2o/tv.hpp"

namespace py = pybind11;
using namespace b2o;

namespace {

PhiSpec make_phi(double c1, double q, double c2) { return PhiSpec::power_log(c1, q, c2); }

SubmodularHypergraph hypergraph_from_string(const std::string& text) {
  return hypergraph_from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "batch-to-online conversion core";

  py::class_<PhiSpec>(m, "PhiSpec")
      .def_static("power_log", &make_phi, py::arg("c1"), py::arg("q"), py::arg("c2") = 0.0)
      .def("__call__", [](const PhiSpec& s, double eps) { return s(eps); });

  py::class_<ConjugatePoint>(m, "ConjugatePoint")
      .def_readonly("u", &ConjugatePoint::u)
      .def_readonly("eps_min", &ConjugatePoint::eps_min)
      .def_readonly("phi_star", &ConjugatePoint::phi_star);

  m.def("eps_min", &eps_min, py::arg("spec"), py::arg("u"));
  m.def("phi_star", &phi_star, py::arg("spec"), py::arg("u"));
  m.def("corollary_bound", &corollary_bound, py::arg("spec"), py::arg("opt_T"),
        py::arg("h_T"), py::arg("a0"));

  py::class_<ControllerState>(m, "ControllerState")
      .def_static("init", &ControllerState::init, py::arg("a0"),
                  py::arg("eps_cap") = std::nullopt)
      .def_readonly("t", &ControllerState::t)
      .def_readonly("a", &ControllerState::a)
      .def_readonly("h", &ControllerState::h)
      .def_readonly("u", &ControllerState::u);
  m.def("controller_step", &controller_step, py::arg("state"), py::arg("opt_t"),
        py::arg("spec"));
  m.def("audit_step_identity", &audit_step_identity);
  m.def(
      "audit_telescope",
      [](const std::vector<double>& opts, const PhiSpec& spec, double a0) {
        return audit_telescope(opts, spec, a0);
      },
      py::arg("opt_seq"), py::arg("spec"), py::arg("a0"));

  m.def("tv_discrete", [](const std::vector<double>& p, const std::vector<double>& q) {
    return tv_discrete(p, q);
  });
  m.def("tv_uniform_intervals", &tv_uniform_intervals);
  m.def("tv_product_bound",
        [](const std::vector<double>& tvs) { return tv_product_bound(tvs); });
  m.def("tv_conditional_bound",
        [](double marg, const std::vector<double>& masses, const std::vector<double>& conds) {
          return tv_conditional_bound(marg, masses, conds);
        });

  m.def("brute_min", [](const std::function<double(Subset)>& f, int n) {
    return brute_min(f, n);
  });
  m.def("is_submodular", [](const std::function<double(Subset)>& f, int n) {
    return is_submodular(f, n);
  });
  m.def("hypergraph_cuts", [](const std::string& json_text) {
    const SubmodularHypergraph h = hypergraph_from_string(json_text);
    std::vector<double> cuts;
    for (Subset s = 0; s < (Subset{1} << h.n); ++s) cuts.push_back(cut_value(h, s));
    return cuts;
  });
  m.def("offline_submod_solve",
        [](const std::string& json_text, double eps, int horizon, std::uint64_t seed) {
          return offline_submod_solve(hypergraph_from_string(json_text), eps, horizon, seed);
        });

  py::class_<LewisState>(m, "LewisState")
      .def_readonly("w", &LewisState::w)
      .def_readonly("p", &LewisState::p)
      .def_readonly("rank", &LewisState::rank)
      .def_readonly("iterations", &LewisState::iterations)
      .def_readonly("residual", &LewisState::residual);
  m.def("lewis_weights", &lewis_weights, py::arg("a"), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 100);
  m.def("l1_solve", [](const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& w) {
    const L1Solution sol = l1_solve(a, b, w);
    return std::make_pair(sol.theta, sol.objective);
  });
  m.def("weighted_median_theta", &weighted_median_theta);
  m.def("l1_sensitivity_average", [](const Eigen::MatrixXd& a) {
    const L1SensitivityReport rep = l1_sensitivity_audit(a);
    return std::make_tuple(rep.average, rep.bound, rep.max_identity_gap);
  });

  m.def("rademacher_opt", [](int n, int horizon, std::uint64_t seed) {
    return rademacher_instance(n, horizon, seed).opt_formula;
  });

  m.def("simulate_majority",
        [](int n, int horizon, int planted_opt, std::uint64_t seed) {
          SubmodInstance inst =
              majority_instance(n, horizon, majority_counts(n, horizon, planted_opt));
          SubmodPrefix prefix(inst);
          EngineConfig cfg;
          cfg.phi = inst.registered_phi(horizon);
          cfg.a0 = default_a0(cfg.phi, horizon);
          cfg.controller_cap = 1.0;
          cfg.seed = seed;
          const RegretTrace trace = run_online(prefix, cfg);
          return std::make_tuple(trace.regret, trace.opt_T, trace.inconsistency);
        },
        py::arg("n"), py::arg("horizon"), py::arg("planted_opt"), py::arg("seed"));
}
