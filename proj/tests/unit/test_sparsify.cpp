#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "b2o/instances.hpp"
#include "b2o/rng.hpp"
#include "b2o/sparsify.hpp"

using namespace b2o;

namespace {

SubmodularHypergraph two_node_directed(int copies) {
  SubmodularHypergraph h;
  h.n = 2;
  for (int i = 0; i < copies; ++i)
    h.edges.push_back(Hyperedge{make_directed_cut(2, 0, 1), 0.0, 1.0});
  return h;
}

}  // namespace

TEST_CASE("importance scores on the single directed edge") {
  // Only the ordered pair (0,1) has a nonzero min-cut, ratio 1. The full-set
  // value of a directed cut is zero, so rho' vanishes by the zero-denominator
  // convention.
  ImportanceScores sc = importance_scores(two_node_directed(1), 0.5, 0.1, 1.0);
  CHECK(sc.rho[0] == doctest::Approx(1.0));
  CHECK(sc.rho_prime[0] == doctest::Approx(0.0));
  CHECK(sc.s[0] == doctest::Approx(1.0));

  // two identical copies split the ratio
  ImportanceScores sc2 = importance_scores(two_node_directed(2), 0.5, 0.1, 1.0);
  CHECK(sc2.rho[0] == doctest::Approx(0.5));
  CHECK(sc2.rho[1] == doctest::Approx(0.5));
  CHECK(sc2.s[0] == doctest::Approx(0.5));

  // an edge whose full-set value is positive has rho' = 1 when alone
  SubmodularHypergraph hc;
  hc.n = 2;
  hc.edges.push_back(
      Hyperedge{make_concave_card({0, 1}, {0.0, 0.6, 0.9}), 0.0, 1.0});
  ImportanceScores sc3 = importance_scores(hc, 0.5, 0.1, 1.0);
  CHECK(sc3.rho_prime[0] == doctest::Approx(1.0));

  // all-zero splitting functions give zero scores and keep probabilities
  SubmodularHypergraph hz;
  hz.n = 2;
  for (int i = 0; i < 3; ++i)
    hz.edges.push_back(Hyperedge{make_table_function({0, 1}, {0, 0, 0, 0}), 0.0, 1.0});
  ImportanceScores scz = importance_scores(hz, 0.5, 0.1, 1.0);
  for (double p : scz.p) CHECK(p == doctest::Approx(0.0));
}

TEST_CASE("score sums satisfy the analytic caps") {
  RngStream rng(51, "score-sums");
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(3));
    SubmodularHypergraph h = random_hypergraph(n, 30, rng.next_u64());
    ImportanceScores sc = importance_scores(h, 0.5, 0.1);
    double rho_sum = 0.0, rho_prime_sum = 0.0, p_sum = 0.0;
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
      rho_sum += sc.rho[e];
      rho_prime_sum += sc.rho_prime[e];
      p_sum += sc.p[e];
      CHECK(sc.s[e] == doctest::Approx(sc.rho[e] + sc.rho_prime[e]));
      CHECK(sc.p[e] == doctest::Approx(std::min(1.0, sc.m * sc.s[e])));
    }
    CHECK(rho_sum <= n * n + 1e-9);
    CHECK(rho_prime_sum <= 1.0 + 1e-9);
    CHECK(p_sum <= sc.m * (n * n + 1.0) + 1e-9);
  }
}

TEST_CASE("sampling: weights land in the perturbation interval") {
  SubmodularHypergraph h = two_node_directed(1);
  ImportanceScores sc = importance_scores(h, 1.0, 0.5, 100.0);
  REQUIRE(sc.p[0] == doctest::Approx(1.0));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SparsifierOutput out = sample_sparsifier(sc, 1.0, seed);
    REQUIRE(out.kept.size() == 1);  // p = 1 keeps surely
    CHECK(out.weights[0] <= 1.0 + 1e-12);
    CHECK(out.weights[0] >= 2.0 / 3.0 - 1e-12);
  }
  // p = 0 is never kept
  sc.p[0] = 0.0;
  SparsifierOutput none = sample_sparsifier(sc, 1.0, 7);
  CHECK(none.kept.empty());
  CHECK_THROWS_AS(sample_sparsifier(sc, 1.5, 7), std::invalid_argument);
  CHECK_THROWS_AS(sample_sparsifier(sc, 0.0, 7), std::invalid_argument);
}

TEST_CASE("deterministic replay of the sampler") {
  SubmodularHypergraph h = random_hypergraph(4, 50, 99);
  ImportanceScores sc = importance_scores(h, 0.5, 0.1);
  SparsifierOutput a = sample_sparsifier(sc, 0.5, 1234);
  SparsifierOutput b = sample_sparsifier(sc, 0.5, 1234);
  CHECK(a.kept == b.kept);
  CHECK(a.weights == b.weights);
}

TEST_CASE("expected kept-edge count approximates sum of p") {
  SubmodularHypergraph h = random_hypergraph(4, 60, 7);
  ImportanceScores sc = importance_scores(h, 0.8, 0.2, 0.5);
  double p_sum = 0.0;
  for (double p : sc.p) p_sum += p;
  double mean = 0.0;
  const int trials = 4000;
  for (int k = 0; k < trials; ++k)
    mean += static_cast<double>(sample_sparsifier(sc, 0.8, k).kept.size()) / trials;
  CHECK(mean == doctest::Approx(p_sum).epsilon(0.05));
}

TEST_CASE("perturbed sandwich: derived bound holds against the unperturbed sparsifier") {
  // Build both from the same keep decisions and interval draws.
  RngStream rng(52, "sandwich");
  for (int trial = 0; trial < 30; ++trial) {
    SubmodularHypergraph h = random_hypergraph(4, 40, rng.next_u64());
    const double eps = 0.6;
    ImportanceScores sc = importance_scores(h, eps, 0.1);
    SparsifierOutput perturbed = sample_sparsifier(sc, eps, trial);
    SubmodularHypergraph unperturbed;
    unperturbed.n = h.n;
    for (std::size_t k = 0; k < perturbed.kept.size(); ++k) {
      Hyperedge e = h.edges[perturbed.kept[k]];
      e.weight /= sc.p[perturbed.kept[k]];
      unperturbed.edges.push_back(std::move(e));
    }
    SubmodularHypergraph tilde = apply_sparsifier(h, perturbed);
    for (Subset s = 0; s < (Subset{1} << h.n); ++s) {
      const double base = cut_value(unperturbed, s);
      const double pert = cut_value(tilde, s);
      CHECK(pert <= base + 1e-12);
      CHECK(pert >= base / (1.0 + eps / 2.0) - 1e-12);
    }
  }
}

TEST_CASE("offline solve degenerate cases") {
  // all-zero losses: empty or kept sparsifier both minimize to the empty set
  SubmodularHypergraph hz;
  hz.n = 3;
  for (int i = 0; i < 4; ++i)
    hz.edges.push_back(Hyperedge{make_table_function({0, 1, 2},
                                                     std::vector<double>(8, 0.0)),
                                 0.0, 1.0});
  CHECK(offline_submod_solve(hz, 0.5, 16, 3) == 0u);

  // single loss with a unique zero at {0}: cut-minimizer is empty or {0},
  // both with zero sparsified cut; tie-break keeps the smallest mask.
  SubmodularHypergraph h1;
  h1.n = 2;
  h1.edges.push_back(Hyperedge{make_directed_cut(2, 1, 0), 0.0, 1.0});
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const Subset s = offline_submod_solve(h1, 1.0, 4, seed);
    CHECK(h1.edges[0].g(s) == doctest::Approx(0.0));
  }
}

TEST_CASE("sensitivity audit: symmetry, caps, and the s-change inequality") {
  // identical edges: per-edge bounds coincide and respect the cap
  SubmodularHypergraph hsym = two_node_directed(8);
  SensitivityReport sym = sensitivity_audit(hsym, 0.5, 0.1, 1.0);
  for (double b : sym.per_edge) CHECK(b == doctest::Approx(sym.per_edge[0]).epsilon(1e-12));
  CHECK(sym.average <= sym.cap + 1e-9);

  RngStream rng(53, "sens-audit");
  for (int trial = 0; trial < 10; ++trial) {
    SubmodularHypergraph h = random_hypergraph(4, 25, rng.next_u64());
    SensitivityReport rep = sensitivity_audit(h, 0.5, 0.1);
    CHECK(rep.average <= rep.cap + 1e-9);
    CHECK(rep.average_tight <= rep.average + 1e-12);
    for (std::size_t e = 0; e < h.edges.size(); ++e)
      CHECK(rep.s_change[e] <= rep.s_self[e] + 1e-9);  // Lemma-style l1 change cap
  }
}

TEST_CASE("clip function is M-Lipschitz") {
  RngStream rng(54, "clip");
  for (int trial = 0; trial < 10000; ++trial) {
    const double m = rng.next_uniform(0.1, 50.0);
    const double x = rng.next_uniform(0.0, 2.0);
    const double y = rng.next_uniform(0.0, 2.0);
    const double fx = std::min(1.0, m * x), fy = std::min(1.0, m * y);
    CHECK(std::abs(fx - fy) <= m * std::abs(x - y) + 1e-15);
  }
}
