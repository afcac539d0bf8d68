#include "b2o/sparsify.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "b2o/rng.hpp"

namespace b2o {

namespace {

double clip_scale(double eps, double delta, int n, double c_m_const) {
  if (!(eps > 0.0)) throw std::invalid_argument("importance_scores: eps must be positive");
  if (!(delta > 0.0) || !(delta <= 1.0))
    throw std::invalid_argument("importance_scores: delta must be in (0,1]");
  return c_m_const * std::pow(eps, -2.0) * (n + std::log(1.0 / delta));
}

// rho/rho'/s/p for the edge set described by `tables`, given the directed-cut
// denominators of the full hypergraph minus an optional deleted edge.
ImportanceScores scores_against(const std::vector<EdgeCutTable>& tables, int n,
                                const std::vector<double>& denom_uv, double denom_full,
                                double m, std::ptrdiff_t skip = -1) {
  ImportanceScores sc;
  sc.m = m;
  const std::size_t num = tables.size();
  sc.rho.assign(num, 0.0);
  sc.rho_prime.assign(num, 0.0);
  sc.s.assign(num, 0.0);
  sc.p.assign(num, 0.0);
  for (std::size_t e = 0; e < num; ++e) {
    if (static_cast<std::ptrdiff_t>(e) == skip) continue;
    double rho = 0.0;
    const std::size_t pairs = static_cast<std::size_t>(n) * n;
    for (std::size_t k = 0; k < pairs; ++k) {
      const double d = denom_uv[k];
      if (d > 0.0) rho += tables[e].uv[k] / d;
    }
    sc.rho[e] = rho;
    sc.rho_prime[e] = denom_full > 0.0 ? tables[e].full / denom_full : 0.0;
    sc.s[e] = sc.rho[e] + sc.rho_prime[e];
    sc.p[e] = std::min(1.0, m * sc.s[e]);
    sc.sum_s += sc.s[e];
  }
  return sc;
}

}  // namespace

ImportanceScores importance_scores_from_tables(const std::vector<EdgeCutTable>& tables,
                                               int n, double eps, double delta,
                                               double c_m_const) {
  const double m = clip_scale(eps, delta, n, c_m_const);
  std::vector<double> denom_uv(static_cast<std::size_t>(n) * n, 0.0);
  double denom_full = 0.0;
  for (const EdgeCutTable& t : tables) {
    for (std::size_t k = 0; k < denom_uv.size(); ++k) denom_uv[k] += t.uv[k];
    denom_full += t.full;
  }
  return scores_against(tables, n, denom_uv, denom_full, m);
}

ImportanceScores importance_scores(const SubmodularHypergraph& h, double eps,
                                   double delta, double c_m_const) {
  if (h.edges.empty()) throw std::invalid_argument("importance_scores: empty hypergraph");
  std::vector<EdgeCutTable> tables;
  tables.reserve(h.edges.size());
  for (const Hyperedge& e : h.edges) tables.push_back(edge_cut_table(e.g, h.n));
  return importance_scores_from_tables(tables, h.n, eps, delta, c_m_const);
}

SparsifierOutput sample_sparsifier(const ImportanceScores& scores, double eps,
                                   RngStream& rng) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("sample_sparsifier: eps must be in (0, 1]");
  SparsifierOutput out;
  out.eps = eps;
  out.m = scores.m;
  for (std::size_t e = 0; e < scores.p.size(); ++e) {
    if (!rng.bernoulli(scores.p[e])) continue;
    const double p = scores.p[e];
    const double perturbed = rng.next_uniform(p, (1.0 + eps / 2.0) * p);
    out.kept.push_back(e);
    out.weights.push_back(1.0 / perturbed);
  }
  return out;
}

SparsifierOutput sample_sparsifier(const ImportanceScores& scores, double eps,
                                   std::uint64_t seed) {
  RngStream rng(seed, "sparsifier");
  SparsifierOutput out = sample_sparsifier(scores, eps, rng);
  out.seed = seed;
  return out;
}

SubmodularHypergraph apply_sparsifier(const SubmodularHypergraph& h,
                                      const SparsifierOutput& out) {
  SubmodularHypergraph hp;
  hp.n = h.n;
  for (std::size_t k = 0; k < out.kept.size(); ++k) {
    Hyperedge e = h.edges[out.kept[k]];
    e.weight *= out.weights[k];
    hp.edges.push_back(std::move(e));
  }
  return hp;
}

Subset offline_submod_solve(const SubmodularHypergraph& prefix, double eps,
                            int horizon, std::uint64_t seed, double c_m_const) {
  if (horizon < 1) throw std::invalid_argument("offline_submod_solve: horizon must be >= 1");
  ImportanceScores scores = importance_scores(prefix, eps, 1.0 / horizon, c_m_const);
  SparsifierOutput out = sample_sparsifier(scores, eps, seed);
  SubmodularHypergraph hp = apply_sparsifier(prefix, out);
  return brute_min([&](Subset s) { return cut_value(hp, s); }, prefix.n).first;
}

SensitivityReport sensitivity_audit(const SubmodularHypergraph& h, double eps,
                                    double delta, double c_m_const) {
  const std::size_t num = h.edges.size();
  if (num < 2) throw std::invalid_argument("sensitivity_audit: need |E| >= 2");
  const int n = h.n;
  std::vector<EdgeCutTable> tables;
  tables.reserve(num);
  for (const Hyperedge& e : h.edges) tables.push_back(edge_cut_table(e.g, n));

  const double m = clip_scale(eps, delta, n, c_m_const);
  std::vector<double> denom_uv(static_cast<std::size_t>(n) * n, 0.0);
  double denom_full = 0.0;
  for (const EdgeCutTable& t : tables) {
    for (std::size_t k = 0; k < denom_uv.size(); ++k) denom_uv[k] += t.uv[k];
    denom_full += t.full;
  }
  const ImportanceScores base = scores_against(tables, n, denom_uv, denom_full, m);

  SensitivityReport rep;
  rep.m = m;
  rep.per_edge.assign(num, 0.0);
  rep.per_edge_tight.assign(num, 0.0);
  rep.s_change.assign(num, 0.0);
  rep.s_self = base.s;
  std::vector<double> denom_minus(denom_uv.size());
  for (std::size_t e = 0; e < num; ++e) {
    for (std::size_t k = 0; k < denom_uv.size(); ++k)
      denom_minus[k] = denom_uv[k] - tables[e].uv[k];
    const double full_minus = denom_full - tables[e].full;
    const ImportanceScores del = scores_against(tables, n, denom_minus, full_minus, m,
                                                static_cast<std::ptrdiff_t>(e));
    double p_change = base.p[e];  // p_e(H - e) identified with 0
    double s_change = 0.0;
    for (std::size_t f = 0; f < num; ++f) {
      if (f == e) continue;
      p_change += std::abs(base.p[f] - del.p[f]);
      s_change += std::abs(base.s[f] - del.s[f]);
    }
    rep.per_edge[e] = 4.0 / eps * p_change;
    rep.per_edge_tight[e] = (0.5 + (2.0 + eps) / eps) * p_change;
    rep.s_change[e] = s_change;
    rep.average += rep.per_edge[e] / static_cast<double>(num);
    rep.average_tight += rep.per_edge_tight[e] / static_cast<double>(num);
  }
  rep.cap = 8.0 * m * (static_cast<double>(n) * n + 1.0) / (eps * static_cast<double>(num));
  return rep;
}

nlohmann::json sparsifier_to_json(const SparsifierOutput& out) {
  return nlohmann::json{{"kept", out.kept},
                        {"weights", out.weights},
                        {"eps", out.eps},
                        {"M", out.m},
                        {"seed", out.seed}};
}

}  // namespace b2o
