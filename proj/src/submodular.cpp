#include "b2o/submodular.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "b2o/rng.hpp"

namespace b2o {

double cut_value(const SubmodularHypergraph& h, Subset s) {
  double sum = 0.0;
  for (const Hyperedge& e : h.edges) sum += e.weight * e.g(s);
  return sum;
}

double min_cut_uv(const SplittingFunction& g, int n, int u, int v) {
  if (u < 0 || v < 0 || u >= n || v >= n)
    throw std::out_of_range("min_cut_uv: element out of range");
  if (u == v) return 0.0;  // empty constraint set {S : u in S, u notin S}
  const std::size_t k = g.support.size();
  if (k > static_cast<std::size_t>(kMaxGroundSet))
    throw std::length_error("min_cut_uv: support too large to enumerate");
  int u_bit = -1, v_bit = -1;
  for (std::size_t i = 0; i < k; ++i) {
    if (g.support[i] == u) u_bit = static_cast<int>(i);
    if (g.support[i] == v) v_bit = static_cast<int>(i);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < (std::size_t{1} << k); ++a) {
    if (u_bit >= 0 && !((a >> u_bit) & 1)) continue;
    if (v_bit >= 0 && ((a >> v_bit) & 1)) continue;
    best = std::min(best, g.table[a]);
  }
  return best;
}

EdgeCutTable edge_cut_table(const SplittingFunction& g, int n) {
  EdgeCutTable t;
  t.uv.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) t.uv[static_cast<std::size_t>(u) * n + v] = min_cut_uv(g, n, u, v);
  t.full = g.full_value();
  return t;
}

std::pair<Subset, double> brute_min(const std::function<double(Subset)>& f, int n) {
  if (n < 0 || n > kMaxGroundSet)
    throw std::length_error("brute_min: ground set too large to enumerate");
  Subset best = 0;
  double best_val = f(0);
  const Subset end = Subset{1} << n;
  for (Subset s = 1; s < end; ++s) {
    double v = f(s);
    if (v < best_val) {
      best = s;
      best_val = v;
    }
  }
  return {best, best_val};
}

bool is_submodular(const std::function<double(Subset)>& f, int n,
                   std::uint64_t sample_seed, int samples) {
  if (n < 0 || n > kMaxGroundSet)
    throw std::length_error("is_submodular: ground set too large");
  const Subset end = Subset{1} << n;
  constexpr double kTol = 1e-9;
  if (n <= 12) {
    std::vector<double> tab(end);
    for (Subset s = 0; s < end; ++s) tab[s] = f(s);
    for (Subset s1 = 0; s1 < end; ++s1)
      for (Subset s2 = s1; s2 < end; ++s2)
        if (tab[s1] + tab[s2] < tab[s1 | s2] + tab[s1 & s2] - kTol) return false;
    return true;
  }
  RngStream rng(sample_seed, "is_submodular");
  for (int i = 0; i < samples; ++i) {
    Subset s1 = static_cast<Subset>(rng.next_below(end));
    Subset s2 = static_cast<Subset>(rng.next_below(end));
    if (f(s1) + f(s2) < f(s1 | s2) + f(s1 & s2) - kTol) return false;
  }
  return true;  // not falsified
}

SplittingFunction make_table_function(std::vector<int> support, std::vector<double> table) {
  if (table.size() != (std::size_t{1} << support.size()))
    throw std::invalid_argument("splitting function: table size must be 2^|support|");
  if (!std::is_sorted(support.begin(), support.end()) ||
      std::adjacent_find(support.begin(), support.end()) != support.end())
    throw std::invalid_argument("splitting function: support must be sorted and unique");
  for (double v : table)
    if (!(v >= 0.0)) throw std::invalid_argument("splitting function: negative value");
  SplittingFunction g;
  g.support = std::move(support);
  g.table = std::move(table);
  return g;
}

SplittingFunction make_directed_cut(int n, int u, int v) {
  if (u == v) throw std::invalid_argument("directed_cut: u and v must differ");
  if (u < 0 || v < 0 || u >= n || v >= n)
    throw std::out_of_range("directed_cut: element out of range");
  std::vector<int> support{std::min(u, v), std::max(u, v)};
  const int u_bit = (u < v) ? 0 : 1;
  const int v_bit = 1 - u_bit;
  std::vector<double> table(4, 0.0);
  for (std::size_t a = 0; a < 4; ++a)
    if (((a >> u_bit) & 1) && !((a >> v_bit) & 1)) table[a] = 1.0;
  return make_table_function(std::move(support), std::move(table));
}

SplittingFunction make_concave_card(const std::vector<int>& support,
                                    const std::vector<double>& weights) {
  if (weights.size() != support.size() + 1)
    throw std::invalid_argument("concave_card: need |support|+1 weights");
  for (std::size_t k = 0; k + 2 < weights.size(); ++k)
    if (weights[k + 1] - weights[k] < weights[k + 2] - weights[k + 1] - 1e-12)
      throw std::invalid_argument("concave_card: weights must be concave in cardinality");
  std::vector<double> table(std::size_t{1} << support.size());
  for (std::size_t a = 0; a < table.size(); ++a)
    table[a] = weights[static_cast<std::size_t>(std::popcount(a))];
  return make_table_function(support, std::move(table));
}

namespace {

// Shift the table so its minimum is zero, recording the offset. For cut-like
// functions the minimum sits at the empty set, so this matches the g(empty)=0
// convention; subtracting g(empty) outright could leave negative values for
// functions that decrease away from the empty set.
Hyperedge normalize_edge(SplittingFunction g, double weight) {
  Hyperedge e;
  e.offset = *std::min_element(g.table.begin(), g.table.end());
  if (e.offset != 0.0)
    for (double& v : g.table) v -= e.offset;
  e.g = std::move(g);
  e.weight = weight;
  return e;
}

}  // namespace

SubmodularHypergraph hypergraph_from_json(const nlohmann::json& j) {
  SubmodularHypergraph h;
  h.n = j.at("n").get<int>();
  if (h.n < 1 || h.n > kMaxGroundSet)
    throw std::invalid_argument("hypergraph: n must be in [1, 20]");
  std::vector<int> full(h.n);
  for (int i = 0; i < h.n; ++i) full[i] = i;
  for (const auto& je : j.at("edges")) {
    const double weight = je.value("weight", 1.0);
    std::vector<int> support = je.contains("support")
                                   ? je.at("support").get<std::vector<int>>()
                                   : full;
    for (int el : support)
      if (el < 0 || el >= h.n) throw std::out_of_range("hypergraph: support element out of range");
    SplittingFunction g;
    if (je.contains("table")) {
      g = make_table_function(support, je.at("table").get<std::vector<double>>());
    } else {
      const std::string family = je.at("family").get<std::string>();
      if (family == "directed_cut") {
        g = make_directed_cut(h.n, je.at("u").get<int>(), je.at("v").get<int>());
      } else if (family == "concave_card") {
        g = make_concave_card(support, je.at("weights").get<std::vector<double>>());
      } else if (family == "constant") {
        g = make_table_function(support,
                                std::vector<double>(std::size_t{1} << support.size(),
                                                    je.at("value").get<double>()));
      } else {
        throw std::invalid_argument("hypergraph: unknown edge family " + family);
      }
    }
    h.edges.push_back(normalize_edge(std::move(g), weight));
  }
  return h;
}

nlohmann::json hypergraph_to_json(const SubmodularHypergraph& h) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Hyperedge& e : h.edges) {
    nlohmann::json je{{"support", e.g.support}, {"table", e.g.table}};
    if (e.weight != 1.0) je["weight"] = e.weight;
    if (e.offset != 0.0) je["offset"] = e.offset;
    edges.push_back(std::move(je));
  }
  return nlohmann::json{{"n", h.n}, {"edges", std::move(edges)}};
}

std::string subset_to_string(Subset s, int n) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < n; ++i)
    if ((s >> i) & 1) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
  return out + "}";
}

}  // namespace b2o
