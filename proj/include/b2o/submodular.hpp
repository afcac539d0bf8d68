#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace b2o {

class RngStream;

/// Subset of the ground set as a bitmask. Enumeration-backed paths require
/// n <= kMaxGroundSet.
using Subset = std::uint32_t;
inline constexpr int kMaxGroundSet = 20;

/// Nonnegative submodular splitting function stored as a value table over
/// subsets of its support (global element ids, sorted).
struct SplittingFunction {
  std::vector<int> support;
  std::vector<double> table;  // size 1 << support.size()

  double operator()(Subset global_mask) const {
    std::size_t local = 0;
    for (std::size_t k = 0; k < support.size(); ++k)
      local |= static_cast<std::size_t>((global_mask >> support[k]) & 1u) << k;
    return table[local];
  }
  double full_value() const { return table.back(); }
};

struct Hyperedge {
  SplittingFunction g;  // normalized so that g(empty) = 0
  double offset = 0.0;  // g(empty) recorded at ingestion
  double weight = 1.0;  // per-edge scale
};

struct SubmodularHypergraph {
  int n = 0;
  std::vector<Hyperedge> edges;
};

/// cut_H(S) = sum_e weight_e * g_e(S & e).
double cut_value(const SubmodularHypergraph& h, Subset s);

/// g^e_{u->v} = min over S with u in S, v notin S of g(S & e), by enumeration
/// of the support subsets. Convention: returns 0 when u == v (empty
/// constraint set).
double min_cut_uv(const SplittingFunction& g, int n, int u, int v);

/// All n*n directed min-cut values of one splitting function, row-major
/// (u*n + v), plus g(e) itself.
struct EdgeCutTable {
  std::vector<double> uv;  // size n*n
  double full = 0.0;
};
EdgeCutTable edge_cut_table(const SplittingFunction& g, int n);

/// Exact minimizer over all 2^n subsets; ties broken by smallest bitmask.
/// Throws std::length_error for n > kMaxGroundSet.
std::pair<Subset, double> brute_min(const std::function<double(Subset)>& f, int n);

/// Lattice-inequality check. Exhaustive over all subset pairs for
/// n <= 12; for larger n samples `samples` random pairs (default 1e5) and
/// reports "not falsified".
bool is_submodular(const std::function<double(Subset)>& f, int n,
                   std::uint64_t sample_seed = 0, int samples = 100000);

/// Parse a hypergraph instance from JSON: {"n": ..., "edges": [...]} where an
/// edge carries either an explicit value table over its support or a named
/// parametric family (directed_cut, concave_card, constant). g(empty) is
/// normalized to zero with the offset recorded on the edge.
SubmodularHypergraph hypergraph_from_json(const nlohmann::json& j);
nlohmann::json hypergraph_to_json(const SubmodularHypergraph& h);

/// Helpers used by instance generators.
SplittingFunction make_directed_cut(int n, int u, int v);
SplittingFunction make_concave_card(const std::vector<int>& support,
                                    const std::vector<double>& weights);
SplittingFunction make_table_function(std::vector<int> support,
                                      std::vector<double> table);

std::string subset_to_string(Subset s, int n);

}  // namespace b2o
