#include "b2o/instances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace b2o {

namespace {

constexpr int kMaxTableGroundSet = 16;  // 2^n value tables per distinct loss

}  // namespace

PhiSpec SubmodInstance::registered_phi(int horizon) const {
  const double nn = static_cast<double>(n);
  const double c1 = c_phi * (nn * nn * nn + nn * nn * std::log(std::max(2, horizon)));
  return PhiSpec::power_log(c1, 3.0, 0.0);
}

SubmodInstance SubmodInstance::from_losses(int n, std::vector<SplittingFunction> losses,
                                           bool validate) {
  if (n < 1 || n > kMaxTableGroundSet)
    throw std::invalid_argument("submod instance: n must be in [1, 16]");
  SubmodInstance inst;
  inst.n = n;
  std::map<std::vector<double>, int> seen;  // dedupe identical value tables
  for (SplittingFunction& g : losses) {
    // Expand to full support V so each round registers the hyperedge e_t = V.
    std::vector<double> table(std::size_t{1} << n);
    for (std::size_t s = 0; s < table.size(); ++s)
      table[s] = g(static_cast<Subset>(s));
    auto [it, inserted] = seen.try_emplace(table, static_cast<int>(inst.protos.size()));
    if (inserted) {
      SubmodProto proto;
      std::vector<int> support(n);
      for (int i = 0; i < n; ++i) support[i] = i;
      proto.g = make_table_function(std::move(support), std::move(table));
      if (validate) {
        for (double v : proto.g.table)
          if (v < 0.0 || v > 1.0 + 1e-12)
            throw std::invalid_argument("submod instance: loss outside [0,1]");
        if (n <= 12 && !is_submodular([&](Subset s) { return proto.g.table[s]; }, n))
          throw std::invalid_argument("submod instance: loss is not submodular");
      }
      proto.cuts = edge_cut_table(proto.g, n);
      inst.protos.push_back(std::move(proto));
    }
    inst.item_proto.push_back(it->second);
  }
  return inst;
}

SubmodInstance SubmodInstance::from_hypergraph(const SubmodularHypergraph& h,
                                               bool validate) {
  std::vector<SplittingFunction> losses;
  losses.reserve(h.edges.size());
  for (const Hyperedge& e : h.edges) {
    std::vector<double> table(std::size_t{1} << h.n);
    for (std::size_t s = 0; s < table.size(); ++s)
      table[s] = e.weight * e.g(static_cast<Subset>(s)) + e.offset;
    std::vector<int> support(h.n);
    for (int i = 0; i < h.n; ++i) support[i] = i;
    losses.push_back(make_table_function(std::move(support), std::move(table)));
  }
  return from_losses(h.n, std::move(losses), validate);
}

SubmodPrefix::SubmodPrefix(const SubmodInstance& inst)
    : inst_(&inst),
      cum_(std::size_t{1} << inst.n, 0.0),
      denom_uv_(static_cast<std::size_t>(inst.n) * inst.n, 0.0) {}

void SubmodPrefix::push(int item) {
  const SubmodProto& proto = inst_->protos[inst_->item_proto[item]];
  for (std::size_t s = 0; s < cum_.size(); ++s) cum_[s] += proto.g.table[s];
  for (std::size_t k = 0; k < denom_uv_.size(); ++k) denom_uv_[k] += proto.cuts.uv[k];
  denom_full_ += proto.cuts.full;
  prefix_items_.push_back(item);
}

double SubmodPrefix::opt() const {
  return *std::min_element(cum_.begin(), cum_.end());
}

Subset SubmodPrefix::opt_arg() const {
  return static_cast<Subset>(
      std::min_element(cum_.begin(), cum_.end()) - cum_.begin());
}

ImportanceScores SubmodPrefix::proto_scores(double eps) const {
  const int n = inst_->n;
  const int horizon = inst_->size();
  ImportanceScores sc;
  sc.m = inst_->c_m_const * std::pow(eps, -2.0) *
         (n + std::log(static_cast<double>(std::max(2, horizon))));
  const std::size_t np = inst_->protos.size();
  sc.rho.assign(np, 0.0);
  sc.rho_prime.assign(np, 0.0);
  sc.s.assign(np, 0.0);
  sc.p.assign(np, 0.0);
  for (std::size_t k = 0; k < np; ++k) {
    const SubmodProto& proto = inst_->protos[k];
    double rho = 0.0;
    for (std::size_t uv = 0; uv < denom_uv_.size(); ++uv)
      if (denom_uv_[uv] > 0.0) rho += proto.cuts.uv[uv] / denom_uv_[uv];
    sc.rho[k] = rho;
    sc.rho_prime[k] = denom_full_ > 0.0 ? proto.cuts.full / denom_full_ : 0.0;
    sc.s[k] = sc.rho[k] + sc.rho_prime[k];
    sc.p[k] = std::min(1.0, sc.m * sc.s[k]);
    sc.sum_s += sc.s[k];
  }
  return sc;
}

Subset SubmodPrefix::solve(double eps, RngStream& rng) const {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("submod solve: eps must be in (0, 1]");
  const ImportanceScores sc = proto_scores(eps);
  std::vector<double> proto_weight(inst_->protos.size(), 0.0);
  for (int item : prefix_items_) {
    const int k = inst_->item_proto[item];
    if (!rng.bernoulli(sc.p[k])) continue;
    const double perturbed = rng.next_uniform(sc.p[k], (1.0 + eps / 2.0) * sc.p[k]);
    proto_weight[k] += 1.0 / perturbed;
  }
  std::vector<double> cut(cum_.size(), 0.0);
  for (std::size_t k = 0; k < proto_weight.size(); ++k) {
    if (proto_weight[k] == 0.0) continue;
    const std::vector<double>& table = inst_->protos[k].g.table;
    for (std::size_t s = 0; s < cut.size(); ++s) cut[s] += proto_weight[k] * table[s];
  }
  return static_cast<Subset>(std::min_element(cut.begin(), cut.end()) - cut.begin());
}

// ---------------------------------------------------------------------------

PhiSpec L1Instance::registered_phi(int horizon) const {
  const double d = static_cast<double>(dim());
  const double dt = d * std::max(2, horizon);
  return PhiSpec::power_log(c_phi * d * std::log(dt), 3.0, dt);
}

L1Prefix::L1Prefix(const L1Instance& inst) : inst_(&inst) {}

L1Prefix::Decision L1Prefix::initial_decision() const {
  Decision theta(inst_->dim());
  for (int k = 0; k < inst_->dim(); ++k)
    theta[k] = std::min(std::max(0.0, inst_->box_lo[k]), inst_->box_hi[k]);
  return theta;
}

double L1Prefix::loss(const Decision& theta, int item) const {
  double dot = 0.0;
  for (int k = 0; k < inst_->dim(); ++k) dot += inst_->a(item, k) * theta[k];
  return std::abs(dot - inst_->b[item]);
}

void L1Prefix::push(int item) { rows_.push_back(item); }

Eigen::MatrixXd L1Prefix::prefix_matrix() const {
  Eigen::MatrixXd m(rows_.size(), inst_->dim());
  for (std::size_t i = 0; i < rows_.size(); ++i) m.row(i) = inst_->a.row(rows_[i]);
  return m;
}

Eigen::VectorXd L1Prefix::prefix_rhs() const {
  Eigen::VectorXd v(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) v[i] = inst_->b[rows_[i]];
  return v;
}

double L1Prefix::opt() const {
  return l1_exact_opt(prefix_matrix(), prefix_rhs(), inst_->box_lo, inst_->box_hi)
      .objective;
}

L1Prefix::Decision L1Prefix::solve(double eps, RngStream& rng) const {
  Eigen::VectorXd theta = offline_l1_oracle(prefix_matrix(), prefix_rhs(), eps,
                                            inst_->size(), rng, inst_->c_m_const);
  Decision out(inst_->dim());
  for (int k = 0; k < inst_->dim(); ++k)
    out[k] = std::min(std::max(theta[k], inst_->box_lo[k]), inst_->box_hi[k]);
  return out;
}

// ---------------------------------------------------------------------------

SyntheticPrefix::SyntheticPrefix(const SyntheticInstance& inst)
    : inst_(&inst), cum_(inst.num_decisions, 0.0) {}

void SyntheticPrefix::push(int item) {
  for (int k = 0; k < inst_->num_decisions; ++k) cum_[k] += inst_->losses[item][k];
  ++count_;
}

double SyntheticPrefix::opt() const {
  return *std::min_element(cum_.begin(), cum_.end());
}

int SyntheticPrefix::solve(double eps, RngStream& rng) const {
  const double flip =
      std::min(1.0, inst_->phi(std::max(eps, 1e-300)) / (2.0 * std::max(1, count_)));
  if (rng.bernoulli(flip))
    return static_cast<int>(rng.next_below(inst_->num_decisions));
  return static_cast<int>(std::min_element(cum_.begin(), cum_.end()) - cum_.begin());
}

// ---------------------------------------------------------------------------

SubmodularHypergraph random_hypergraph(int n, int num_edges, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_hypergraph: need n >= 2");
  RngStream rng(seed, "random-hypergraph");
  SubmodularHypergraph h;
  h.n = n;
  nlohmann::json edges = nlohmann::json::array();
  for (int e = 0; e < num_edges; ++e) {
    if (rng.bernoulli(0.6)) {
      const int u = static_cast<int>(rng.next_below(n));
      int v = static_cast<int>(rng.next_below(n - 1));
      if (v >= u) ++v;
      edges.push_back({{"family", "directed_cut"}, {"u", u}, {"v", v}});
    } else {
      // Concave cardinality profile on a random support of size 2 or 3.
      const int size = 2 + static_cast<int>(rng.next_below(2));
      std::vector<int> pool(n);
      for (int i = 0; i < n; ++i) pool[i] = i;
      rng.shuffle(pool);
      std::vector<int> support(pool.begin(), pool.begin() + size);
      std::sort(support.begin(), support.end());
      std::vector<double> weights(size + 1, 0.0);
      double gain = 0.3 + 0.7 * rng.next_double();
      for (int k = 1; k <= size; ++k) {
        weights[k] = weights[k - 1] + gain;
        gain *= rng.next_double();  // nonincreasing marginal gains
      }
      const double scale = weights[size] > 0.0 ? 1.0 / weights[size] : 1.0;
      for (double& w : weights) w *= scale;
      edges.push_back(
          {{"family", "concave_card"}, {"support", support}, {"weights", weights}});
    }
  }
  return hypergraph_from_json(nlohmann::json{{"n", n}, {"edges", edges}});
}

std::vector<int> majority_counts(int n, int horizon, int planted_opt) {
  const int m = horizon / n;
  std::vector<int> k(n, 0);
  int rest = planted_opt;
  for (int i = 0; i < n && rest > 0; ++i) {
    k[i] = std::min(rest, (m - 1) / 2);
    rest -= k[i];
  }
  if (rest > 0)
    throw std::invalid_argument("majority_counts: planted optimum too large for horizon");
  return k;
}

SubmodInstance majority_instance(int n, int horizon, const std::vector<int>& k) {
  if (static_cast<int>(k.size()) != n)
    throw std::invalid_argument("majority_instance: need one count per element");
  const int m = horizon / n;
  std::vector<SplittingFunction> losses;
  losses.reserve(horizon);
  for (int i = 0; i < n; ++i) {
    if (!(2 * k[i] < m))
      throw std::invalid_argument("majority_instance: counts must satisfy 2k < m");
    SplittingFunction out_pen = make_table_function({i}, {1.0, 0.0});
    SplittingFunction in_pen = make_table_function({i}, {0.0, 1.0});
    for (int c = 0; c < k[i]; ++c) losses.push_back(out_pen);
    for (int c = 0; c < m - k[i]; ++c) losses.push_back(in_pen);
  }
  SplittingFunction zero = make_table_function({}, {0.0});
  while (static_cast<int>(losses.size()) < horizon) losses.push_back(zero);
  return SubmodInstance::from_losses(n, std::move(losses));
}

L1Instance random_l1_instance(int horizon, int d, double noise, std::uint64_t seed) {
  RngStream rng(seed, "l1-instance");
  L1Instance inst;
  inst.a.resize(horizon, d);
  inst.b.resize(horizon);
  inst.box_lo = Eigen::VectorXd::Constant(d, -1.0);
  inst.box_hi = Eigen::VectorXd::Constant(d, 1.0);
  Eigen::VectorXd theta0(d);
  for (int k = 0; k < d; ++k) theta0[k] = rng.next_uniform(-0.8, 0.8);
  auto gauss = [&rng]() {
    // Box-Muller from the deterministic stream.
    const double u1 = std::max(rng.next_double(), 1e-300);
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  for (int i = 0; i < horizon; ++i) {
    double row_abs = 0.0;
    for (int k = 0; k < d; ++k) {
      double v = gauss();
      if (v == 0.0) v = 0.1;  // keep rows nonzero
      inst.a(i, k) = v;
      row_abs += std::abs(v);
    }
    double b = inst.a.row(i).dot(theta0) + noise * gauss();
    // Worst case of |<a, theta> - b| over the box is |b| + sum_k |a_k|.
    const double cap = row_abs + std::abs(b);
    inst.a.row(i) /= cap;
    inst.b[i] = b / cap;
  }
  return inst;
}

SyntheticInstance random_synthetic_instance(int num_decisions, int horizon,
                                            double bias, std::uint64_t seed,
                                            const PhiSpec& phi) {
  RngStream rng(seed, "synthetic-instance");
  SyntheticInstance inst;
  inst.num_decisions = num_decisions;
  inst.phi = phi;
  inst.oracle_salt = seed;
  inst.losses.resize(horizon);
  const int star = static_cast<int>(rng.next_below(num_decisions));
  for (int i = 0; i < horizon; ++i) {
    inst.losses[i].resize(num_decisions);
    for (int k = 0; k < num_decisions; ++k) {
      double v = rng.next_double();
      if (k == star) v *= std::max(0.0, 1.0 - bias);
      inst.losses[i][k] = v;
    }
  }
  return inst;
}

SubmodInstance submod_instance_from_json(const nlohmann::json& j, bool validate) {
  return SubmodInstance::from_hypergraph(hypergraph_from_json(j), validate);
}

}  // namespace b2o
