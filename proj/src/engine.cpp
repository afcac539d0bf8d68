#include "b2o/engine.hpp"

#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

namespace b2o {

std::vector<int> random_order_stream(int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("random_order_stream: empty multiset");
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  RngStream rng(seed, "order");
  rng.shuffle(order);
  return order;
}

namespace {

void append_g17(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const RegretTrace& trace) {
  std::string out = "t,loss,opt_t,eps_t,u_t,cum_loss,cum_regret,changed\n";
  double cum_loss = 0.0;
  for (const TraceRow& row : trace.rows) {
    cum_loss += row.loss;
    out += std::to_string(row.t);
    out += ',';
    append_g17(out, row.loss);
    out += ',';
    append_g17(out, row.opt);
    out += ',';
    append_g17(out, row.eps);
    out += ',';
    append_g17(out, row.u);
    out += ',';
    append_g17(out, cum_loss);
    out += ',';
    append_g17(out, cum_loss - row.opt);
    out += ',';
    out += row.changed ? '1' : '0';
    out += '\n';
  }
  os << out;
}

nlohmann::json trace_summary(const RegretTrace& trace, const std::string& digest) {
  return nlohmann::json{{"seed", trace.seed},
                        {"T", trace.rows.size()},
                        {"regret", trace.regret},
                        {"opt_T", trace.opt_T},
                        {"inconsistency", trace.inconsistency},
                        {"model", trace.model},
                        {"wall_seconds", trace.wall_seconds},
                        {"config_digest", digest}};
}

std::string config_digest(const nlohmann::json& config) {
  const std::string dump = config.dump();
  const std::uint64_t h = fnv1a64(dump);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace b2o
