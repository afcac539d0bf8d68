#include "b2o/phi.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace b2o {

PhiSpec PhiSpec::power_log(double c1, double q, double c2) {
  if (!(c1 > 0.0)) throw std::invalid_argument("power_log: c1 must be positive");
  if (!(q > 0.0)) throw std::invalid_argument("power_log: q must be positive");
  if (!(c2 >= 0.0)) throw std::invalid_argument("power_log: c2 must be nonnegative");
  PhiSpec s;
  s.kind_ = Kind::kPowerLog;
  s.c1_ = c1;
  s.q_ = q;
  s.c2_ = c2;
  return s;
}

PhiSpec PhiSpec::custom(std::function<double(double)> fn, double eps_lo, double eps_hi) {
  if (!(eps_lo > 0.0) || !(eps_hi > eps_lo))
    throw std::invalid_argument("custom: need 0 < eps_lo < eps_hi");
  PhiSpec s;
  s.kind_ = Kind::kCustom;
  s.fn_ = std::move(fn);
  s.eps_lo_ = eps_lo;
  s.eps_hi_ = eps_hi;
  s.clamps_ = std::make_shared<std::atomic<std::uint64_t>>(0);
  return s;
}

double PhiSpec::operator()(double eps) const {
  if (!(eps > 0.0)) throw std::domain_error("phi: eps must be positive");
  if (kind_ == Kind::kPowerLog) {
    return c1_ * std::pow(eps, -q_) * std::log(std::exp(1.0) + c2_ / eps);
  }
  double e = eps;
  if (e < eps_lo_ || e > eps_hi_) {
    e = std::min(std::max(e, eps_lo_), eps_hi_);
    clamps_->fetch_add(1, std::memory_order_relaxed);
  }
  double v = fn_(e);
  if (!(v >= 0.0)) throw std::domain_error("phi: custom callable returned a negative value");
  return v;
}

nlohmann::json PhiSpec::to_json() const {
  if (kind_ != Kind::kPowerLog)
    throw std::invalid_argument("to_json: only power_log specs serialize");
  return nlohmann::json{{"kind", "power_log"}, {"c1", c1_}, {"q", q_}, {"c2", c2_}};
}

PhiSpec PhiSpec::from_json(const nlohmann::json& j) {
  if (j.at("kind").get<std::string>() != "power_log")
    throw std::invalid_argument("from_json: unknown phi kind");
  return power_log(j.at("c1").get<double>(), j.at("q").get<double>(),
                   j.value("c2", 0.0));
}

namespace {

// Golden-section search for the minimum of f on [lo, hi] in log coordinates.
// Returns the smallest minimizer consistent with the bracket.
double golden_log_min(const std::function<double(double)>& f, double lo, double hi,
                      double rel_tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::log(lo), b = std::log(hi);
  double c = b - (b - a) * kInvPhi;
  double d = a + (b - a) * kInvPhi;
  double fc = f(std::exp(c)), fd = f(std::exp(d));
  while (b - a > rel_tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * kInvPhi;
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * kInvPhi;
      fd = f(std::exp(d));
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace

double eps_min(const PhiSpec& spec, double u) {
  if (!(u > 0.0)) throw std::domain_error("eps_min: u must be positive");
  if (spec.is_power_log() && spec.c2() == 0.0) {
    return std::pow(spec.q() * spec.c1() / u, 1.0 / (spec.q() + 1.0));
  }
  const double lo = spec.eps_lo(), hi = spec.eps_hi();
  auto objective = [&](double eps) { return u * eps + spec(eps); };

  // Coarse 64-point log grid; keep the leftmost best point for deterministic
  // tie-breaking, then refine inside the surrounding bracket.
  constexpr int kGrid = 64;
  const double llo = std::log(lo), lhi = std::log(hi);
  int best = 0;
  double best_val = objective(lo);
  for (int i = 1; i < kGrid; ++i) {
    double eps = std::exp(llo + (lhi - llo) * i / (kGrid - 1));
    double v = objective(eps);
    if (v < best_val) {
      best = i;
      best_val = v;
    }
  }
  double blo = std::exp(llo + (lhi - llo) * std::max(0, best - 1) / (kGrid - 1));
  double bhi = std::exp(llo + (lhi - llo) * std::min(kGrid - 1, best + 1) / (kGrid - 1));
  double eps = golden_log_min(objective, blo, bhi, 1e-10);
  // Endpoints can beat the interior refinement when the minimum sits on the
  // domain boundary.
  if (objective(lo) <= objective(eps)) eps = lo;
  if (objective(hi) < objective(eps)) eps = hi;
  return eps;
}

ConjugatePoint phi_star(const PhiSpec& spec, double u) {
  double e = eps_min(spec, u);
  return ConjugatePoint{u, e, u * e + spec(e)};
}

double corollary_bound(const PhiSpec& spec, double opt_T, double h_T, double a0) {
  if (!spec.is_power_log())
    throw std::invalid_argument("corollary_bound: power_log specs only");
  if (!(h_T > 0.0)) throw std::invalid_argument("corollary_bound: h_T must be positive");
  if (!(opt_T >= 0.0)) throw std::invalid_argument("corollary_bound: opt_T must be nonnegative");
  const double q = spec.q(), c1 = spec.c1(), c2 = spec.c2();
  if (!(a0 > 0.0) || a0 > std::pow(h_T, -1.0 / q) * (1.0 + 1e-12))
    throw std::invalid_argument("corollary_bound: requires 0 < a0 <= h_T^{-1/q}");
  const double head = std::pow(q, -q / (q + 1.0)) * std::pow(c1, 1.0 / (q + 1.0));
  const double body = 1.0 + std::pow(opt_T, q / (q + 1.0)) * std::pow(h_T, 1.0 / (q + 1.0));
  const double log_arg =
      std::exp(1.0) +
      c2 * std::pow((1.0 + opt_T / h_T) / (q * c1), 1.0 / (q + 1.0));
  return head * body * (q + std::log(log_arg));
}

}  // namespace b2o
