#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace b2o {

/// Approximation-sensitivity trade-off function. Either the closed power-log
/// family phi(eps) = c1 * eps^{-q} * log(e + c2/eps), or an arbitrary
/// user callable with a declared evaluation domain [eps_lo, eps_hi].
class PhiSpec {
 public:
  static PhiSpec power_log(double c1, double q, double c2);
  static PhiSpec custom(std::function<double(double)> fn,
                        double eps_lo = kDefaultEpsLo,
                        double eps_hi = kDefaultEpsHi);

  /// phi(eps). Throws std::domain_error for eps <= 0. Custom specs clamp
  /// out-of-domain arguments and count the event (see clamp_events()).
  double operator()(double eps) const;

  bool is_power_log() const { return kind_ == Kind::kPowerLog; }
  double c1() const { return c1_; }
  double q() const { return q_; }
  double c2() const { return c2_; }
  double eps_lo() const { return eps_lo_; }
  double eps_hi() const { return eps_hi_; }

  /// Number of clamped out-of-domain evaluations on this spec (custom only).
  std::uint64_t clamp_events() const { return clamps_ ? clamps_->load() : 0; }

  nlohmann::json to_json() const;
  static PhiSpec from_json(const nlohmann::json& j);

  static constexpr double kDefaultEpsLo = 1e-8;
  static constexpr double kDefaultEpsHi = 1e8;

 private:
  enum class Kind { kPowerLog, kCustom };
  PhiSpec() = default;

  Kind kind_ = Kind::kPowerLog;
  double c1_ = 1.0, q_ = 1.0, c2_ = 0.0;
  double eps_lo_ = kDefaultEpsLo, eps_hi_ = kDefaultEpsHi;
  std::function<double(double)> fn_;
  std::shared_ptr<std::atomic<std::uint64_t>> clamps_;
};

/// Witness of the concave conjugate at u: phi_star = u*eps_min + phi(eps_min).
struct ConjugatePoint {
  double u = 0.0;
  double eps_min = 0.0;
  double phi_star = 0.0;
};

/// Minimizer of eps -> u*eps + phi(eps). Closed form for power-log specs with
/// c2 = 0; otherwise coarse log-grid bracket followed by golden-section search
/// on log(eps), relative tolerance 1e-10. Smallest minimizer on ties.
double eps_min(const PhiSpec& spec, double u);

ConjugatePoint phi_star(const PhiSpec& spec, double u);

/// Explicit closed-form regret bound for power-log specs, assembled from the
/// conjugate chain with u = (a0 + opt_T) / h_T. Requires a0 <= h_T^{-1/q}.
/// Dominates h_T * phi_star(u) by construction.
double corollary_bound(const PhiSpec& spec, double opt_T, double h_T, double a0);

}  // namespace b2o
