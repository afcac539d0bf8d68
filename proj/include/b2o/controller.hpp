#pragma once

#include <optional>
#include <span>
#include <utility>

#include "b2o/phi.hpp"

namespace b2o {

/// Accumulator state of the adaptive epsilon rule:
///   A_t = a0 + sum_{s<=t} opt_s / s,  H_t = sum_{s<=t} 1/s,  u_t = A_t / H_t.
struct ControllerState {
  int t = 0;
  double a = 0.0;
  double h = 0.0;
  double u = 0.0;
  double a0 = 0.0;
  std::optional<double> eps_cap;

  static ControllerState init(double a0, std::optional<double> eps_cap = std::nullopt);
};

/// Advance the rule by one round with the revealed prefix optimum opt_t.
/// Returns the post state (at round t) and the chosen eps_t, capped when the
/// state carries a cap.
std::pair<ControllerState, double> controller_step(const ControllerState& state,
                                                   double opt_t, const PhiSpec& spec);

/// Both sides of the per-step identity
///   opt_t/t - u_t/t = H_{t-1} (u_t - u_{t-1}),   t >= 2.
std::pair<double, double> audit_step_identity(double a_prev, double h_prev,
                                              double opt_t, int t);

/// Replay the uncapped rule on an opt sequence; returns
///   (sum_t opt_t/t * eps_t + phi(eps_t)/t,  H_T * phi_star(u_T)).
std::pair<double, double> audit_telescope(std::span<const double> opt_seq,
                                          const PhiSpec& spec, double a0);

/// Default a0: min(1, H_T^{-1/q}) when the horizon and a power-log spec are
/// known up front, 1e-6 otherwise.
double default_a0(const PhiSpec& spec, int horizon);
double default_a0();

}  // namespace b2o
