#include "b2o/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace b2o {

ControllerState ControllerState::init(double a0, std::optional<double> eps_cap) {
  if (!(a0 > 0.0)) throw std::invalid_argument("controller: a0 must be positive");
  if (eps_cap && !(*eps_cap > 0.0))
    throw std::invalid_argument("controller: eps_cap must be positive");
  ControllerState s;
  s.t = 0;
  s.a = a0;
  s.h = 0.0;
  s.u = 0.0;
  s.a0 = a0;
  s.eps_cap = eps_cap;
  return s;
}

std::pair<ControllerState, double> controller_step(const ControllerState& state,
                                                   double opt_t, const PhiSpec& spec) {
  if (!(opt_t >= 0.0)) throw std::domain_error("controller_step: opt_t must be nonnegative");
  ControllerState next = state;
  next.t = state.t + 1;
  next.a = state.a + opt_t / next.t;
  next.h = state.h + 1.0 / next.t;
  next.u = next.a / next.h;
  double eps = eps_min(spec, next.u);
  if (next.eps_cap) eps = std::min(eps, *next.eps_cap);
  return {next, eps};
}

std::pair<double, double> audit_step_identity(double a_prev, double h_prev,
                                              double opt_t, int t) {
  if (t < 2) throw std::domain_error("audit_step_identity: stated for t >= 2");
  const double a_t = a_prev + opt_t / t;
  const double h_t = h_prev + 1.0 / t;
  const double u_t = a_t / h_t;
  const double u_prev = a_prev / h_prev;
  const double lhs = opt_t / t - u_t / t;
  const double rhs = h_prev * (u_t - u_prev);
  return {lhs, rhs};
}

std::pair<double, double> audit_telescope(std::span<const double> opt_seq,
                                          const PhiSpec& spec, double a0) {
  if (opt_seq.empty()) throw std::invalid_argument("audit_telescope: empty sequence");
  ControllerState state = ControllerState::init(a0);  // uncapped by construction
  double sum_lhs = 0.0;
  double eps = 0.0;
  for (double opt : opt_seq) {
    auto [next, e] = controller_step(state, opt, spec);
    state = next;
    eps = e;
    sum_lhs += opt / state.t * eps + spec(eps) / state.t;
  }
  const double bound_rhs = state.h * phi_star(spec, state.u).phi_star;
  return {sum_lhs, bound_rhs};
}

double default_a0(const PhiSpec& spec, int horizon) {
  if (!spec.is_power_log() || horizon < 1) return default_a0();
  double h = 0.0;
  for (int s = 1; s <= horizon; ++s) h += 1.0 / s;
  return std::min(1.0, std::pow(h, -1.0 / spec.q()));
}

double default_a0() { return 1e-6; }

}  // namespace b2o
