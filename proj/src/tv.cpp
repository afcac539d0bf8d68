#include "b2o/tv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace b2o {

void check_distribution(std::span<const double> p) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw std::invalid_argument("distribution: negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("distribution: entries must sum to 1");
}

double tv_discrete(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_discrete: size mismatch");
  check_distribution(p);
  check_distribution(q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

std::pair<double, double> tv_uniform_intervals(double b, double bp, double eps) {
  if (!(b > 0.0) || !(bp > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("tv_uniform_intervals: inputs must be positive");
  const double lo = std::max(b, bp);
  const double hi = std::min((1.0 + eps) * b, (1.0 + eps) * bp);
  const double overlap = std::max(0.0, hi - lo);
  // On the overlap the smaller density is 1 / (eps * max(b, bp)).
  const double exact = 1.0 - overlap / (eps * std::max(b, bp));
  const double bound = std::min(1.0, (1.0 + eps) / eps * std::abs(1.0 - bp / b));
  return {exact, bound};
}

double tv_product_bound(std::span<const double> tvs) {
  double sum = 0.0;
  for (double x : tvs) {
    if (!(x >= 0.0) || !(x <= 1.0))
      throw std::invalid_argument("tv_product_bound: entries must lie in [0,1]");
    sum += x;
  }
  return std::min(1.0, sum);
}

double tv_conditional_bound(double tv_marginal, std::span<const double> diag_masses,
                            std::span<const double> tv_conditionals) {
  if (diag_masses.size() != tv_conditionals.size())
    throw std::invalid_argument("tv_conditional_bound: misaligned sequences");
  if (!(tv_marginal >= 0.0) || !(tv_marginal <= 1.0))
    throw std::invalid_argument("tv_conditional_bound: tv_marginal outside [0,1]");
  double sum = tv_marginal;
  for (std::size_t i = 0; i < diag_masses.size(); ++i) {
    if (!(diag_masses[i] >= 0.0) || !(tv_conditionals[i] >= 0.0) ||
        !(tv_conditionals[i] <= 1.0))
      throw std::invalid_argument("tv_conditional_bound: entries outside [0,1]");
    sum += diag_masses[i] * tv_conditionals[i];
  }
  return std::min(1.0, sum);
}

std::vector<double> max_overlap_coupling(std::span<const double> p,
                                         std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("coupling: size mismatch");
  check_distribution(p);
  check_distribution(q);
  const std::size_t n = p.size();
  std::vector<double> gamma(n * n, 0.0);
  std::vector<double> rp(n), rq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::min(p[i], q[i]);
    gamma[i * n + i] = d;
    rp[i] = p[i] - d;
    rq[i] = q[i] - d;
  }
  // Northwest-corner fill of the residual mass.
  std::size_t i = 0, j = 0;
  while (i < n && j < n) {
    if (rp[i] <= 1e-15) {
      ++i;
      continue;
    }
    if (rq[j] <= 1e-15) {
      ++j;
      continue;
    }
    const double d = std::min(rp[i], rq[j]);
    gamma[i * n + j] += d;
    rp[i] -= d;
    rq[j] -= d;
  }
  return gamma;
}

}  // namespace b2o
