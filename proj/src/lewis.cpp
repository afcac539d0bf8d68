#include "b2o/lewis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "b2o/rng.hpp"

namespace b2o {

namespace {

struct Pinv {
  Eigen::MatrixXd inv;
  int rank = 0;
};

Pinv pseudo_inverse(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff = ev.cwiseAbs().maxCoeff() * 1e-12;
  Eigen::VectorXd inv_ev = Eigen::VectorXd::Zero(ev.size());
  Pinv out;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > cutoff) {
      inv_ev[i] = 1.0 / ev[i];
      ++out.rank;
    }
  }
  out.inv = es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().transpose();
  return out;
}

// One application of the fixed-point map; returns the new weights and rank.
std::pair<Eigen::VectorXd, int> lewis_map(const Eigen::MatrixXd& a,
                                          const Eigen::VectorXd& w) {
  const int d = static_cast<int>(a.cols());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < a.rows(); ++i)
    m.noalias() += a.row(i).transpose() * a.row(i) / w[i];
  Pinv pinv = pseudo_inverse(m);
  Eigen::VectorXd next(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    const double quad = a.row(i) * pinv.inv * a.row(i).transpose();
    next[i] = std::sqrt(std::max(0.0, quad));
  }
  return {next, pinv.rank};
}

}  // namespace

LewisState lewis_weights(const Eigen::MatrixXd& a, double tol, int max_iter) {
  if (a.rows() < 1) throw std::invalid_argument("lewis_weights: empty matrix");
  for (int i = 0; i < a.rows(); ++i)
    if (a.row(i).norm() == 0.0)
      throw std::invalid_argument("lewis_weights: zero row at index " + std::to_string(i));

  LewisState st;
  st.w = Eigen::VectorXd::Ones(a.rows());
  double prev_diff = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    auto [next, rank] = lewis_map(a, st.w);
    st.rank = rank;
    const double diff = (next - st.w).cwiseAbs().maxCoeff();
    // Damp when the plain step stops contracting.
    st.w = (diff > prev_diff) ? Eigen::VectorXd(0.5 * (st.w + next)) : next;
    prev_diff = diff;
    st.iterations = it;
    if (diff < tol) break;
  }
  auto [check, rank] = lewis_map(a, st.w);
  st.rank = rank;
  st.residual = (check.cwiseProduct(check) - st.w.cwiseProduct(st.w)).cwiseAbs().maxCoeff();
  if (prev_diff >= tol) {
    throw std::runtime_error("lewis_weights: no convergence after " +
                             std::to_string(st.iterations) +
                             " iterations (last step " + std::to_string(prev_diff) +
                             ", residual " + std::to_string(st.residual) + ")");
  }
  st.p = st.w / st.w.sum();
  return st;
}

L1Solution l1_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                    const Eigen::VectorXd& weights) {
  const int n = static_cast<int>(a.rows());
  const int d = static_cast<int>(a.cols());
  if (b.size() != n || weights.size() != n)
    throw std::invalid_argument("l1_solve: shape mismatch");
  if (!a.allFinite() || !b.allFinite() || !weights.allFinite())
    throw std::invalid_argument("l1_solve: non-finite input");
  double w_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("l1_solve: negative weight");
    w_sum += weights[i];
  }
  if (w_sum == 0.0) throw std::invalid_argument("l1_solve: all weights are zero");

  auto objective = [&](const Eigen::VectorXd& theta) {
    return (a * theta - b).cwiseAbs().dot(weights);
  };

  // Weighted least-squares start.
  Eigen::MatrixXd h0 = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd g0 = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) {
    h0.noalias() += weights[i] * a.row(i).transpose() * a.row(i);
    g0.noalias() += weights[i] * b[i] * a.row(i).transpose();
  }
  const double ridge0 = std::max(h0.trace() / d, 1e-30) * 1e-12;
  Eigen::VectorXd theta =
      (h0 + ridge0 * Eigen::MatrixXd::Identity(d, d)).ldlt().solve(g0);

  // Smoothing continuation on F_mu = sum_i w_i sqrt(r_i^2 + mu^2).
  double mu = std::max((a * theta - b).cwiseAbs().maxCoeff() / 4.0, 1e-12);
  for (int outer = 0; outer < 80; ++outer) {
    for (int newton = 0; newton < 60; ++newton) {
      Eigen::VectorXd r = a * theta - b;
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(d);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d, d);
      double f_mu = 0.0;
      for (int i = 0; i < n; ++i) {
        const double s = std::sqrt(r[i] * r[i] + mu * mu);
        f_mu += weights[i] * s;
        grad.noalias() += weights[i] * (r[i] / s) * a.row(i).transpose();
        hess.noalias() +=
            weights[i] * (mu * mu / (s * s * s)) * a.row(i).transpose() * a.row(i);
      }
      const double ridge = std::max(hess.trace() / d, 1e-30) * 1e-10;
      Eigen::VectorXd step =
          (hess + ridge * Eigen::MatrixXd::Identity(d, d)).ldlt().solve(-grad);
      if (!step.allFinite()) break;
      double alpha = 1.0;
      Eigen::VectorXd cand = theta + step;
      auto f_mu_at = [&](const Eigen::VectorXd& th) {
        const Eigen::VectorXd rr = a * th - b;
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
          acc += weights[i] * std::sqrt(rr[i] * rr[i] + mu * mu);
        return acc;
      };
      double f_cand = f_mu_at(cand);
      int backtracks = 0;
      while (f_cand > f_mu - 1e-12 * std::abs(f_mu) && backtracks < 40) {
        alpha *= 0.5;
        cand = theta + alpha * step;
        f_cand = f_mu_at(cand);
        ++backtracks;
      }
      const double move = (cand - theta).cwiseAbs().maxCoeff();
      theta = cand;
      if (move < 1e-14 * std::max(1.0, theta.cwiseAbs().maxCoeff())) break;
    }
    const double f_true = objective(theta);
    if (mu * w_sum <= 1e-11 * std::max(f_true, 1e-30) || mu < 1e-280) break;
    mu /= 16.0;
  }

  // Vertex polish: the optimum of a weighted l1 fit sits where d residuals
  // vanish (general position); try row subsets with the smallest residuals.
  L1Solution best{theta, objective(theta)};
  Eigen::VectorXd res = (a * theta - b).cwiseAbs();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return res[i] < res[j]; });
  const int pool = std::min(n, 2 * d);
  std::vector<int> pick(d);
  std::function<void(int, int)> enumerate = [&](int start, int depth) {
    if (depth == d) {
      Eigen::MatrixXd sub(d, d);
      Eigen::VectorXd rhs(d);
      for (int k = 0; k < d; ++k) {
        sub.row(k) = a.row(order[pick[k]]);
        rhs[k] = b[order[pick[k]]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      if (!lu.isInvertible()) return;
      Eigen::VectorXd cand = lu.solve(rhs);
      const double f = objective(cand);
      if (f < best.objective) best = {cand, f};
      return;
    }
    for (int i = start; i <= pool - (d - depth); ++i) {
      pick[depth] = i;
      enumerate(i + 1, depth + 1);
    }
  };
  if (n >= d) enumerate(0, 0);
  return best;
}

int l1_sample_count(int d, double eps, int horizon, double c_m_const) {
  const double log_arg = std::max(std::exp(1.0), d * static_cast<double>(horizon) / eps);
  return static_cast<int>(
      std::ceil(c_m_const * (d / (eps * eps)) * std::log(log_arg)));
}

Eigen::VectorXd offline_l1_oracle(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                  double eps, int horizon, RngStream& rng,
                                  double c_m_const) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("offline_l1_oracle: eps must be in (0, 1]");
  if (horizon < 1) throw std::invalid_argument("offline_l1_oracle: horizon must be >= 1");
  const int n = static_cast<int>(a.rows());
  const int d = static_cast<int>(a.cols());
  LewisState ls = lewis_weights(a);
  const int m = l1_sample_count(d, eps, horizon, c_m_const);

  std::vector<double> cdf(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += ls.p[i];
    cdf[i] = acc;
  }
  Eigen::MatrixXd sa(m, d);
  Eigen::VectorXd sb(m), sw(m);
  for (int k = 0; k < m; ++k) {
    const double x = rng.next_double() * acc;
    const int idx = static_cast<int>(
        std::lower_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
    const int i = std::min(idx, n - 1);
    const double p = ls.p[i];
    const double perturbed = rng.next_uniform(p, (1.0 + eps / 2.0) * p);
    sa.row(k) = a.row(i);
    sb[k] = b[i];
    sw[k] = 1.0 / (m * perturbed);
  }
  return l1_solve(sa, sb, sw).theta;
}

L1SensitivityReport l1_sensitivity_audit(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  if (n < 2) throw std::invalid_argument("l1_sensitivity_audit: need t >= 2");
  LewisState full = lewis_weights(a);
  const double r = full.w.sum();

  L1SensitivityReport rep;
  rep.bound = 2.0 / n;
  rep.l1_change.resize(n);
  rep.identity_rhs.resize(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd del(n - 1, a.cols());
    del.topRows(i) = a.topRows(i);
    del.bottomRows(n - 1 - i) = a.bottomRows(n - 1 - i);
    LewisState ls = lewis_weights(del);
    const double r_del = ls.w.sum();
    double l1 = full.w[i] / r;  // deleted coordinate, zero-extended
    for (int j = 0; j < n - 1; ++j) {
      const int orig = (j < i) ? j : j + 1;
      l1 += std::abs(full.w[orig] / r - ls.w[j] / r_del);
      if (ls.w[j] < full.w[orig] - 1e-7) rep.monotone_ok = false;
    }
    rep.l1_change[i] = l1;
    rep.identity_rhs[i] = 2.0 * full.w[i] / r;
    rep.max_identity_gap =
        std::max(rep.max_identity_gap, std::abs(l1 - rep.identity_rhs[i]));
    rep.average += l1 / n;
  }
  return rep;
}

double weighted_median_theta(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& weights) {
  std::vector<std::pair<double, double>> pts;  // (b_i/a_i, |a_i| w_i)
  double total = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0 || weights[i] == 0.0) continue;
    const double wt = std::abs(a[i]) * weights[i];
    pts.emplace_back(b[i] / a[i], wt);
    total += wt;
  }
  if (pts.empty()) return 0.0;
  std::sort(pts.begin(), pts.end());
  double acc = 0.0;
  for (const auto& [theta, wt] : pts) {
    acc += wt;
    if (acc >= total / 2.0) return theta;
  }
  return pts.back().first;
}

L1Solution l1_exact_opt(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                        const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const int n = static_cast<int>(a.rows());
  const int d = static_cast<int>(a.cols());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  auto objective = [&](const Eigen::VectorXd& theta) {
    return (a * theta - b).cwiseAbs().sum();
  };
  auto clamp = [&](Eigen::VectorXd theta) {
    for (int k = 0; k < d; ++k) theta[k] = std::min(std::max(theta[k], lo[k]), hi[k]);
    return theta;
  };
  if (d == 1) {
    Eigen::VectorXd theta(1);
    theta[0] = weighted_median_theta(a.col(0), b, ones);
    theta = clamp(theta);
    return {theta, objective(theta)};
  }
  if (d == 2) {
    std::vector<Eigen::Vector2d> candidates;
    candidates.emplace_back(lo[0], lo[1]);
    candidates.emplace_back(lo[0], hi[1]);
    candidates.emplace_back(hi[0], lo[1]);
    candidates.emplace_back(hi[0], hi[1]);
    for (int i = 0; i < n; ++i) {
      // Row crossed with each box facet.
      for (int k = 0; k < 2; ++k) {
        const int o = 1 - k;
        for (double bound : {lo[k], hi[k]}) {
          if (a(i, o) != 0.0) {
            Eigen::Vector2d c;
            c[k] = bound;
            c[o] = (b[i] - a(i, k) * bound) / a(i, o);
            if (c[o] >= lo[o] - 1e-12 && c[o] <= hi[o] + 1e-12)
              candidates.push_back(c);
          }
        }
      }
      for (int j = i + 1; j < n; ++j) {
        Eigen::Matrix2d m;
        m.row(0) = a.row(i);
        m.row(1) = a.row(j);
        if (std::abs(m.determinant()) < 1e-14) continue;
        Eigen::Vector2d c = m.inverse() * Eigen::Vector2d(b[i], b[j]);
        if ((c.array() >= lo.array() - 1e-12).all() &&
            (c.array() <= hi.array() + 1e-12).all())
          candidates.push_back(c);
      }
    }
    L1Solution best;
    best.objective = std::numeric_limits<double>::infinity();
    for (const Eigen::Vector2d& c : candidates) {
      Eigen::VectorXd theta = clamp(c);
      const double f = objective(theta);
      if (f < best.objective) best = {theta, f};
    }
    return best;
  }
  // Near-exact fallback for d >= 3.
  Eigen::VectorXd theta = clamp(l1_solve(a, b, ones).theta);
  return {theta, objective(theta)};
}

}  // namespace b2o
