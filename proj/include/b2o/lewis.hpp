#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace b2o {

class RngStream;

/// Default calibrated constant behind m = c_m * (d/eps^2) * ln(dT/eps).
/// Produced by the shipped calibration protocol (see cmd_calibrate).
inline constexpr double kDefaultCm = 2.0;

/// Fixed point of w_i^2 = a_i^T (A^T W^{-1} A)^+ a_i together with the
/// normalized sampling distribution p = w / rank(A).
struct LewisState {
  Eigen::VectorXd w;
  Eigen::VectorXd p;
  int rank = 0;
  int iterations = 0;
  double residual = 0.0;  // max_i |w_i^2 - a_i^T (A^T W^{-1} A)^+ a_i|
};

/// Plain fixed-point iteration from all-ones, damped (step 1/2) when the
/// max-norm change grows. Pseudoinverse uses a relative eigenvalue cutoff of
/// 1e-12. Throws std::runtime_error on non-convergence, std::invalid_argument
/// on zero rows.
LewisState lewis_weights(const Eigen::MatrixXd& a, double tol = 1e-10,
                         int max_iter = 100);

struct L1Solution {
  Eigen::VectorXd theta;
  double objective = 0.0;
};

/// Weighted l1 regression: minimize sum_k weight_k |<a_k, theta> - b_k|.
/// Smoothed-Newton continuation followed by a vertex polish over the
/// lowest-residual rows; relative objective tolerance ~1e-10 on
/// non-degenerate data.
L1Solution l1_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                    const Eigen::VectorXd& weights);

/// Lewis-weight sampling oracle: draws m = ceil(c_m (d/eps^2) ln(dT/eps))
/// rows i.i.d. from p, assigns weight 1/(m p~_k) with the uniform
/// perturbation, and solves on the weighted sample. Requires eps in (0, 1].
Eigen::VectorXd offline_l1_oracle(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                  double eps, int horizon, RngStream& rng,
                                  double c_m_const = kDefaultCm);

int l1_sample_count(int d, double eps, int horizon, double c_m_const = kDefaultCm);

struct L1SensitivityReport {
  std::vector<double> l1_change;     // ||p(A) - p(A^{(-i)})||_1, zero-extended
  std::vector<double> identity_rhs;  // 2 w_i / r
  double average = 0.0;
  double bound = 0.0;  // 2 / t
  double max_identity_gap = 0.0;
  bool monotone_ok = true;  // w_j(A) <= w_j(A^{(-i)}) for all j != i
};

/// Per-row deletion audit of the sampling distribution. Requires t >= 2 and
/// that no deletion leaves a zero-row matrix (rows are nonzero throughout).
L1SensitivityReport l1_sensitivity_audit(const Eigen::MatrixXd& a);

/// Exact minimizers used as independent oracles and by the engine.
/// d = 1: weighted median; d = 2: vertex enumeration over row-pair
/// intersections (with optional box clamping); d >= 3 falls back to l1_solve
/// at tight tolerance (near-exact).
double weighted_median_theta(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& weights);
L1Solution l1_exact_opt(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                        const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

}  // namespace b2o
