#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "b2o/lewis.hpp"
#include "b2o/instances.hpp"
#include "b2o/rng.hpp"

using namespace b2o;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, RngStream& rng) {
  Eigen::MatrixXd a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = rng.next_uniform(-1.0, 1.0);
  for (int i = 0; i < rows; ++i)
    if (a.row(i).norm() < 1e-3) a(i, 0) += 1.0;
  return a;
}

}  // namespace

TEST_CASE("lewis weights: identity fixed point") {
  const int d = 4;
  LewisState st = lewis_weights(Eigen::MatrixXd::Identity(d, d));
  for (int i = 0; i < d; ++i) CHECK(st.w[i] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(st.rank == d);
  CHECK(st.residual <= 1e-8);
}

TEST_CASE("lewis weights: duplicated row in d = 1") {
  Eigen::MatrixXd a(2, 1);
  a << 0.7, 0.7;
  LewisState st = lewis_weights(a);
  CHECK(st.w[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(st.w[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(st.w.sum() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("lewis weights: sum equals rank, positivity") {
  RngStream rng(61, "lewis-sum");
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_below(5));
    const int t = d + 1 + static_cast<int>(rng.next_below(20));
    Eigen::MatrixXd a = random_matrix(t, d, rng);
    LewisState st = lewis_weights(a);
    CHECK(std::abs(st.w.sum() - st.rank) <= 1e-8);
    for (int i = 0; i < t; ++i) CHECK(st.w[i] > 0.0);
    CHECK(st.residual <= 1e-7);
  }
  Eigen::MatrixXd with_zero = Eigen::MatrixXd::Zero(3, 2);
  with_zero(0, 0) = 1.0;
  with_zero(2, 1) = 1.0;
  CHECK_THROWS_AS(lewis_weights(with_zero), std::invalid_argument);
}

TEST_CASE("rank-deficient matrices keep the sum-equals-rank identity") {
  Eigen::MatrixXd a(5, 3);
  a << 1, 0, 1,
       0, 1, 1,
       1, 1, 2,
       2, 0, 2,
       0, 2, 2;  // rank 2
  LewisState st = lewis_weights(a);
  CHECK(st.rank == 2);
  CHECK(std::abs(st.w.sum() - 2.0) <= 1e-8);
}

TEST_CASE("l1_solve: weighted median cases in d = 1") {
  Eigen::MatrixXd a(3, 1);
  a << 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 0, 1, 10;
  Eigen::VectorXd unit = Eigen::VectorXd::Ones(3);
  L1Solution sol = l1_solve(a, b, unit);
  CHECK(sol.theta[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.objective == doctest::Approx(10.0).epsilon(1e-8));

  Eigen::VectorXd w(3);
  w << 1, 3, 1;
  L1Solution sol2 = l1_solve(a, b, w);
  CHECK(sol2.theta[0] == doctest::Approx(1.0).epsilon(1e-8));

  // realizable data has objective zero
  RngStream rng(62, "l1-realizable");
  Eigen::MatrixXd ar = random_matrix(10, 3, rng);
  Eigen::VectorXd theta0(3);
  theta0 << 0.3, -0.7, 0.2;
  L1Solution sol3 = l1_solve(ar, ar * theta0, Eigen::VectorXd::Ones(10));
  CHECK(sol3.objective <= 1e-10);

  CHECK_THROWS_AS(l1_solve(a, b, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  Eigen::VectorXd neg(3);
  neg << 1, -1, 1;
  CHECK_THROWS_AS(l1_solve(a, b, neg), std::invalid_argument);
}

TEST_CASE("l1_solve matches the weighted-median oracle on random d = 1 data") {
  RngStream rng(63, "l1-median");
  for (int trial = 0; trial < 50; ++trial) {
    const int t = 3 + static_cast<int>(rng.next_below(30));
    Eigen::MatrixXd a(t, 1);
    Eigen::VectorXd b(t), w(t);
    for (int i = 0; i < t; ++i) {
      a(i, 0) = rng.next_uniform(-2.0, 2.0);
      if (std::abs(a(i, 0)) < 1e-2) a(i, 0) = 1e-2;
      b[i] = rng.next_uniform(-2.0, 2.0);
      w[i] = rng.next_uniform(0.0, 3.0);
    }
    w[0] = 1.0;  // not all zero
    const double med = weighted_median_theta(a.col(0), b, w);
    const double med_obj = (a * Eigen::VectorXd::Constant(1, med) - b).cwiseAbs().dot(w);
    L1Solution sol = l1_solve(a, b, w);
    CHECK(sol.objective <= med_obj * (1 + 1e-8) + 1e-12);
    CHECK(sol.objective >= med_obj * (1 - 1e-8) - 1e-12);
  }
}

TEST_CASE("l1_solve matches vertex enumeration in d = 2") {
  RngStream rng(64, "l1-vertex");
  for (int trial = 0; trial < 30; ++trial) {
    const int t = 4 + static_cast<int>(rng.next_below(20));
    Eigen::MatrixXd a = random_matrix(t, 2, rng);
    Eigen::VectorXd b(t);
    for (int i = 0; i < t; ++i) b[i] = rng.next_uniform(-1.0, 1.0);
    // enumeration over a wide box; interior optimum expected
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -50.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 50.0);
    const double exact = l1_exact_opt(a, b, lo, hi).objective;
    L1Solution sol = l1_solve(a, b, Eigen::VectorXd::Ones(t));
    CHECK(sol.objective <= exact * (1 + 1e-8) + 1e-10);
    CHECK(sol.objective >= exact * (1 - 1e-8) - 1e-10);
  }
}

TEST_CASE("offline oracle on a size-1 prefix returns the exact minimizer") {
  Eigen::MatrixXd a(1, 1);
  a << 0.5;
  Eigen::VectorXd b(1);
  b << 0.25;
  RngStream rng(65, "l1-oracle-single");
  Eigen::VectorXd theta = offline_l1_oracle(a, b, 0.5, 8, rng);
  CHECK(theta[0] == doctest::Approx(0.5).epsilon(1e-9));  // b / a
}

TEST_CASE("l1 sensitivity audit: identity 2 w_i / r and the 2/t average bound") {
  // identity matrix: every deletion changes the distribution by exactly 2/d
  LewisState id_state = lewis_weights(Eigen::MatrixXd::Identity(4, 4));
  (void)id_state;
  L1SensitivityReport rep = l1_sensitivity_audit(Eigen::MatrixXd::Identity(4, 4));
  for (int i = 0; i < 4; ++i) {
    CHECK(rep.l1_change[i] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(rep.identity_rhs[i] == doctest::Approx(0.5).epsilon(1e-9));
  }
  CHECK(rep.average == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(rep.monotone_ok);

  // duplicated rows in d = 1: deleting one leaves p = (1)
  Eigen::MatrixXd dup(2, 1);
  dup << 0.3, 0.3;
  L1SensitivityReport rep2 = l1_sensitivity_audit(dup);
  CHECK(rep2.l1_change[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(rep2.identity_rhs[0] == doctest::Approx(1.0).epsilon(1e-9));

  RngStream rng(66, "l1-sens");
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd a = random_matrix(10, 3, rng);
    L1SensitivityReport r = l1_sensitivity_audit(a);
    CHECK(r.max_identity_gap <= 1e-6);
    CHECK(r.average <= r.bound + 1e-9);
    CHECK(r.monotone_ok);
  }
  Eigen::MatrixXd single(1, 1);
  single << 1.0;
  CHECK_THROWS_AS(l1_sensitivity_audit(single), std::invalid_argument);
}

TEST_CASE("sample count grows as the analysis prescribes") {
  CHECK(l1_sample_count(1, 0.5, 64, 1.0) ==
        static_cast<int>(std::ceil(4.0 * std::log(128.0))));
  CHECK(l1_sample_count(2, 0.5, 64, 1.0) > l1_sample_count(1, 0.5, 64, 1.0));
  CHECK(l1_sample_count(1, 0.25, 64, 1.0) > l1_sample_count(1, 0.5, 64, 1.0));
}

TEST_CASE("generated l1 instances keep losses in [0,1] over the box") {
  RngStream rng(67, "l1-range");
  for (int trial = 0; trial < 5; ++trial) {
    L1Instance inst = random_l1_instance(40, 2, 0.3, rng.next_u64());
    for (int i = 0; i < inst.size(); ++i) {
      for (int corner = 0; corner < 4; ++corner) {
        Eigen::VectorXd theta(2);
        theta << ((corner & 1) ? inst.box_hi[0] : inst.box_lo[0]),
            ((corner & 2) ? inst.box_hi[1] : inst.box_lo[1]);
        CHECK(std::abs(inst.a.row(i).dot(theta) - inst.b[i]) <= 1.0 + 1e-9);
      }
    }
  }
}
