#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "b2o/rng.hpp"
#include "b2o/tv.hpp"
#include "oracles.hpp"

using namespace b2o;

TEST_CASE("tv_discrete basic values") {
  std::vector<double> p{0.5, 0.5}, q{0.75, 0.25};
  CHECK(tv_discrete(p, p) == doctest::Approx(0.0));
  CHECK(tv_discrete(std::vector<double>{1, 0}, std::vector<double>{0, 1}) ==
        doctest::Approx(1.0));
  CHECK(tv_discrete(p, q) == doctest::Approx(0.25));
  CHECK_THROWS_AS(tv_discrete(p, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(tv_discrete(std::vector<double>{0.9, 0.2}, p), std::invalid_argument);
}

TEST_CASE("tv_discrete is a metric on random triples") {
  RngStream rng(31, "tv-metric");
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(6));
    auto draw = [&]() {
      std::vector<double> v(n);
      double sum = 0.0;
      for (double& x : v) {
        x = rng.next_double() + 1e-9;
        sum += x;
      }
      for (double& x : v) x /= sum;
      return v;
    };
    auto p = draw(), q = draw(), r = draw();
    CHECK(tv_discrete(p, q) == doctest::Approx(tv_discrete(q, p)).epsilon(1e-12));
    CHECK(tv_discrete(p, r) <= tv_discrete(p, q) + tv_discrete(q, r) + 1e-12);
    CHECK(tv_discrete(p, p) == doctest::Approx(0.0));
  }
}

TEST_CASE("tv_uniform_intervals exact and bound") {
  auto [zero, zero_bound] = tv_uniform_intervals(1.0, 1.0, 0.3);
  CHECK(zero == doctest::Approx(0.0));
  CHECK(zero_bound == doctest::Approx(0.0));

  auto [exact, bound] = tv_uniform_intervals(1.0, 1.05, 0.1);
  CHECK(exact == doctest::Approx(0.5238095238095238).epsilon(1e-12));
  CHECK(bound == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(exact <= bound);

  // disjoint supports
  auto [one, one_bound] = tv_uniform_intervals(1.0, 1.4, 0.2);
  CHECK(one == doctest::Approx(1.0));
  CHECK(one_bound == doctest::Approx(1.0));

  CHECK_THROWS_AS(tv_uniform_intervals(0.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("tv_uniform_intervals matches the quadrature oracle") {
  RngStream rng(32, "tv-quad");
  for (int trial = 0; trial < 20; ++trial) {
    const double b = rng.next_uniform(0.5, 2.0);
    const double bp = b * rng.next_uniform(0.8, 1.25);
    const double eps = rng.next_uniform(0.05, 1.0);
    auto [exact, bound] = tv_uniform_intervals(b, bp, eps);
    const double quad = testing::tv_uniform_quadrature(b, bp, eps);
    CHECK(exact == doctest::Approx(quad).epsilon(1e-3));
    CHECK(exact <= bound + 1e-12);
  }
}

TEST_CASE("tv_product_bound") {
  CHECK(tv_product_bound(std::vector<double>{0, 0, 0}) == doctest::Approx(0.0));
  CHECK(tv_product_bound(std::vector<double>{0.3, 0.4}) == doctest::Approx(0.7));
  CHECK(tv_product_bound(std::vector<double>{0.8, 0.8}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(tv_product_bound(std::vector<double>{1.2}), std::invalid_argument);
}

TEST_CASE("product bound dominates exact product TV on small spaces") {
  RngStream rng(33, "tv-prod");
  for (int trial = 0; trial < 100; ++trial) {
    // three independent coordinates on supports of size 4
    const int k = 3, n = 4;
    std::vector<std::vector<double>> ps(k), qs(k);
    auto draw = [&]() {
      std::vector<double> v(n);
      double sum = 0.0;
      for (double& x : v) {
        x = rng.next_double() + 1e-9;
        sum += x;
      }
      for (double& x : v) x /= sum;
      return v;
    };
    std::vector<double> tvs(k);
    for (int i = 0; i < k; ++i) {
      ps[i] = draw();
      qs[i] = draw();
      tvs[i] = tv_discrete(ps[i], qs[i]);
    }
    // exact TV of the product by enumeration over 4^3 outcomes
    std::vector<double> pj, qj;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          pj.push_back(ps[0][a] * ps[1][b] * ps[2][c]);
          qj.push_back(qs[0][a] * qs[1][b] * qs[2][c]);
        }
    CHECK(tv_discrete(pj, qj) <= tv_product_bound(tvs) + 1e-12);
  }
}

TEST_CASE("tv_conditional_bound") {
  CHECK(tv_conditional_bound(0.2, std::vector<double>{0.5, 0.5},
                             std::vector<double>{0.0, 0.0}) == doctest::Approx(0.2));
  CHECK(tv_conditional_bound(0.0, std::vector<double>{0.5, 0.5},
                             std::vector<double>{0.2, 0.4}) == doctest::Approx(0.3));
  CHECK_THROWS_AS(tv_conditional_bound(0.0, std::vector<double>{0.5},
                                       std::vector<double>{0.1, 0.2}),
                  std::invalid_argument);
}

TEST_CASE("conditional bound dominates exact TV on two-block joints") {
  RngStream rng(34, "tv-cond");
  for (int trial = 0; trial < 200; ++trial) {
    // Z in {0,1}, W in {0,1}: 4-point joint distributions
    auto draw_pair = [&]() {
      std::vector<double> v(4);
      double sum = 0.0;
      for (double& x : v) {
        x = rng.next_double() + 1e-9;
        sum += x;
      }
      for (double& x : v) x /= sum;
      return v;
    };
    auto p = draw_pair(), q = draw_pair();
    const double pz0 = p[0] + p[1], qz0 = q[0] + q[1];
    const double pz1 = p[2] + p[3], qz1 = q[2] + q[3];
    const double tv_marg = 0.5 * (std::abs(pz0 - qz0) + std::abs(pz1 - qz1));
    auto cond_tv = [](double a0, double a1, double b0, double b1) {
      const double sa = a0 + a1, sb = b0 + b1;
      return 0.5 * (std::abs(a0 / sa - b0 / sb) + std::abs(a1 / sa - b1 / sb));
    };
    std::vector<double> masses{std::min(pz0, qz0), std::min(pz1, qz1)};
    std::vector<double> conds{cond_tv(p[0], p[1], q[0], q[1]),
                              cond_tv(p[2], p[3], q[2], q[3])};
    CHECK(tv_discrete(p, q) <= tv_conditional_bound(tv_marg, masses, conds) + 1e-12);
  }
}

TEST_CASE("greedy coupling attains the TV as its off-diagonal mass") {
  RngStream rng(35, "tv-coupling");
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));
    auto draw = [&]() {
      std::vector<double> v(n);
      double sum = 0.0;
      for (double& x : v) {
        x = rng.next_double() + 1e-9;
        sum += x;
      }
      for (double& x : v) x /= sum;
      return v;
    };
    auto p = draw(), q = draw();
    auto gamma = max_overlap_coupling(p, q);
    // marginals
    for (int i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (int j = 0; j < n; ++j) {
        row += gamma[i * n + j];
        col += gamma[j * n + i];
      }
      CHECK(row == doctest::Approx(p[i]).epsilon(1e-12));
      CHECK(col == doctest::Approx(q[i]).epsilon(1e-12));
    }
    double off_diag = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) off_diag += gamma[i * n + j];
    CHECK(off_diag == doctest::Approx(tv_discrete(p, q)).epsilon(1e-10));
  }
}
