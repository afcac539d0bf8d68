#pragma once

#include <span>
#include <utility>
#include <vector>

namespace b2o {

/// Validates that p is a probability vector (entries >= 0, sum within 1e-12
/// of 1). Throws std::invalid_argument otherwise.
void check_distribution(std::span<const double> p);

/// Total variation distance between two distributions on the same finite
/// support: half the l1 distance.
double tv_discrete(std::span<const double> p, std::span<const double> q);

/// Exact TV between Unif[b, (1+eps)b] and Unif[bp, (1+eps)bp] by overlap
/// integration, together with the (1+eps)/eps * |1 - bp/b| bound clamped to 1.
std::pair<double, double> tv_uniform_intervals(double b, double bp, double eps);

/// Union bound for products of independent coordinates: min(1, sum of TVs).
double tv_product_bound(std::span<const double> tvs);

/// Mixture decomposition bound: tv_marginal + sum_z min-mass(z) * tv_cond(z),
/// clamped to 1.
double tv_conditional_bound(double tv_marginal, std::span<const double> diag_masses,
                            std::span<const double> tv_conditionals);

/// Greedy maximal-overlap coupling of two finite distributions; returns the
/// coupling matrix (row-major, |p| x |q|) whose off-diagonal mass equals
/// tv_discrete(p, q) when supports coincide.
std::vector<double> max_overlap_coupling(std::span<const double> p,
                                         std::span<const double> q);

}  // namespace b2o
