#pragma once

#include <vector>

#include "lobench/improvement.hpp"
#include "lobench/policy.hpp"
#include "lobench/portfolio.hpp"

namespace lobench {

/// Exact first and second moments of the runtime of a fitness-dependent
/// policy: iterations of the elitist loop until the optimum is the current
/// solution, under uniform random initialization.
struct RuntimeMoments {
  double expectation = 0.0;  // iterations
  double variance = 0.0;     // iterations^2
};

/// Breaking points of the optimal policy for K, computed by the linear scan:
/// for each consecutive pair (D_m, D_{m+1}) of K in descending order, scan
/// j = 1, 2, ... and remember the last j with q(D_m, j) >= q(D_{m+1}, j);
/// stop at the first j where the larger radius falls strictly below. The
/// remembered value starts at 0 and carries over between pairs.
/// Throws ErrorCode::unsolvable_portfolio when 1 is not in K.
std::vector<int> breaking_points_linear(const Portfolio& k, const ImprovementTable& table);

/// Same contract and output as the linear scan, via binary search per pair.
std::vector<int> breaking_points_bisect(const Portfolio& k, const ImprovementTable& table);

/// The optimal policy for K in table form: entry i = argmax_{r in K} q(r, i),
/// ties broken toward the smaller radius. Monotone non-increasing in i.
Policy optimal_restricted_policy(const Portfolio& k, const ImprovementTable& table);

/// The optimal policy over the full portfolio [0..n]: table floor(n/(i+1)).
Policy optimal_full_policy(int n);

/// (1/2) * sum_i 1 / q(p(i), i); +infinity if any level has q = 0.
double expected_runtime(const Policy& p, const ImprovementTable& table);

/// sum_i (3 - 2 q_i) / (4 q_i^2) with q_i = q(p(i), i): the variance of
/// sum_i A_i G_i for independent A_i ~ Bernoulli(1/2) (level i is visited)
/// and G_i ~ Geometric(q_i) (trials to leave level i).
double runtime_variance(const Policy& p, const ImprovementTable& table);

RuntimeMoments runtime_moments(const Policy& p, const ImprovementTable& table);

/// Expected runtime of the optimal policy for K, decoded from breaking points
/// and accumulated from per-radius prefix sums; O(k log n) once the table
/// exists. Scratch vectors can be reused across calls by the same thread.
struct OptimalRuntimeScratch {
  std::vector<int> descending;
  std::vector<int> breakpoints;
};
double optimal_expected_runtime(const Portfolio& k, const ImprovementTable& table,
                                OptimalRuntimeScratch& scratch);
double optimal_expected_runtime(const Portfolio& k, const ImprovementTable& table);

/// Unvalidated hot-path variant for brute-force enumeration: radii must be
/// strictly ascending within [1..n]. Returns +infinity for portfolios without
/// radius 1 (the top fitness levels cannot be left).
double optimal_expected_runtime_unchecked(const int* radii, int k, const ImprovementTable& table,
                                          OptimalRuntimeScratch& scratch);

// Conveniences that build the q-table internally (one-shot use).
double expected_runtime(const Policy& p);
double runtime_variance(const Policy& p);
Policy optimal_restricted_policy(const Portfolio& k);

}  // namespace lobench
