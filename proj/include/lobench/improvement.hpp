#pragma once

#include <vector>

namespace lobench {

/// Probability that flipping exactly r uniformly chosen distinct bits strictly
/// improves a solution whose current fitness is i, problem dimension n:
///
///   q(r, i) = (r / n) * prod_{j in [1..r-1]} (n - i - j) / (n - j)
///
/// The product is accumulated factor by factor and short-circuits to exactly 0
/// as soon as a factor is non-positive, i.e. whenever r > n - i. q(0, i) = 0.
double improvement_probability(int r, int i, int n);

/// True iff q(r, i) <= q(r+1, i) with ties included, evaluated through the
/// integer criterion i * (r + 1) <= n - r plus the degenerate region
/// r > n - i where both probabilities vanish. Requires 0 <= r <= n-1 and
/// 0 <= i <= n-1. Never touches floating point, so exact rational ties
/// (e.g. q(2,1) = q(3,1) = 3/10 at n = 5) are classified correctly.
bool prefers_larger(int r, int i, int n);

/// The radius maximizing q(., i) over the full range [0..n]: floor(n / (i+1)).
int optimal_radius_full(int i, int n);

/// All q(r, i) values for one dimension, plus prefix sums of 1/q per radius so
/// a monotone policy's expected runtime can be accumulated segment-wise in
/// O(1) per segment. Read-only after construction; safe to share across
/// threads.
class ImprovementTable {
 public:
  explicit ImprovementTable(int n);

  int n() const { return n_; }

  /// q(r, i); r in [0..n], i in [0..n-1].
  double q(int r, int i) const {
    return q_[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(i)];
  }

  /// sum_{j < i} 1 / q(r, j); i in [0..n]. +infinity once any level in the
  /// range has q = 0.
  double inv_q_prefix(int r, int i) const {
    return prefix_[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_ + 1) +
                   static_cast<std::size_t>(i)];
  }

 private:
  int n_;
  std::vector<double> q_;       // (n+1) x n, row r, column i
  std::vector<double> prefix_;  // (n+1) x (n+1)
};

}  // namespace lobench
