#include "lobench/runtime.hpp"

#include <limits>
#include <string>

#include "lobench/errors.hpp"

namespace lobench {

namespace {

void check_solvable(const Portfolio& k) {
  if (!k.solvable())
    throw_error(ErrorCode::unsolvable_portfolio,
                "portfolio {" + k.to_string() + "} lacks radius 1");
}

void check_same_n(int a, int b) {
  if (a != b)
    throw_error(ErrorCode::invalid_argument,
                "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

std::vector<int> breaking_points_linear(const Portfolio& k, const ImprovementTable& table) {
  check_solvable(k);
  check_same_n(k.n, table.n());
  const std::vector<int> desc = k.descending();
  const int n = k.n;
  std::vector<int> breakpoints(desc.size() - 1);
  int c = 0;
  for (std::size_t m = 0; m + 1 < desc.size(); ++m) {
    // The scan stops no later than j = n - desc[m+1]: there the larger
    // radius cannot improve at all while the smaller one still can.
    for (int j = 1; j <= n - 1; ++j) {
      if (table.q(desc[m], j) < table.q(desc[m + 1], j)) break;
      c = j;
    }
    breakpoints[m] = c;
  }
  return breakpoints;
}

std::vector<int> breaking_points_bisect(const Portfolio& k, const ImprovementTable& table) {
  check_solvable(k);
  check_same_n(k.n, table.n());
  const std::vector<int> desc = k.descending();
  const int n = k.n;
  std::vector<int> breakpoints(desc.size() - 1);
  int c = 0;
  for (std::size_t m = 0; m + 1 < desc.size(); ++m) {
    // Smallest j with q(D_m, j) < q(D_{m+1}, j). The predicate is monotone in
    // j and certainly true at j = n - desc[m+1].
    int lo = 1;
    int hi = n - desc[m + 1];
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (table.q(desc[m], mid) < table.q(desc[m + 1], mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    if (lo > 1) c = lo - 1;
    breakpoints[m] = c;
  }
  return breakpoints;
}

// Exact rational ties between q values (e.g. q(r, 1) = q(n-r, 1)) come out of
// the floating-point product with ~1e-16 relative noise, while genuinely
// distinct q values are separated by at least 1.3e-6 relative over the whole
// n <= 200 domain (exhaustive scan). A 1e-9 window therefore classifies ties
// exactly.
constexpr double kTieWindow = 1e-9;

Policy optimal_restricted_policy(const Portfolio& k, const ImprovementTable& table) {
  check_solvable(k);
  check_same_n(k.n, table.n());
  const int n = k.n;
  std::vector<int> result(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int best = k.radii.front();
    double best_q = table.q(best, i);
    for (std::size_t idx = 1; idx < k.radii.size(); ++idx) {
      const int r = k.radii[idx];
      const double qr = table.q(r, i);
      if (qr > best_q * (1.0 + kTieWindow)) {  // ties keep the smaller radius
        best = r;
        best_q = qr;
      }
    }
    result[static_cast<std::size_t>(i)] = best;
  }
  return Policy::from_table(k, std::move(result));
}

Policy optimal_full_policy(int n) {
  std::vector<int> result(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) result[static_cast<std::size_t>(i)] = n / (i + 1);
  return Policy::from_table(Portfolio::full(n), std::move(result));
}

double expected_runtime(const Policy& p, const ImprovementTable& table) {
  check_same_n(p.n(), table.n());
  double sum = 0.0;
  for (int i = 0; i < p.n(); ++i) {
    const double qi = table.q(p(i), i);
    if (qi <= 0.0) return std::numeric_limits<double>::infinity();
    sum += 1.0 / qi;
  }
  return 0.5 * sum;
}

double runtime_variance(const Policy& p, const ImprovementTable& table) {
  check_same_n(p.n(), table.n());
  double sum = 0.0;
  for (int i = 0; i < p.n(); ++i) {
    const double qi = table.q(p(i), i);
    if (qi <= 0.0) return std::numeric_limits<double>::infinity();
    sum += (3.0 - 2.0 * qi) / (4.0 * qi * qi);
  }
  return sum;
}

RuntimeMoments runtime_moments(const Policy& p, const ImprovementTable& table) {
  return {expected_runtime(p, table), runtime_variance(p, table)};
}

double optimal_expected_runtime_unchecked(const int* radii, int k, const ImprovementTable& table,
                                          OptimalRuntimeScratch& scratch) {
  const int n = table.n();
  auto& desc = scratch.descending;
  desc.resize(static_cast<std::size_t>(k));
  for (int m = 0; m < k; ++m) desc[static_cast<std::size_t>(m)] = radii[k - 1 - m];
  auto& bp = scratch.breakpoints;
  bp.resize(static_cast<std::size_t>(k) - 1);
  int c = 0;
  for (int m = 0; m + 1 < k; ++m) {
    const int large = desc[static_cast<std::size_t>(m)];
    const int small = desc[static_cast<std::size_t>(m) + 1];
    int lo = 1;
    int hi = n - small;
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (table.q(large, mid) < table.q(small, mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    if (lo > 1) c = lo - 1;
    bp[static_cast<std::size_t>(m)] = c;
  }
  double sum = 0.0;
  int prev = -1;
  for (int m = 0; m < k; ++m) {
    const int b = (m + 1 < k) ? bp[static_cast<std::size_t>(m)] : n - 1;
    const int r = desc[static_cast<std::size_t>(m)];
    if (b > prev) {
      sum += table.inv_q_prefix(r, b + 1) - table.inv_q_prefix(r, prev + 1);
      prev = b;
    }
  }
  return 0.5 * sum;
}

double optimal_expected_runtime(const Portfolio& k, const ImprovementTable& table,
                                OptimalRuntimeScratch& scratch) {
  check_solvable(k);
  check_same_n(k.n, table.n());
  return optimal_expected_runtime_unchecked(k.radii.data(), k.size(), table, scratch);
}

double optimal_expected_runtime(const Portfolio& k, const ImprovementTable& table) {
  OptimalRuntimeScratch scratch;
  return optimal_expected_runtime(k, table, scratch);
}

double expected_runtime(const Policy& p) {
  ImprovementTable table(p.n());
  return expected_runtime(p, table);
}

double runtime_variance(const Policy& p) {
  ImprovementTable table(p.n());
  return runtime_variance(p, table);
}

Policy optimal_restricted_policy(const Portfolio& k) {
  ImprovementTable table(k.n);
  return optimal_restricted_policy(k, table);
}

}  // namespace lobench
