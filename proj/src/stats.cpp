#include "lobench/stats.hpp"

#include <algorithm>
#include <cmath>

#include "lobench/errors.hpp"

namespace lobench {

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) throw_error(ErrorCode::invalid_argument, "mean of empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

namespace {

double variance_sum(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc;
}

}  // namespace

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  return std::sqrt(variance_sum(xs) / static_cast<double>(xs.size() - 1));
}

double population_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  return std::sqrt(variance_sum(xs) / static_cast<double>(xs.size()));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw_error(ErrorCode::invalid_argument, "KS test needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  const double lambda = d * std::sqrt(na * nb / (na + nb));
  // Kolmogorov asymptotic survival function.
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
    p += term;
    if (std::abs(term) < 1e-12) break;
  }
  p = std::clamp(p, 0.0, 1.0);
  return {d, p};
}

}  // namespace lobench
