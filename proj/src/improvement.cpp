#include "lobench/improvement.hpp"

#include <limits>
#include <string>

#include "lobench/errors.hpp"

namespace lobench {

namespace {

void check_range(bool ok, const char* what, int value) {
  if (!ok)
    throw_error(ErrorCode::invalid_argument,
                std::string(what) + " out of range: " + std::to_string(value));
}

}  // namespace

double improvement_probability(int r, int i, int n) {
  check_range(n >= 1, "dimension", n);
  check_range(r >= 0 && r <= n, "radius", r);
  check_range(i >= 0 && i <= n - 1, "fitness", i);
  if (r == 0) return 0.0;
  double value = static_cast<double>(r) / static_cast<double>(n);
  for (int j = 1; j <= r - 1; ++j) {
    const int numer = n - i - j;
    if (numer <= 0) return 0.0;
    value *= static_cast<double>(numer) / static_cast<double>(n - j);
  }
  return value;
}

bool prefers_larger(int r, int i, int n) {
  check_range(n >= 1, "dimension", n);
  check_range(r >= 0 && r <= n - 1, "radius", r);
  check_range(i >= 0 && i <= n - 1, "fitness", i);
  // i <= (n - r) / (r + 1), evaluated in integers. When r > n - i both
  // probabilities are exactly 0 and the comparison holds as a tie.
  if (i > n - r) return true;
  return static_cast<long long>(i) * (r + 1) <= static_cast<long long>(n) - r;
}

int optimal_radius_full(int i, int n) {
  check_range(n >= 1, "dimension", n);
  check_range(i >= 0 && i <= n - 1, "fitness", i);
  return n / (i + 1);
}

ImprovementTable::ImprovementTable(int n) : n_(n) {
  check_range(n >= 1, "dimension", n);
  const auto un = static_cast<std::size_t>(n);
  q_.assign((un + 1) * un, 0.0);
  prefix_.assign((un + 1) * (un + 1), 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= n; ++r) {
    for (int i = 0; i < n; ++i)
      q_[static_cast<std::size_t>(r) * un + static_cast<std::size_t>(i)] =
          improvement_probability(r, i, n);
    double acc = 0.0;
    const std::size_t row = static_cast<std::size_t>(r) * (un + 1);
    prefix_[row] = 0.0;
    for (int i = 0; i < n; ++i) {
      const double qi = q_[static_cast<std::size_t>(r) * un + static_cast<std::size_t>(i)];
      acc = (qi > 0.0) ? acc + 1.0 / qi : inf;
      prefix_[row + static_cast<std::size_t>(i) + 1] = acc;
    }
  }
}

}  // namespace lobench
