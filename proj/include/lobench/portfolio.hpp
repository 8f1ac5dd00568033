#pragma once

#include <string>
#include <vector>

namespace lobench {

/// Ordered set of allowed search radii: the action space of the controlled
/// algorithm. Radii are kept strictly increasing. A portfolio is "solvable"
/// iff it contains radius 1; only then is a finite expected runtime
/// guaranteed from every fitness level.
struct Portfolio {
  int n = 0;
  std::vector<int> radii;

  /// Validating factory: sorts the radii, rejects duplicates and values
  /// outside [0..n].
  static Portfolio of(int n, std::vector<int> radii);

  /// The full portfolio [0..n].
  static Portfolio full(int n);

  int size() const { return static_cast<int>(radii.size()); }
  bool solvable() const;
  bool contains(int r) const;
  std::vector<int> descending() const;

  /// Space-separated radii, e.g. "1 2 6".
  std::string to_string() const;

  bool operator==(const Portfolio&) const = default;
};

/// Parses "1,2,6" or "1 2 6" into a validated portfolio.
Portfolio parse_portfolio(int n, const std::string& text);

}  // namespace lobench
