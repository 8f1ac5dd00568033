#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lobench/portfolio.hpp"

namespace lobench {

/// A fitness-dependent radius selection rule over a portfolio, stored either
/// as an explicit table (entry i = radius used at fitness i) or as breaking
/// points (b_1, ..., b_{k-1}) with the sentinel convention b_0 = -1,
/// b_k = n - 1: fitness values in [b_{m-1}+1 .. b_m] use the m-th largest
/// portfolio radius. The two forms convert losslessly for monotone
/// non-increasing tables.
class Policy {
 public:
  static Policy from_table(Portfolio portfolio, std::vector<int> table);
  static Policy from_breakpoints(Portfolio portfolio, std::vector<int> breakpoints);

  /// Constant policy using a single radius everywhere.
  static Policy constant(int n, int radius);

  int n() const { return portfolio_.n; }
  const Portfolio& portfolio() const { return portfolio_; }
  bool is_table() const { return is_table_; }

  /// Radius used at fitness i. Throws ErrorCode::invalid_argument unless
  /// 0 <= i <= n-1.
  int operator()(int i) const;

  const std::vector<int>& table() const;        // table form only
  const std::vector<int>& breakpoints() const;  // breakpoint form only

  Policy to_table() const;
  /// Throws ErrorCode::representation if the table is not monotone
  /// non-increasing (breakpoint encoding is undefined there).
  Policy to_breakpoints() const;

  /// Line-oriented text form, bit-exact round trip:
  ///   n: 50
  ///   portfolio: 1,2,6
  ///   breakpoints: 11,24     (or  table: 6,6,...,1)
  std::string serialize() const;
  static Policy parse(const std::string& text);
  static Policy load(const std::string& path);
  void save(const std::string& path) const;

  bool operator==(const Policy&) const = default;

 private:
  Policy(Portfolio portfolio, std::vector<int> values, bool is_table);

  Portfolio portfolio_;
  std::vector<int> values_;  // table entries or breakpoints
  bool is_table_ = true;
};

}  // namespace lobench
