#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lobench/improvement.hpp"
#include "lobench/portfolio.hpp"
#include "lobench/runtime.hpp"

namespace lobench {

enum class FamilyKind { powers_of_2, initial_segment, evenly_spread, optimal };

FamilyKind family_from_string(const std::string& name);
std::string family_to_string(FamilyKind kind);

/// Generates a named family portfolio of size k:
///   powers_of_2:     {2^i | 2^i <= n, i in [0..k-1]}
///   initial_segment: [1..k]
///   evenly_spread:   {i * floor(n/k) + 1 | i in [0..k-1]}
/// Throws ErrorCode::family_undefined when the definition does not yield k
/// distinct radii (powers_of_2 needs 2^(k-1) <= n, the others k <= n).
/// The `optimal` family is computed by search_optimal_portfolio, not here.
Portfolio make_portfolio(FamilyKind kind, int k, int n);

struct SearchResult {
  Portfolio portfolio;
  RuntimeMoments moments;
  std::uint64_t candidates = 0;
};

/// Brute force over all C(n-1, k-1) k-subsets of [1..n] that contain radius 1,
/// each evaluated under its optimal policy; returns the minimizer. Ties go to
/// the lexicographically smallest portfolio, and the result is independent of
/// the number of worker threads (jobs <= 0 uses all hardware threads).
SearchResult search_optimal_portfolio(int k, int n, int jobs = 1);

struct SweepRecord {
  std::vector<int> radii;
  double expected_runtime = 0.0;
  double normalized = 0.0;  // divided by n^2
};

inline constexpr std::uint64_t kDefaultSweepCap = 2'000'000;

/// One record per enumerated portfolio, sorted by expected runtime (ties in
/// enumeration order). With require_radius_one the candidates are the
/// C(n-1, k-1) sets containing 1; otherwise all C(n, k) subsets of [1..n],
/// where unsolvable portfolios legally evaluate to +infinity.
/// Throws ErrorCode::enumeration_too_large when the candidate count exceeds
/// max_candidates.
std::vector<SweepRecord> sweep_all_portfolios(int k, int n, bool require_radius_one,
                                              std::uint64_t max_candidates = kDefaultSweepCap);

/// C(m, t) saturated at uint64 max; used for enumeration guards.
std::uint64_t binomial_count(int m, int t);

}  // namespace lobench
