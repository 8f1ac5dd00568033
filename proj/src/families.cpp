#include "lobench/families.hpp"

#include <algorithm>
#include <limits>
#include <thread>

#include "lobench/errors.hpp"

namespace lobench {

FamilyKind family_from_string(const std::string& name) {
  if (name == "powers_of_2") return FamilyKind::powers_of_2;
  if (name == "initial_segment") return FamilyKind::initial_segment;
  if (name == "evenly_spread") return FamilyKind::evenly_spread;
  if (name == "optimal") return FamilyKind::optimal;
  throw_error(ErrorCode::invalid_argument, "unknown portfolio family: " + name);
}

std::string family_to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::powers_of_2:
      return "powers_of_2";
    case FamilyKind::initial_segment:
      return "initial_segment";
    case FamilyKind::evenly_spread:
      return "evenly_spread";
    case FamilyKind::optimal:
      return "optimal";
  }
  return "?";
}

Portfolio make_portfolio(FamilyKind kind, int k, int n) {
  if (k < 2) throw_error(ErrorCode::invalid_argument, "portfolio size must be >= 2");
  if (n < 1) throw_error(ErrorCode::invalid_argument, "dimension must be >= 1");
  std::vector<int> radii;
  switch (kind) {
    case FamilyKind::powers_of_2:
      for (int i = 0; i < k; ++i) {
        const long long p = 1LL << i;
        if (p <= n) radii.push_back(static_cast<int>(p));
      }
      break;
    case FamilyKind::initial_segment:
      for (int i = 1; i <= std::min(k, n); ++i) radii.push_back(i);
      break;
    case FamilyKind::evenly_spread: {
      const int step = n / k;
      if (step >= 1)
        for (int i = 0; i < k; ++i) radii.push_back(i * step + 1);
      break;
    }
    case FamilyKind::optimal:
      throw_error(ErrorCode::invalid_argument,
                  "the optimal family is computed by search, not generated");
  }
  if (static_cast<int>(radii.size()) != k)
    throw_error(ErrorCode::family_undefined,
                family_to_string(kind) + " is undefined for k=" + std::to_string(k) +
                    ", n=" + std::to_string(n));
  return Portfolio::of(n, std::move(radii));
}

std::uint64_t binomial_count(int m, int t) {
  if (t < 0 || t > m) return 0;
  t = std::min(t, m - t);
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (int i = 1; i <= t; ++i) {
    const std::uint64_t numer = static_cast<std::uint64_t>(m - t + i);
    if (result > cap / numer) return cap;  // saturate
    result = result * numer / static_cast<std::uint64_t>(i);
  }
  return result;
}

namespace {

// Lexicographic unranking of a t-combination of [0..m-1].
std::vector<int> unrank_combination(std::uint64_t rank, int m, int t) {
  std::vector<int> combo(static_cast<std::size_t>(t));
  int value = 0;
  for (int pos = 0; pos < t; ++pos) {
    while (true) {
      const std::uint64_t block = binomial_count(m - value - 1, t - pos - 1);
      if (rank < block) break;
      rank -= block;
      ++value;
    }
    combo[static_cast<std::size_t>(pos)] = value;
    ++value;
  }
  return combo;
}

// Advances a t-combination of [0..m-1] in lexicographic order.
bool next_combination(std::vector<int>& combo, int m) {
  const int t = static_cast<int>(combo.size());
  for (int pos = t - 1; pos >= 0; --pos) {
    if (combo[static_cast<std::size_t>(pos)] < m - (t - pos)) {
      ++combo[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < t; ++j)
        combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct ChunkBest {
  double runtime = std::numeric_limits<double>::infinity();
  std::uint64_t rank = 0;
};

}  // namespace

SearchResult search_optimal_portfolio(int k, int n, int jobs) {
  if (k < 2 || k > n)
    throw_error(ErrorCode::invalid_argument,
                "portfolio size must satisfy 2 <= k <= n (got k=" + std::to_string(k) +
                    ", n=" + std::to_string(n) + ")");
  const ImprovementTable table(n);
  const int m = n - 1;  // candidate radii 2..n
  const int t = k - 1;
  const std::uint64_t total = binomial_count(m, t);

  const int workers = std::min<std::uint64_t>(resolve_jobs(jobs), total);
  std::vector<ChunkBest> best(static_cast<std::size_t>(workers));

  auto run_chunk = [&](int w) {
    const std::uint64_t lo = total * static_cast<std::uint64_t>(w) / workers;
    const std::uint64_t hi = total * (static_cast<std::uint64_t>(w) + 1) / workers;
    if (lo >= hi) return;
    std::vector<int> combo = unrank_combination(lo, m, t);
    std::vector<int> radii(static_cast<std::size_t>(k));
    radii[0] = 1;
    OptimalRuntimeScratch scratch;
    ChunkBest local;
    for (std::uint64_t rank = lo; rank < hi; ++rank) {
      for (int j = 0; j < t; ++j)
        radii[static_cast<std::size_t>(j) + 1] = combo[static_cast<std::size_t>(j)] + 2;
      const double e = optimal_expected_runtime_unchecked(radii.data(), k, table, scratch);
      if (e < local.runtime) {
        local.runtime = e;
        local.rank = rank;
      }
      if (rank + 1 < hi) next_combination(combo, m);
    }
    best[static_cast<std::size_t>(w)] = local;
  };

  if (workers <= 1) {
    run_chunk(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(run_chunk, w);
    for (auto& th : threads) th.join();
  }

  // Chunks are rank-ordered, so taking the first strict improvement keeps
  // ties at the lexicographically smallest portfolio.
  ChunkBest overall;
  for (const auto& b : best)
    if (b.runtime < overall.runtime) overall = b;

  std::vector<int> combo = unrank_combination(overall.rank, m, t);
  std::vector<int> radii(static_cast<std::size_t>(k));
  radii[0] = 1;
  for (int j = 0; j < t; ++j)
    radii[static_cast<std::size_t>(j) + 1] = combo[static_cast<std::size_t>(j)] + 2;
  Portfolio winner = Portfolio::of(n, radii);
  const Policy policy = optimal_restricted_policy(winner, table);
  SearchResult result;
  result.portfolio = std::move(winner);
  result.moments = runtime_moments(policy, table);
  result.candidates = total;
  return result;
}

std::vector<SweepRecord> sweep_all_portfolios(int k, int n, bool require_radius_one,
                                              std::uint64_t max_candidates) {
  if (k < 2 || k > n)
    throw_error(ErrorCode::invalid_argument, "portfolio size must satisfy 2 <= k <= n");
  const int m = require_radius_one ? n - 1 : n;
  const int t = require_radius_one ? k - 1 : k;
  const std::uint64_t total = binomial_count(m, t);
  if (total > max_candidates)
    throw_error(ErrorCode::enumeration_too_large,
                std::to_string(total) + " portfolios exceed the cap of " +
                    std::to_string(max_candidates) +
                    "; raise the cap explicitly for large sweeps");
  const ImprovementTable table(n);
  const double n2 = static_cast<double>(n) * n;

  std::vector<SweepRecord> records;
  records.reserve(static_cast<std::size_t>(total));
  std::vector<int> combo(static_cast<std::size_t>(t));
  for (int j = 0; j < t; ++j) combo[static_cast<std::size_t>(j)] = j;
  std::vector<int> radii(static_cast<std::size_t>(k));
  OptimalRuntimeScratch scratch;
  const int offset = require_radius_one ? 2 : 1;  // candidate pool starts at this radius
  for (std::uint64_t rank = 0; rank < total; ++rank) {
    if (require_radius_one) radii[0] = 1;
    for (int j = 0; j < t; ++j)
      radii[static_cast<std::size_t>(j) + (require_radius_one ? 1 : 0)] =
          combo[static_cast<std::size_t>(j)] + offset;
    const double e = optimal_expected_runtime_unchecked(radii.data(), k, table, scratch);
    records.push_back({radii, e, e / n2});
    if (rank + 1 < total) next_combination(combo, m);
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const SweepRecord& a, const SweepRecord& b) {
                     return a.expected_runtime < b.expected_runtime;
                   });
  return records;
}

}  // namespace lobench
