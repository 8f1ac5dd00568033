#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "lobench/errors.hpp"
#include "lobench/improvement.hpp"
#include "lobench/policy.hpp"
#include "lobench/portfolio.hpp"
#include "lobench/rng.hpp"
#include "lobench/runtime.hpp"

using namespace lobench;

namespace {

const ImprovementTable& table_for(int n) {
  static std::map<int, ImprovementTable> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, ImprovementTable(n)).first;
  return it->second;
}

Portfolio random_solvable_portfolio(int n, int k, Rng& rng) {
  std::vector<int> radii{1};
  while (static_cast<int>(radii.size()) < k) {
    const int r = rng.uniform_int(2, n);
    if (std::find(radii.begin(), radii.end(), r) == radii.end()) radii.push_back(r);
  }
  return Portfolio::of(n, std::move(radii));
}

}  // namespace

TEST_CASE("portfolio basics") {
  const Portfolio k = Portfolio::of(50, {6, 1, 2});
  CHECK(k.radii == std::vector<int>{1, 2, 6});
  CHECK(k.solvable());
  CHECK(k.descending() == std::vector<int>{6, 2, 1});
  CHECK(k.to_string() == "1 2 6");
  CHECK_FALSE(Portfolio::of(50, {2, 4}).solvable());
  CHECK_THROWS_AS(Portfolio::of(50, {1, 2, 2}), Error);
  CHECK_THROWS_AS(Portfolio::of(50, {1, 51}), Error);
  CHECK_THROWS_AS(Portfolio::of(50, std::vector<int>{}), Error);
  CHECK(parse_portfolio(50, "1,2,6").radii == std::vector<int>{1, 2, 6});
  CHECK(parse_portfolio(50, "6 2 1").radii == std::vector<int>{1, 2, 6});
}

TEST_CASE("policy lookup, both representations") {
  const Portfolio k = Portfolio::of(50, {1, 2, 6});
  const Policy p = Policy::from_breakpoints(k, {11, 24});
  CHECK(p(0) == 6);
  CHECK(p(11) == 6);
  CHECK(p(12) == 2);
  CHECK(p(24) == 2);
  CHECK(p(25) == 1);
  CHECK(p(49) == 1);
  CHECK_THROWS_AS(p(-1), Error);
  CHECK_THROWS_AS(p(50), Error);

  const Policy single = Policy::constant(50, 1);
  for (int i = 0; i < 50; ++i) CHECK(single(i) == 1);

  std::vector<int> tab(50, 2);
  tab[0] = 6;
  const Policy pt = Policy::from_table(k, tab);
  CHECK(pt(0) == 6);
  CHECK(pt(17) == 2);
}

TEST_CASE("policy representation conversions") {
  const Portfolio k = Portfolio::of(50, {1, 2, 6});
  const Policy bp = Policy::from_breakpoints(k, {11, 24});
  const Policy tab = bp.to_table();
  CHECK(tab.is_table());
  CHECK(tab.to_breakpoints().breakpoints() == std::vector<int>{11, 24});

  // Constant table over a single-radius portfolio has no breaking points.
  const Policy c = Policy::from_table(Portfolio::of(50, {2}), std::vector<int>(50, 2));
  CHECK(c.to_breakpoints().breakpoints().empty());

  // Non-monotone table cannot be encoded.
  std::vector<int> bad(50, 1);
  bad[30] = 6;
  CHECK_THROWS_AS(Policy::from_table(k, bad).to_breakpoints(), Error);

  // Unused largest radius encodes as a -1 breakpoint and survives round trip.
  const Policy unused = Policy::from_breakpoints(k, {-1, 24});
  CHECK(unused(0) == 2);
  CHECK(unused.to_table().to_breakpoints().breakpoints() == std::vector<int>{-1, 24});
}

TEST_CASE("conversion round trips on random monotone tables") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(2, 80);
    const Portfolio k = random_solvable_portfolio(n, rng.uniform_int(1, std::min(6, n)), rng);
    // Random non-increasing table over the portfolio.
    std::vector<int> tab(static_cast<std::size_t>(n));
    int idx = k.size() - 1;
    for (int i = 0; i < n; ++i) {
      while (idx > 0 && rng.bernoulli(0.1)) --idx;
      tab[static_cast<std::size_t>(i)] = k.radii[static_cast<std::size_t>(idx)];
    }
    std::sort(tab.rbegin(), tab.rend());
    const Policy p = Policy::from_table(k, tab);
    const Policy bp = p.to_breakpoints();
    CHECK(bp.to_table().table() == p.table());
    CHECK(bp.to_table().to_breakpoints().breakpoints() == bp.breakpoints());
  }
}

TEST_CASE("policy text serialization round trips") {
  const Portfolio k = Portfolio::of(50, {1, 2, 6});
  const Policy bp = Policy::from_breakpoints(k, {11, 24});
  CHECK(Policy::parse(bp.serialize()) == bp);
  CHECK(bp.serialize() == "n: 50\nportfolio: 1,2,6\nbreakpoints: 11,24\n");

  const Policy tab = bp.to_table();
  CHECK(Policy::parse(tab.serialize()) == tab);

  const Policy single = Policy::constant(7, 1);
  CHECK(Policy::parse(single.serialize()) == single);

  CHECK_THROWS_AS(Policy::parse("garbage"), Error);
  CHECK_THROWS_AS(Policy::parse("table: 1,1\n"), Error);
}

TEST_CASE("breaking points: published and derived values") {
  SUBCASE("K={1,2,6}, n=50") {
    const auto bp = breaking_points_linear(Portfolio::of(50, {1, 2, 6}), table_for(50));
    CHECK(bp == std::vector<int>{11, 24});
  }
  SUBCASE("K={1,2,4}, n=100") {
    const auto bp = breaking_points_linear(Portfolio::of(100, {1, 2, 4}), table_for(100));
    CHECK(bp == std::vector<int>{28, 49});
  }
  SUBCASE("K={1,2}: single breakpoint floor((n-1)/2)") {
    for (int n : {5, 20, 50, 77, 100}) {
      const auto bp = breaking_points_linear(Portfolio::of(n, {1, 2}), table_for(n));
      CHECK(bp == std::vector<int>{(n - 1) / 2});
    }
  }
  SUBCASE("K={1} has no breaking points") {
    CHECK(breaking_points_linear(Portfolio::of(30, {1}), table_for(30)).empty());
    CHECK(breaking_points_bisect(Portfolio::of(30, {1}), table_for(30)).empty());
  }
  SUBCASE("portfolio without radius 1 is rejected") {
    CHECK_THROWS_AS(breaking_points_linear(Portfolio::of(30, {2, 3}), table_for(30)), Error);
    CHECK_THROWS_AS(breaking_points_bisect(Portfolio::of(30, {2, 3}), table_for(30)), Error);
  }
}

TEST_CASE("bisection equals the linear scan") {
  SUBCASE("exhaustive over all size-3 portfolios containing 1, n=50") {
    const auto& table = table_for(50);
    for (int a = 2; a <= 49; ++a)
      for (int b = a + 1; b <= 50; ++b) {
        const Portfolio k = Portfolio::of(50, {1, a, b});
        CHECK(breaking_points_bisect(k, table) == breaking_points_linear(k, table));
      }
  }
  SUBCASE("randomized portfolios, several dimensions") {
    Rng rng(33);
    for (int trial = 0; trial < 2000; ++trial) {
      const int n = rng.uniform_int(2, 150);
      const Portfolio k = random_solvable_portfolio(n, rng.uniform_int(1, std::min(8, n)), rng);
      CHECK(breaking_points_bisect(k, table_for(n)) == breaking_points_linear(k, table_for(n)));
    }
  }
}

TEST_CASE("optimal restricted policy") {
  SUBCASE("full portfolio reduces to floor(n/(i+1))") {
    for (int n : {5, 50, 73}) {
      const Policy p = optimal_restricted_policy(Portfolio::full(n), table_for(n));
      for (int i = 0; i < n; ++i) CHECK(p(i) == n / (i + 1));
      const Policy direct = optimal_full_policy(n);
      CHECK(p.table() == direct.table());
    }
  }
  SUBCASE("K={1,2,6}, n=50 published segments") {
    const Policy p = optimal_restricted_policy(Portfolio::of(50, {1, 2, 6}), table_for(50));
    for (int i = 0; i <= 11; ++i) CHECK(p(i) == 6);
    for (int i = 12; i <= 24; ++i) CHECK(p(i) == 2);
    for (int i = 25; i <= 49; ++i) CHECK(p(i) == 1);
  }
  SUBCASE("K={1,17,33}, n=50: radius 1 from fitness 7 on") {
    const Policy p = optimal_restricted_policy(Portfolio::of(50, {1, 17, 33}), table_for(50));
    for (int i = 7; i < 50; ++i) CHECK(p(i) == 1);
  }
  SUBCASE("monotone non-increasing, randomized") {
    Rng rng(41);
    for (int trial = 0; trial < 500; ++trial) {
      const int n = rng.uniform_int(2, 120);
      const Portfolio k = random_solvable_portfolio(n, rng.uniform_int(1, std::min(8, n)), rng);
      const Policy p = optimal_restricted_policy(k, table_for(n));
      for (int i = 1; i < n; ++i) CHECK(p(i) <= p(i - 1));
    }
  }
}

TEST_CASE("expected runtime") {
  SUBCASE("constant radius 1 is exactly n^2/2") {
    CHECK(expected_runtime(Policy::constant(50, 1), table_for(50)) == 1250.0);
    CHECK(expected_runtime(Policy::constant(100, 1), table_for(100)) == 5000.0);
  }
  SUBCASE("optimal policy for K={1,4}, n=50 (exact closed form 0.4098306452)") {
    const Policy p = optimal_restricted_policy(Portfolio::of(50, {1, 4}), table_for(50));
    CHECK(expected_runtime(p, table_for(50)) / 2500.0 ==
          doctest::Approx(0.4098306452).epsilon(1e-9));
  }
  SUBCASE("a level with q = 0 makes the expectation infinite") {
    const Portfolio k = Portfolio::of(20, {0, 1});
    std::vector<int> tab(20, 1);
    tab[3] = 0;
    CHECK(expected_runtime(Policy::from_table(k, tab), table_for(20)) ==
          std::numeric_limits<double>::infinity());
  }
  SUBCASE("full-portfolio optimum at n=50 sits in the published bracket") {
    const double e = expected_runtime(optimal_full_policy(50), table_for(50)) / 2500.0;
    CHECK(e > 0.387);
    CHECK(e < 0.390);
    CHECK(e <= 0.3882052);
  }
}

TEST_CASE("runtime variance") {
  SUBCASE("single level with q = 1") {
    // n=1: variance of A*G with q=1 is 1/2 - 1/4 = 1/4.
    CHECK(runtime_variance(Policy::constant(1, 1), table_for(1)) == 0.25);
  }
  SUBCASE("constant radius 1, n=50: 50 * (3 - 2/50) / (4/2500)") {
    const double expected = 50.0 * (3.0 - 2.0 / 50.0) * 2500.0 / 4.0;
    CHECK(runtime_variance(Policy::constant(50, 1), table_for(50)) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("non-negative on random policies") {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = rng.uniform_int(2, 100);
      const Portfolio k = random_solvable_portfolio(n, rng.uniform_int(1, std::min(6, n)), rng);
      CHECK(runtime_variance(optimal_restricted_policy(k, table_for(n)), table_for(n)) >= 0.0);
    }
  }
}

TEST_CASE("breakpoint decoding and per-fitness argmax agree in expected runtime") {
  Rng rng(67);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = rng.uniform_int(2, 100);
    const Portfolio k = random_solvable_portfolio(n, rng.uniform_int(1, std::min(8, n)), rng);
    const auto& table = table_for(n);
    const Policy argmax = optimal_restricted_policy(k, table);
    const Policy decoded = Policy::from_breakpoints(k, breaking_points_linear(k, table));
    const double ea = expected_runtime(argmax, table);
    const double ed = expected_runtime(decoded, table);
    CHECK(ed == doctest::Approx(ea).epsilon(1e-12));
    // Fast path used by the brute-force search agrees too.
    CHECK(optimal_expected_runtime(k, table) == doctest::Approx(ea).epsilon(1e-12));
  }
}

TEST_CASE("portfolio dominance and sanity bounds") {
  Rng rng(71);
  SUBCASE("supersets never hurt") {
    for (int trial = 0; trial < 300; ++trial) {
      const int n = rng.uniform_int(3, 80);
      const Portfolio sub = random_solvable_portfolio(n, rng.uniform_int(1, 4), rng);
      std::vector<int> extended = sub.radii;
      const int extra = rng.uniform_int(2, n);
      if (std::find(extended.begin(), extended.end(), extra) == extended.end())
        extended.push_back(extra);
      const Portfolio super = Portfolio::of(n, extended);
      CHECK(optimal_expected_runtime(super, table_for(n)) <=
            optimal_expected_runtime(sub, table_for(n)) + 1e-9);
    }
  }
  SUBCASE("optimal runtimes of solvable portfolios sit in [0.387, 0.5] n^2") {
    for (int n : {50, 100}) {
      for (int trial = 0; trial < 200; ++trial) {
        const Portfolio k = random_solvable_portfolio(n, rng.uniform_int(1, 8), rng);
        const double e = optimal_expected_runtime(k, table_for(n)) / (static_cast<double>(n) * n);
        CHECK(e >= 0.387);
        CHECK(e <= 0.5 + 1e-12);
      }
    }
  }
}
