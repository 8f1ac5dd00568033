#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "lobench/errors.hpp"
#include "lobench/families.hpp"
#include "lobench/runtime.hpp"

using namespace lobench;

TEST_CASE("named families generate the quoted sets") {
  CHECK(make_portfolio(FamilyKind::evenly_spread, 3, 50).radii == std::vector<int>{1, 17, 33});
  CHECK(make_portfolio(FamilyKind::powers_of_2, 5, 50).radii == std::vector<int>{1, 2, 4, 8, 16});
  CHECK(make_portfolio(FamilyKind::initial_segment, 4, 100).radii == std::vector<int>{1, 2, 3, 4});
  CHECK(make_portfolio(FamilyKind::evenly_spread, 4, 50).radii == std::vector<int>{1, 13, 25, 37});
  // 2^5 = 32 <= 50, so size 6 still yields six distinct radii.
  CHECK(make_portfolio(FamilyKind::powers_of_2, 6, 50).radii ==
        std::vector<int>{1, 2, 4, 8, 16, 32});
}

TEST_CASE("undefined family parameters are rejected") {
  CHECK_THROWS_AS(make_portfolio(FamilyKind::powers_of_2, 7, 50), Error);   // 2^6 > 50
  CHECK_THROWS_AS(make_portfolio(FamilyKind::evenly_spread, 51, 50), Error);
  CHECK_THROWS_AS(make_portfolio(FamilyKind::initial_segment, 101, 100), Error);
  CHECK_THROWS_AS(make_portfolio(FamilyKind::optimal, 3, 50), Error);
  CHECK_THROWS_AS(make_portfolio(FamilyKind::powers_of_2, 1, 50), Error);
  CHECK(family_from_string("powers_of_2") == FamilyKind::powers_of_2);
  CHECK_THROWS_AS(family_from_string("nope"), Error);
}

TEST_CASE("brute-force optimal portfolio search") {
  SUBCASE("k=2, n=50: {1,4}, exact value 0.4098306452") {
    const SearchResult r = search_optimal_portfolio(2, 50);
    CHECK(r.portfolio.radii == std::vector<int>{1, 4});
    CHECK(r.moments.expectation / 2500.0 == doctest::Approx(0.4098306452).epsilon(1e-9));
    CHECK(r.candidates == 49);
  }
  SUBCASE("k=3, n=50: {1,2,6}, 0.39568") {
    const SearchResult r = search_optimal_portfolio(3, 50);
    CHECK(r.portfolio.radii == std::vector<int>{1, 2, 6});
    CHECK(r.moments.expectation / 2500.0 == doctest::Approx(0.39568).epsilon(1e-6));
  }
  SUBCASE("k=4, n=100: {1,2,4,11}, 0.391403") {
    const SearchResult r = search_optimal_portfolio(4, 100, 2);
    CHECK(r.portfolio.radii == std::vector<int>{1, 2, 4, 11});
    CHECK(r.moments.expectation / 10000.0 == doctest::Approx(0.391403).epsilon(1e-6));
  }
  SUBCASE("result independent of parallelism") {
    const SearchResult a = search_optimal_portfolio(4, 50, 1);
    const SearchResult b = search_optimal_portfolio(4, 50, 3);
    CHECK(a.portfolio == b.portfolio);
    CHECK(a.moments.expectation == b.moments.expectation);
    CHECK(a.portfolio.radii == std::vector<int>{1, 2, 4, 11});
  }
  SUBCASE("invalid sizes") {
    CHECK_THROWS_AS(search_optimal_portfolio(1, 50), Error);
    CHECK_THROWS_AS(search_optimal_portfolio(51, 50), Error);
  }
}

TEST_CASE("optimal portfolio beats every named family of the same size") {
  const ImprovementTable table(50);
  for (int k : {3, 4, 5}) {
    const double best = search_optimal_portfolio(k, 50).moments.expectation;
    for (FamilyKind kind :
         {FamilyKind::powers_of_2, FamilyKind::initial_segment, FamilyKind::evenly_spread}) {
      const double e = optimal_expected_runtime(make_portfolio(kind, k, 50), table);
      CHECK(best <= e + 1e-9);
    }
  }
}

TEST_CASE("family ordering at n=50: optimal <= powers_of_2 <= initial_segment <= evenly_spread") {
  const ImprovementTable table(50);
  for (int k : {3, 4, 5}) {
    const double opt = search_optimal_portfolio(k, 50).moments.expectation;
    const double pow2 = optimal_expected_runtime(make_portfolio(FamilyKind::powers_of_2, k, 50), table);
    const double iseg =
        optimal_expected_runtime(make_portfolio(FamilyKind::initial_segment, k, 50), table);
    const double espr =
        optimal_expected_runtime(make_portfolio(FamilyKind::evenly_spread, k, 50), table);
    CHECK(opt <= pow2 + 1e-9);
    CHECK(pow2 <= iseg + 1e-9);
    CHECK(iseg <= espr + 1e-9);
  }
}

TEST_CASE("optimal portfolios coincide for n=50 and n=100 when k <= 4") {
  for (int k : {2, 3, 4}) {
    const SearchResult a = search_optimal_portfolio(k, 50, 2);
    const SearchResult b = search_optimal_portfolio(k, 100, 2);
    CHECK(a.portfolio.radii == b.portfolio.radii);
  }
}

TEST_CASE("optimal expected runtime is non-increasing in k") {
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 2; k <= 5; ++k) {
    const double e = search_optimal_portfolio(k, 50, 2).moments.expectation;
    CHECK(e <= prev + 1e-9);
    prev = e;
  }
}

TEST_CASE("portfolio sweep") {
  SUBCASE("k=3, n=50: exactly C(49,2) = 1176 records, min matches the search") {
    const auto records = sweep_all_portfolios(3, 50, true);
    CHECK(records.size() == 1176);
    CHECK(records.front().expected_runtime / 2500.0 == doctest::Approx(0.39568).epsilon(1e-6));
    CHECK(records.front().radii == std::vector<int>{1, 2, 6});
    // Sorted ascending => the cumulative fraction is a valid CDF from 0 to 1.
    for (std::size_t i = 1; i < records.size(); ++i)
      CHECK(records[i].expected_runtime >= records[i - 1].expected_runtime);
    for (const auto& rec : records)
      CHECK(rec.normalized == doctest::Approx(rec.expected_runtime / 2500.0));
  }
  SUBCASE("cap exceeded raises enumeration-too-large") {
    CHECK_THROWS_AS(sweep_all_portfolios(3, 50, true, 100), Error);
    try {
      sweep_all_portfolios(3, 50, true, 100);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::enumeration_too_large);
      CHECK(e.exit_code() == 3);
    }
  }
  SUBCASE("without the radius-1 restriction, unsolvable portfolios rank last at +infinity") {
    const auto records = sweep_all_portfolios(2, 12, false);
    CHECK(records.size() == binomial_count(12, 2));
    CHECK(std::isinf(records.back().expected_runtime));
    CHECK(!std::isinf(records.front().expected_runtime));
  }
}

TEST_CASE("binomial counting saturates instead of overflowing") {
  CHECK(binomial_count(49, 2) == 1176);
  CHECK(binomial_count(5, 0) == 1);
  CHECK(binomial_count(5, 6) == 0);
  CHECK(binomial_count(200, 100) == std::numeric_limits<std::uint64_t>::max());
}
