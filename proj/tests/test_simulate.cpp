#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "lobench/errors.hpp"
#include "lobench/policy.hpp"
#include "lobench/rng.hpp"
#include "lobench/runtime.hpp"
#include "lobench/simulate.hpp"
#include "lobench/stats.hpp"

using namespace lobench;

namespace {

std::vector<double> to_doubles(const std::vector<long long>& xs) {
  return {xs.begin(), xs.end()};
}

}  // namespace

TEST_CASE("episode boundary cases") {
  const Policy p = Policy::constant(3, 1);
  const Instance inst = Instance::canonical(3);

  SUBCASE("an optimal initial sample costs zero iterations") {
    bool seen = false;
    for (std::uint64_t seed = 0; seed < 64 && !seen; ++seed) {
      Rng rng(seed);
      const EpisodeTrace t = run_rls(p, inst, rng);
      if (t.initial_fitness == 3) {
        CHECK(t.total_steps == 0);
        CHECK(t.terminal == Terminal::optimum_found);
        CHECK(t.steps.empty());
        seen = true;
      }
    }
    CHECK(seen);
  }
  SUBCASE("cutoff zero with a non-optimal start") {
    bool seen = false;
    for (std::uint64_t seed = 0; seed < 64 && !seen; ++seed) {
      Rng rng(seed);
      const EpisodeTrace t = run_rls(p, inst, rng, 0);
      if (t.initial_fitness < 3) {
        CHECK(t.total_steps == 0);
        CHECK(t.terminal == Terminal::cutoff);
        seen = true;
      }
    }
    CHECK(seen);
  }
}

TEST_CASE("trace invariants: elitism, rewards, terminals") {
  Rng rng(5);
  const Instance inst = Instance::canonical(24);
  const Portfolio k = Portfolio::of(24, {1, 3, 8});
  const Policy p = optimal_restricted_policy(k);
  for (int episode = 0; episode < 50; ++episode) {
    const EpisodeTrace t = run_rls(p, inst, rng, 600, TraceMode::full);
    CHECK(t.total_steps == static_cast<long long>(t.steps.size()));
    int prev = t.initial_fitness;
    for (const auto& s : t.steps) {
      CHECK(s.fitness_before == prev);
      CHECK(s.fitness_after >= s.fitness_before);  // elitist acceptance
      CHECK(s.reward == static_cast<double>(s.fitness_after - s.fitness_before) - 1.0);
      CHECK(k.contains(s.action_radius));
      prev = s.fitness_after;
    }
    CHECK(t.final_fitness == prev);
    if (t.terminal == Terminal::optimum_found)
      CHECK(t.final_fitness == 24);
    else
      CHECK(t.total_steps == 600);
  }
}

TEST_CASE("improvements-only traces keep totals but drop flat steps") {
  Rng rng(9);
  const Instance inst = Instance::canonical(40);
  const Policy p = Policy::constant(40, 1);
  const EpisodeTrace t = run_rls(p, inst, rng, {}, TraceMode::improvements_only);
  CHECK(t.terminal == Terminal::optimum_found);
  CHECK(t.total_steps >= static_cast<long long>(t.steps.size()));
  long long prev_step = 0;
  for (const auto& s : t.steps) {
    CHECK(s.fitness_after > s.fitness_before);
    CHECK(s.step > prev_step);
    prev_step = s.step;
  }
  // Improvements recorded cover the whole fitness climb.
  int f = t.initial_fitness;
  for (const auto& s : t.steps) {
    CHECK(s.fitness_before == f);
    f = s.fitness_after;
  }
  CHECK(f == 40);
}

TEST_CASE("constant-1 mean runtime matches n^2/2 (statistical)") {
  const int n = 50;
  const Policy p = Policy::constant(n, 1);
  const Instance inst = Instance::canonical(n);
  const RunStats stats = estimate_runtime(p, inst, 10000, 1234, {}, 2);
  const double se = stats.stddev / std::sqrt(static_cast<double>(stats.runs));
  CHECK(std::abs(stats.mean - 1250.0) < 4 * se);

  // And the exact variance formula agrees with the sample variance.
  const double exact_var = runtime_variance(p);
  const double sample_var = stats.stddev * stats.stddev;
  const double var_se = exact_var * std::sqrt(2.0 / static_cast<double>(stats.runs - 1));
  CHECK(std::abs(sample_var - exact_var) < 3 * var_se);
}

TEST_CASE("estimate_runtime is reproducible and job-count independent") {
  const Policy p = Policy::constant(20, 1);
  const Instance inst = Instance::canonical(20);
  const RunStats a = estimate_runtime(p, inst, 500, 99);
  const RunStats b = estimate_runtime(p, inst, 500, 99);
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);
  CHECK(a.min == b.min);
  CHECK(a.max == b.max);
  CHECK(sample_runtimes(p, inst, 500, 99, {}, 1) == sample_runtimes(p, inst, 500, 99, {}, 3));

  const RunStats single = estimate_runtime(p, inst, 1, 7);
  CHECK(single.runs == 1);
  CHECK(single.stddev == 0.0);
  CHECK_THROWS_AS(estimate_runtime(p, inst, 0, 7), Error);
}

TEST_CASE("initial fitness follows the 2^-(i+1) law") {
  const int n = 30;
  Rng rng(77);
  const Instance inst = Instance::canonical(n);
  const Policy p = Policy::constant(n, 1);
  const int samples = 20000;
  std::vector<int> counts(8, 0);
  for (int s = 0; s < samples; ++s) {
    const EpisodeTrace t = run_rls(p, inst, rng, 0, TraceMode::none);
    if (t.initial_fitness < 8) ++counts[static_cast<std::size_t>(t.initial_fitness)];
  }
  for (int i = 0; i < 8; ++i) {
    const double prob = std::pow(0.5, i + 1);
    const double sigma = std::sqrt(prob * (1 - prob) / samples);
    CHECK(std::abs(counts[static_cast<std::size_t>(i)] / static_cast<double>(samples) - prob) <
          4 * sigma);
  }
}

TEST_CASE("every fitness level is visited with probability 1/2") {
  const int n = 20;
  Rng rng(123);
  const Instance inst = Instance::canonical(n);
  const Policy p = optimal_restricted_policy(Portfolio::of(n, {1, 2, 6}));
  const int runs = 8000;
  std::vector<int> visited(static_cast<std::size_t>(n), 0);
  for (int run = 0; run < runs; ++run) {
    const EpisodeTrace t = run_rls(p, inst, rng, {}, TraceMode::full);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    if (t.initial_fitness < n) seen[static_cast<std::size_t>(t.initial_fitness)] = true;
    for (const auto& s : t.steps)
      if (s.fitness_after < n) seen[static_cast<std::size_t>(s.fitness_after)] = true;
    for (int i = 0; i < n; ++i)
      if (seen[static_cast<std::size_t>(i)]) ++visited[static_cast<std::size_t>(i)];
  }
  const double sigma = std::sqrt(0.25 / runs);
  for (int i = 0; i < n; ++i) {
    const double freq = visited[static_cast<std::size_t>(i)] / static_cast<double>(runs);
    CHECK(std::abs(freq - 0.5) < 4 * sigma);
  }
}

TEST_CASE("performance is instance-independent (unbiasedness)") {
  const int n = 20;
  Rng instance_rng(2024);
  const Instance canonical = Instance::canonical(n);
  const Instance shuffled = Instance::random(n, instance_rng);
  const Policy p = optimal_restricted_policy(Portfolio::of(n, {1, 2, 6}));
  const auto a = sample_runtimes(p, canonical, 5000, 11, {}, 2);
  const auto b = sample_runtimes(p, shuffled, 5000, 12, {}, 2);
  const KsResult ks = ks_two_sample(to_doubles(a), to_doubles(b));
  CHECK(ks.p_value >= 0.01);
  const double mean_a = mean_of(to_doubles(a));
  const double mean_b = mean_of(to_doubles(b));
  const double se = std::sqrt(sample_std(to_doubles(a)) * sample_std(to_doubles(a)) / 5000.0 +
                              sample_std(to_doubles(b)) * sample_std(to_doubles(b)) / 5000.0);
  CHECK(std::abs(mean_a - mean_b) < 4 * se);
}

TEST_CASE("surrogate chain matches the bit-exact simulator") {
  const int n = 20;
  const ImprovementTable table(n);
  const Instance inst = Instance::canonical(n);

  SUBCASE("constant radius 1") {
    const Policy p = Policy::constant(n, 1);
    const auto real = sample_runtimes(p, inst, 20000, 31, {}, 2);
    const auto fake = sample_runtimes_surrogate(p, table, 20000, 32, {}, 2);
    const KsResult ks = ks_two_sample(to_doubles(real), to_doubles(fake));
    CHECK(ks.p_value >= 0.01);
  }
  SUBCASE("several random policies") {
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> radii{1};
      while (static_cast<int>(radii.size()) < 3) {
        const int r = rng.uniform_int(2, n);
        bool dup = false;
        for (int existing : radii) dup = dup || existing == r;
        if (!dup) radii.push_back(r);
      }
      const Policy p = optimal_restricted_policy(Portfolio::of(n, radii));
      const auto real = sample_runtimes(p, inst, 8000, 100 + trial, {}, 2);
      const auto fake = sample_runtimes_surrogate(p, table, 8000, 200 + trial, {}, 2);
      const KsResult ks = ks_two_sample(to_doubles(real), to_doubles(fake));
      CHECK(ks.p_value >= 0.01);
    }
  }
  SUBCASE("an action with q = 0 never improves") {
    const Portfolio k = Portfolio::of(5, {0, 1});
    const Policy p = Policy::from_table(k, std::vector<int>(5, 0));
    Rng rng(3);
    const EpisodeTrace t = run_surrogate(p, 5, rng, 50);
    if (t.initial_fitness < 5) {
      CHECK(t.terminal == Terminal::cutoff);
      CHECK(t.final_fitness == t.initial_fitness);
    }
  }
}

TEST_CASE("trace CSV format") {
  EpisodeTrace t;
  t.steps = {{1, 2, 6, 2, -1.0}, {2, 2, 6, 5, 2.0}};
  std::ostringstream os;
  write_trace_csv(os, t);
  CHECK(os.str() == "step;fitness_before;action;fitness_after;reward\n1;2;6;2;-1\n2;2;6;5;2\n");
}
