#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lobench/env.hpp"
#include "lobench/errors.hpp"
#include "lobench/runtime.hpp"
#include "lobench/stats.hpp"

using namespace lobench;

namespace {

// Plays the policy through the env until the episode ends; returns steps.
long long play(Env& env, const Policy& policy, double obs) {
  const auto& radii = env.spec().portfolio.radii;
  while (env.episode_active()) {
    const int radius = policy(env.fitness());
    const auto it = std::find(radii.begin(), radii.end(), radius);
    const StepResult r = env.step(static_cast<int>(it - radii.begin()));
    obs = r.observation;
    if (r.done) break;
  }
  (void)obs;
  return env.steps();
}

}  // namespace

TEST_CASE("spec defaults and observation forms") {
  const Portfolio k = Portfolio::of(50, {1, 17, 33});
  const EnvSpec spec = EnvSpec::make(50, k);
  CHECK(spec.cutoff == 2000);  // ceil(0.8 * 50^2)
  CHECK(EnvSpec::default_cutoff(3) == 8);  // ceil(7.2)
  CHECK(spec.observe(25) == 0.5);
  const EnvSpec raw = EnvSpec::make(50, k, Backend::bitstring, ObservationKind::raw_fitness);
  CHECK(raw.observe(25) == 25.0);
}

TEST_CASE("reset: observation range, determinism, init law") {
  const Portfolio k = Portfolio::of(30, {1, 2, 6});
  Env env(EnvSpec::make(30, k, Backend::bitstring, ObservationKind::raw_fitness), 42);
  SUBCASE("same seed gives the same initial observation") {
    const double a = env.reset(777);
    const double b = env.reset(777);
    CHECK(a == b);
  }
  SUBCASE("observations stay in [0..n]") {
    for (int episode = 0; episode < 100; ++episode) {
      const double obs = env.reset();
      CHECK(obs >= 0.0);
      CHECK(obs <= 30.0);
    }
  }
  SUBCASE("reset fitness follows the uniform-init law, both backends") {
    for (Backend backend : {Backend::bitstring, Backend::surrogate}) {
      Env e(EnvSpec::make(30, k, backend, ObservationKind::raw_fitness), 5);
      const int samples = 20000;
      std::vector<int> counts(6, 0);
      for (int s = 0; s < samples; ++s) {
        const int f = static_cast<int>(e.reset());
        if (f < 6) ++counts[static_cast<std::size_t>(f)];
      }
      for (int i = 0; i < 6; ++i) {
        const double prob = std::pow(0.5, i + 1);
        const double sigma = std::sqrt(prob * (1 - prob) / samples);
        CHECK(std::abs(counts[static_cast<std::size_t>(i)] / static_cast<double>(samples) - prob) <
              4.5 * sigma);
      }
    }
  }
}

TEST_CASE("step rewards and errors") {
  const Portfolio k = Portfolio::of(50, {0, 1});
  Env env(EnvSpec::make(50, k, Backend::bitstring, ObservationKind::raw_fitness), 9);
  env.reset();

  SUBCASE("a radius-0 step never improves: reward is exactly -1") {
    const int before = env.fitness();
    const StepResult r = env.step(0);
    CHECK(r.fitness == before);
    CHECK(r.reward == -1.0);
  }
  SUBCASE("improving steps pay the fitness delta minus one") {
    for (int episode = 0; episode < 20; ++episode) {
      env.reset();
      while (env.episode_active()) {
        const int before = env.fitness();
        const StepResult r = env.step(1);
        CHECK(r.reward == static_cast<double>(r.fitness - before) - 1.0);
        if (r.fitness > before) CHECK(r.reward >= 0.0);
        if (r.done) break;
      }
    }
  }
  SUBCASE("invalid action index") {
    env.reset();
    CHECK_THROWS_AS(env.step(2), Error);
    CHECK_THROWS_AS(env.step(-1), Error);
  }
  SUBCASE("stepping a finished episode fails") {
    Env tiny(EnvSpec::make(4, Portfolio::of(4, {1}), Backend::bitstring,
                           ObservationKind::raw_fitness),
             3);
    tiny.reset();
    while (tiny.episode_active()) {
      if (tiny.step(0).done) break;
    }
    CHECK_THROWS_AS(tiny.step(0), Error);
    try {
      tiny.step(0);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::episode_finished);
    }
  }
}

TEST_CASE("episodes end by cutoff when no progress is possible") {
  const Portfolio k = Portfolio::of(10, {0, 1});
  Env env(EnvSpec::make(10, k, Backend::bitstring, ObservationKind::raw_fitness, 25), 17);
  env.reset();
  if (!env.episode_active()) env.reset();
  StepResult last;
  while (env.episode_active()) {
    last = env.step(0);
    if (last.done) break;
  }
  CHECK(env.steps() == 25);
  CHECK(last.terminal == Terminal::cutoff);
}

TEST_CASE("telescoping return identity holds exactly") {
  const Portfolio k = Portfolio::of(40, {1, 5, 13});
  for (Backend backend : {Backend::bitstring, Backend::surrogate}) {
    Env env(EnvSpec::make(40, k, backend), 21);
    Rng action_rng(4);
    for (int episode = 0; episode < 50; ++episode) {
      env.reset();
      while (env.episode_active()) {
        if (env.step(action_rng.uniform_int(0, 2)).done) break;
      }
      CHECK(env.return_identity_holds());
      CHECK(env.episode_return() ==
            static_cast<double>(env.fitness() - env.initial_fitness()) -
                static_cast<double>(env.steps()));
    }
  }
}

TEST_CASE("optimal-policy episodes match the exact expected runtime") {
  const int n = 50;
  const Portfolio k = Portfolio::of(n, {1, 2, 6});
  const Policy p = optimal_restricted_policy(k);
  const double exact = expected_runtime(p);
  const double exact_std = std::sqrt(runtime_variance(p));
  Env env(EnvSpec::make(n, k), 1001);
  const int episodes = 2000;
  double total = 0.0;
  int cutoffs = 0;
  for (int e = 0; e < episodes; ++e) {
    env.reset();
    total += static_cast<double>(play(env, p, 0.0));
    if (env.fitness() < n) ++cutoffs;
  }
  const double mean = total / episodes;
  const double se = exact_std / std::sqrt(static_cast<double>(episodes));
  CHECK(std::abs(mean - exact) < 4 * se);
  CHECK(cutoffs < episodes / 20);  // the cutoff rarely binds for a good policy
}

TEST_CASE("greedy optimal return beats the constant-1 return") {
  const int n = 50;
  const Portfolio k = Portfolio::of(n, {1, 2, 6});
  const Policy opt = optimal_restricted_policy(k);
  const Policy one = Policy::from_table(k, std::vector<int>(n, 1));
  double opt_return = 0.0, one_return = 0.0;
  Env env(EnvSpec::make(n, k), 31);
  for (int e = 0; e < 2000; ++e) {
    env.reset();
    play(env, opt, 0.0);
    opt_return += env.episode_return();
    env.reset();
    play(env, one, 0.0);
    one_return += env.episode_return();
  }
  CHECK(opt_return / 2000.0 > one_return / 2000.0);
}

TEST_CASE("bitstring and surrogate backends are statistically interchangeable") {
  const int n = 20;
  const Portfolio k = Portfolio::of(n, {1, 2, 6});
  const Policy p = optimal_restricted_policy(k);
  std::vector<double> steps_bit, steps_sur, ret_bit, ret_sur;
  Env bit(EnvSpec::make(n, k, Backend::bitstring), 61);
  Env sur(EnvSpec::make(n, k, Backend::surrogate), 62);
  for (int e = 0; e < 4000; ++e) {
    bit.reset();
    play(bit, p, 0.0);
    steps_bit.push_back(static_cast<double>(bit.steps()));
    ret_bit.push_back(bit.episode_return());
    sur.reset();
    play(sur, p, 0.0);
    steps_sur.push_back(static_cast<double>(sur.steps()));
    ret_sur.push_back(sur.episode_return());
  }
  CHECK(ks_two_sample(steps_bit, steps_sur).p_value >= 0.01);
  CHECK(ks_two_sample(ret_bit, ret_sur).p_value >= 0.01);
}
