#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "lobench/bitstring.hpp"
#include "lobench/improvement.hpp"
#include "lobench/portfolio.hpp"
#include "lobench/rng.hpp"
#include "lobench/simulate.hpp"

namespace lobench {

enum class ObservationKind { raw_fitness, normalized_fitness };

/// Environment description: observation = fitness (raw or divided by n),
/// action = index into the portfolio, reward = fitness delta minus one,
/// episode cutoff ceil(0.8 n^2) by default.
struct EnvSpec {
  int n = 0;
  Portfolio portfolio;
  long long cutoff = 0;
  Backend backend = Backend::bitstring;
  ObservationKind observation = ObservationKind::normalized_fitness;

  static long long default_cutoff(int n) { return (8LL * n * n + 9) / 10; }

  static EnvSpec make(int n, Portfolio portfolio, Backend backend = Backend::bitstring,
                      ObservationKind observation = ObservationKind::normalized_fitness,
                      std::optional<long long> cutoff = {});

  double observe(int fitness) const {
    return observation == ObservationKind::raw_fitness
               ? static_cast<double>(fitness)
               : static_cast<double>(fitness) / static_cast<double>(n);
  }
};

struct StepResult {
  double observation = 0.0;
  double reward = 0.0;
  bool done = false;
  std::optional<Terminal> terminal;  // set iff done
  int fitness = 0;
};

/// One mutable episode at a time; create one instance per thread for parallel
/// rollouts. The instance (context) is fixed to the canonical one; the
/// operator is unbiased, so performance is identical on every (z, sigma)
/// variant.
class Env {
 public:
  Env(EnvSpec spec, std::uint64_t seed);

  /// Starts a new episode and returns the initial observation.
  double reset();
  double reset(std::uint64_t seed);

  /// One iteration with radius portfolio[action_index]. Throws
  /// ErrorCode::episode_finished after done, ErrorCode::invalid_action for an
  /// out-of-range index.
  StepResult step(int action_index);

  bool episode_active() const { return active_; }
  int fitness() const { return fitness_; }
  int initial_fitness() const { return initial_fitness_; }
  long long steps() const { return steps_; }
  double episode_return() const { return return_; }
  const EnvSpec& spec() const { return spec_; }

  /// Telescoping diagnostic: sum of rewards == (fitness - initial) - steps.
  bool return_identity_holds() const;

 private:
  EnvSpec spec_;
  Instance instance_;
  std::shared_ptr<const ImprovementTable> table_;  // surrogate backend only
  Rng rng_;
  BitString x_;
  SubsetSampler sampler_;
  std::vector<int> positions_;
  int fitness_ = 0;
  int initial_fitness_ = 0;
  long long steps_ = 0;
  double return_ = 0.0;
  bool active_ = false;
};

}  // namespace lobench
