#include "lobench/env.hpp"

#include <string>

#include "lobench/errors.hpp"

namespace lobench {

EnvSpec EnvSpec::make(int n, Portfolio portfolio, Backend backend, ObservationKind observation,
                      std::optional<long long> cutoff) {
  if (n < 1) throw_error(ErrorCode::invalid_argument, "dimension must be >= 1");
  if (portfolio.n != n) throw_error(ErrorCode::invalid_argument, "portfolio dimension mismatch");
  EnvSpec spec;
  spec.n = n;
  spec.portfolio = std::move(portfolio);
  spec.backend = backend;
  spec.observation = observation;
  spec.cutoff = cutoff ? *cutoff : default_cutoff(n);
  if (spec.cutoff < 1) throw_error(ErrorCode::invalid_argument, "cutoff must be >= 1");
  return spec;
}

Env::Env(EnvSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)),
      instance_(Instance::canonical(spec_.n)),
      rng_(seed),
      sampler_(spec_.n) {
  if (spec_.backend == Backend::surrogate)
    table_ = std::make_shared<const ImprovementTable>(spec_.n);
}

double Env::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  return reset();
}

double Env::reset() {
  if (spec_.backend == Backend::bitstring) {
    x_ = random_bitstring(spec_.n, rng_);
    fitness_ = leading_ones(x_, instance_);
  } else {
    fitness_ = 0;
    while (fitness_ < spec_.n && rng_.coin()) ++fitness_;
  }
  initial_fitness_ = fitness_;
  steps_ = 0;
  return_ = 0.0;
  active_ = fitness_ < spec_.n;  // an optimal start has nothing left to do
  return spec_.observe(fitness_);
}

StepResult Env::step(int action_index) {
  if (!active_)
    throw_error(ErrorCode::episode_finished, "episode is finished; call reset()");
  if (action_index < 0 || action_index >= spec_.portfolio.size())
    throw_error(ErrorCode::invalid_action,
                "action index " + std::to_string(action_index) + " outside [0.." +
                    std::to_string(spec_.portfolio.size() - 1) + "]");
  const int radius = spec_.portfolio.radii[static_cast<std::size_t>(action_index)];
  const int before = fitness_;
  if (spec_.backend == Backend::bitstring) {
    sampler_.sample(radius, rng_, positions_);
    for (int pos : positions_) x_[static_cast<std::size_t>(pos)] ^= 1u;
    const int offspring = leading_ones(x_, instance_);
    if (offspring >= fitness_)
      fitness_ = offspring;
    else
      for (int pos : positions_) x_[static_cast<std::size_t>(pos)] ^= 1u;
  } else {
    if (rng_.bernoulli(table_->q(radius, fitness_))) {
      ++fitness_;
      while (fitness_ < spec_.n && rng_.coin()) ++fitness_;
    }
  }
  ++steps_;

  StepResult result;
  result.fitness = fitness_;
  result.observation = spec_.observe(fitness_);
  result.reward = static_cast<double>(fitness_ - before) - 1.0;
  return_ += result.reward;
  if (fitness_ == spec_.n) {
    result.done = true;
    result.terminal = Terminal::optimum_found;
  } else if (steps_ >= spec_.cutoff) {
    result.done = true;
    result.terminal = Terminal::cutoff;
  }
  if (result.done) active_ = false;
  return result;
}

bool Env::return_identity_holds() const {
  return return_ == static_cast<double>(fitness_ - initial_fitness_) - static_cast<double>(steps_);
}

}  // namespace lobench
