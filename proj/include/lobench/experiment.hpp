#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lobench/agents.hpp"
#include "lobench/env.hpp"
#include "lobench/errors.hpp"
#include "lobench/families.hpp"
#include "lobench/metrics.hpp"

namespace lobench {

/// Everything one training run needs. Unset budget/cutoff (-1) resolve to the
/// protocol defaults: budget 10^6 steps for n <= 50 and 1.4*10^6 beyond;
/// cutoff ceil(0.8 n^2). Periodic evaluations run the frozen greedy policy
/// empirically every eval_period steps.
struct ExperimentConfig {
  int n = 50;
  std::string family = "evenly_spread";  // used when radii is empty; "optimal" searches
  int k = 3;
  std::vector<int> radii;  // explicit portfolio, wins over family/k

  std::string agent = "ddqn";  // "ddqn" | "tabular"
  long long budget = -1;
  long long eval_period = 2000;
  int eval_runs = 50;
  int final_runs = 2000;
  double tau = 0.25;                  // hit threshold in units of the optimal std
  bool empirical_optimal_std = false; // use a final_runs estimate instead of the exact variance
  Backend backend = Backend::bitstring;
  long long cutoff = -1;
  std::uint64_t seed = 1;
  int jobs = 1;  // evaluation rollout parallelism

  DdqnConfig ddqn;          // .actions filled from the portfolio
  QLearningConfig tabular;  // .alpha is the schedule's starting value
  double tabular_alpha_min = 0.01;
  long long tabular_alpha_halflife = 0;  // 0: budget / 50
  double tabular_average_from = 0.5;     // budget fraction; >= 1 disables tail averaging

  Portfolio resolve_portfolio() const;
  long long resolve_budget() const;
  long long resolve_cutoff() const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Divergence carries the progress made so far, best checkpoint included.
class TrainingDivergedError : public Error {
 public:
  TrainingDivergedError(const std::string& msg, ExperimentLog log)
      : Error(ErrorCode::training_diverged, msg), log_(std::move(log)) {}
  const ExperimentLog& partial_log() const { return log_; }

 private:
  ExperimentLog log_;
};

struct ResumeState {
  nlohmann::json agent_checkpoint;
  long long completed_steps = 0;
  std::vector<EvalRecord> evals;
  std::optional<Policy> best_policy;  // carried over so best tracking survives
  double best_eval_mean = 0.0;
  long long best_step = 0;
};

/// Exact expectation of the optimal policy plus its standard deviation (exact
/// variance by default, empirical behind the config flag).
OptimalStats optimal_stats_for(const ExperimentConfig& config, const Portfolio& portfolio,
                               const ImprovementTable& table);

/// Runs one seeded training: environment rollout, per-step learning once the
/// agent is ready, an evaluation at step 0 and every eval_period steps, best
/// checkpoint by evaluation mean, and a closing final_runs evaluation of the
/// best policy. Deterministic given (config, seed). Throws
/// TrainingDivergedError on a non-finite loss.
ExperimentLog train(const ExperimentConfig& config, const ResumeState* resume = nullptr);

/// Final agent state of a run (for checkpointing/resume), produced alongside
/// the log by train_with_checkpoint.
struct TrainOutcome {
  ExperimentLog log;
  nlohmann::json final_agent;
};
TrainOutcome train_with_checkpoint(const ExperimentConfig& config,
                                   const ResumeState* resume = nullptr);

}  // namespace lobench
