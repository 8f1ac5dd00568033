#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "lobench/policy.hpp"
#include "lobench/simulate.hpp"

namespace lobench {

struct EvalRecord {
  long long train_step = 0;
  double mean = 0.0;
  double stddev = 0.0;
  bool hit = false;
};

struct OptimalStats {
  double expectation = 0.0;
  double stddev = 0.0;
};

/// Time-stamped evaluation results of one training run plus the selected
/// policies. `final_stats` holds the closing long evaluation of the best
/// checkpoint's policy.
struct ExperimentLog {
  std::vector<EvalRecord> evals;
  std::optional<Policy> best_policy;
  long long best_step = 0;
  double best_eval_mean = 0.0;
  std::optional<Policy> final_policy;
  std::optional<RunStats> final_stats;
  bool diverged = false;

  /// CSV: train_step;mean;std;hit
  void write_csv(std::ostream& os) const;
  static std::vector<EvalRecord> read_csv(std::istream& is);
};

/// One-sided hit rule: an evaluation counts iff its mean runtime is at most
/// expectation + tau * stddev of the optimal policy. The 0.0025 default is
/// the literal "0.25%" reading; the plausible 0.25 reading is what training
/// acceptance uses. Throws ErrorCode::undefined_metric on an empty log.
double hitting_ratio(const std::vector<EvalRecord>& evals, const OptimalStats& optimal,
                     double tau = 0.0025);
double hitting_ratio(const ExperimentLog& log, const OptimalStats& optimal, double tau = 0.0025);

/// Population standard deviation of consecutive evaluation-mean differences;
/// needs at least 3 evaluation records.
double ruggedness(const std::vector<EvalRecord>& evals);
double ruggedness(const ExperimentLog& log);

/// Whether an evaluation mean hits under the rule above.
bool is_hit(double mean, const OptimalStats& optimal, double tau);

}  // namespace lobench
