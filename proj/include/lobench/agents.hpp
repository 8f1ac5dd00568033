#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lobench/env.hpp"
#include "lobench/mlp.hpp"
#include "lobench/policy.hpp"
#include "lobench/rng.hpp"

namespace lobench {

struct Transition {
  double obs = 0.0;
  int action = 0;
  double reward = 0.0;
  double next_obs = 0.0;
  bool next_terminal = false;  // optimum reached: no bootstrap
  bool truncated = false;      // cutoff hit: bootstrap is a config choice
};

/// Ring buffer with oldest-first eviction. Batch sampling is uniform without
/// replacement, O(batch) via a persistent index permutation.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(const Transition& t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return data_[i]; }

  /// Fills out with `batch` distinct entries; batch must not exceed size().
  void sample(std::size_t batch, Rng& rng, std::vector<Transition>& out);

 private:
  std::size_t capacity_;
  std::vector<Transition> data_;
  std::size_t write_ = 0;
  std::vector<std::uint32_t> order_;
};

// ---------------------------------------------------------------------------
// Tabular Q-learning
// ---------------------------------------------------------------------------

struct QLearningConfig {
  double alpha = 0.5;  // starting value; the training loop decays it
  double gamma = 1.0;
  double epsilon = 0.2;
  bool bootstrap_on_truncation = true;
};

class QLearningAgent {
 public:
  QLearningAgent(int num_states, int num_actions, QLearningConfig config);

  /// Epsilon-greedy unless greedy is set; argmax ties go to the lowest index.
  int select_action(int state, Rng& rng, bool greedy) const;
  int greedy_action(int state) const;

  /// Temporal-difference update; terminal transitions use a zero bootstrap.
  void update(int state, int action, double reward, int next_state, bool terminal);

  /// From this update on, maintain a running (Polyak) average of the table.
  /// The averaged table is the low-noise value estimate policies are read
  /// from once the learning rate no longer vanishes fast enough.
  void begin_averaging();
  bool averaging() const { return average_count_ > 0; }
  double averaged_q(int state, int action) const;
  int greedy_action_averaged(int state) const;

  double q(int state, int action) const;
  double& q(int state, int action);
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  QLearningConfig& config() { return config_; }
  const QLearningConfig& config() const { return config_; }

  nlohmann::json checkpoint() const;
  static QLearningAgent restore(const nlohmann::json& j);

 private:
  int num_states_, num_actions_;
  QLearningConfig config_;
  std::vector<double> values_;
  std::vector<double> average_;
  long long average_count_ = 0;
};

// ---------------------------------------------------------------------------
// DDQN
// ---------------------------------------------------------------------------

struct DdqnConfig {
  int actions = 0;
  int hidden_units = 50;
  int hidden_layers = 2;
  int batch_size = 2048;
  double epsilon = 0.2;
  double gamma = 0.9998;
  double learning_rate = 1e-3;
  std::size_t replay_capacity = 100000;
  int target_sync = 500;  // train steps between target refreshes
  bool bootstrap_on_truncation = true;
};

/// Double deep Q-learning on a scalar observation: the online network picks
/// the maximizing action at the next state, the periodically synchronized
/// target network values it.
class DdqnAgent {
 public:
  DdqnAgent(DdqnConfig config, std::uint64_t seed);

  int select_action(double obs, Rng& rng, bool greedy) const;
  Eigen::VectorXd q_values(double obs) const;

  void observe(const Transition& t) { buffer_.push(t); }
  bool ready() const { return buffer_.size() >= static_cast<std::size_t>(config_.batch_size); }
  std::size_t buffer_size() const { return buffer_.size(); }

  /// Samples a batch and performs one double-Q regression step; returns the
  /// mean squared TD error. Throws ErrorCode::training_diverged on a
  /// non-finite loss.
  double train_step(Rng& rng);
  double train_on_batch(const std::vector<Transition>& batch);

  long long train_steps() const { return train_steps_; }
  const DdqnConfig& config() const { return config_; }
  const Mlp& online() const { return online_; }
  const Mlp& target() const { return target_; }

  /// Full state: both networks, optimizer moments, step counter, config.
  nlohmann::json checkpoint() const;
  static DdqnAgent restore(const nlohmann::json& j);

 private:
  DdqnConfig config_;
  Mlp online_, target_;
  AdamOptimizer opt_;
  ReplayBuffer buffer_;
  long long train_steps_ = 0;

  // scratch reused across train steps
  std::vector<Transition> batch_;
  Mlp::Workspace ws_;
  Mlp::Gradients grads_;
};

/// Greedy action at every fitness level, mapped to radii: directly
/// consumable by the exact runtime evaluation. The tabular overload reads the
/// tail-averaged table once averaging has begun.
Policy extract_greedy_policy(const QLearningAgent& agent, const EnvSpec& spec);
Policy extract_greedy_policy(const DdqnAgent& agent, const EnvSpec& spec);

}  // namespace lobench
