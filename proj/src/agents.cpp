#include "lobench/agents.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "lobench/errors.hpp"

namespace lobench {

using nlohmann::json;

// ---------------------------------------------------------------------------
// ReplayBuffer
// ---------------------------------------------------------------------------

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw_error(ErrorCode::invalid_argument, "replay capacity must be positive");
  data_.reserve(std::min<std::size_t>(capacity, 1 << 20));
}

void ReplayBuffer::push(const Transition& t) {
  if (data_.size() < capacity_) {
    data_.push_back(t);
    order_.push_back(static_cast<std::uint32_t>(order_.size()));
  } else {
    data_[write_] = t;  // oldest-first overwrite
    write_ = (write_ + 1) % capacity_;
  }
}

void ReplayBuffer::sample(std::size_t batch, Rng& rng, std::vector<Transition>& out) {
  if (batch > data_.size())
    throw_error(ErrorCode::invalid_argument, "batch larger than buffer content");
  // Partial Fisher-Yates over the persistent permutation: the prefix is a
  // uniform batch-subset regardless of the permutation's previous state.
  const int n = static_cast<int>(data_.size());
  out.resize(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    const int j = rng.uniform_int(static_cast<int>(i), n - 1);
    std::swap(order_[i], order_[static_cast<std::size_t>(j)]);
    out[i] = data_[order_[i]];
  }
}

// ---------------------------------------------------------------------------
// Tabular Q-learning
// ---------------------------------------------------------------------------

QLearningAgent::QLearningAgent(int num_states, int num_actions, QLearningConfig config)
    : num_states_(num_states), num_actions_(num_actions), config_(config) {
  if (num_states < 1 || num_actions < 1)
    throw_error(ErrorCode::invalid_argument, "state and action counts must be positive");
  if (config.alpha < 0.0 || config.alpha > 1.0)
    throw_error(ErrorCode::invalid_argument, "alpha must be in [0,1]");
  if (config.gamma <= 0.0 || config.gamma > 1.0)
    throw_error(ErrorCode::invalid_argument, "gamma must be in (0,1]");
  if (config.epsilon < 0.0 || config.epsilon > 1.0)
    throw_error(ErrorCode::invalid_argument, "epsilon must be in [0,1]");
  values_.assign(static_cast<std::size_t>(num_states) * static_cast<std::size_t>(num_actions),
                 0.0);
}

double QLearningAgent::q(int state, int action) const {
  return values_[static_cast<std::size_t>(state) * static_cast<std::size_t>(num_actions_) +
                 static_cast<std::size_t>(action)];
}

double& QLearningAgent::q(int state, int action) {
  return values_[static_cast<std::size_t>(state) * static_cast<std::size_t>(num_actions_) +
                 static_cast<std::size_t>(action)];
}

int QLearningAgent::greedy_action(int state) const {
  int best = 0;
  for (int a = 1; a < num_actions_; ++a)
    if (q(state, a) > q(state, best)) best = a;
  return best;
}

int QLearningAgent::select_action(int state, Rng& rng, bool greedy) const {
  if (state < 0 || state >= num_states_)
    throw_error(ErrorCode::invalid_argument, "state out of range");
  if (!greedy && rng.bernoulli(config_.epsilon)) return rng.uniform_int(0, num_actions_ - 1);
  return greedy_action(state);
}

void QLearningAgent::update(int state, int action, double reward, int next_state, bool terminal) {
  double bootstrap = 0.0;
  if (!terminal) {
    bootstrap = q(next_state, 0);
    for (int a = 1; a < num_actions_; ++a) bootstrap = std::max(bootstrap, q(next_state, a));
  }
  const double target = reward + config_.gamma * bootstrap;
  q(state, action) += config_.alpha * (target - q(state, action));
  if (average_count_ > 0) {
    ++average_count_;
    for (std::size_t i = 0; i < values_.size(); ++i)
      average_[i] += (values_[i] - average_[i]) / static_cast<double>(average_count_);
  }
}

void QLearningAgent::begin_averaging() {
  if (average_count_ > 0) return;
  average_ = values_;
  average_count_ = 1;
}

double QLearningAgent::averaged_q(int state, int action) const {
  if (average_count_ == 0) return q(state, action);
  return average_[static_cast<std::size_t>(state) * static_cast<std::size_t>(num_actions_) +
                  static_cast<std::size_t>(action)];
}

int QLearningAgent::greedy_action_averaged(int state) const {
  int best = 0;
  for (int a = 1; a < num_actions_; ++a)
    if (averaged_q(state, a) > averaged_q(state, best)) best = a;
  return best;
}

json QLearningAgent::checkpoint() const {
  return json{{"type", "tabular"},
              {"num_states", num_states_},
              {"num_actions", num_actions_},
              {"alpha", config_.alpha},
              {"gamma", config_.gamma},
              {"epsilon", config_.epsilon},
              {"bootstrap_on_truncation", config_.bootstrap_on_truncation},
              {"q", values_},
              {"q_average", average_},
              {"average_count", average_count_}};
}

QLearningAgent QLearningAgent::restore(const json& j) {
  if (j.value("type", "") != "tabular")
    throw_error(ErrorCode::parse, "not a tabular agent checkpoint");
  QLearningConfig config;
  config.alpha = j.at("alpha").get<double>();
  config.gamma = j.at("gamma").get<double>();
  config.epsilon = j.at("epsilon").get<double>();
  config.bootstrap_on_truncation = j.at("bootstrap_on_truncation").get<bool>();
  QLearningAgent agent(j.at("num_states").get<int>(), j.at("num_actions").get<int>(), config);
  agent.values_ = j.at("q").get<std::vector<double>>();
  if (agent.values_.size() != static_cast<std::size_t>(agent.num_states_) *
                                  static_cast<std::size_t>(agent.num_actions_))
    throw_error(ErrorCode::parse, "checkpoint table size mismatch");
  agent.average_ = j.value("q_average", std::vector<double>{});
  agent.average_count_ = j.value("average_count", 0LL);
  return agent;
}

// ---------------------------------------------------------------------------
// DDQN
// ---------------------------------------------------------------------------

namespace {

std::vector<int> ddqn_sizes(const DdqnConfig& c) {
  std::vector<int> sizes{1};
  for (int l = 0; l < c.hidden_layers; ++l) sizes.push_back(c.hidden_units);
  sizes.push_back(c.actions);
  return sizes;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  return m;
}

json mlp_to_json(const Mlp& net) {
  json layers = json::array();
  for (const auto& l : net.layers()) {
    layers.push_back(json{{"w", matrix_to_json(l.w)},
                          {"b", std::vector<double>(l.b.data(), l.b.data() + l.b.size())},
                          {"relu", l.relu}});
  }
  return layers;
}

void mlp_from_json(const json& j, Mlp& net) {
  net.layers().clear();
  for (const auto& lj : j) {
    Mlp::Layer layer;
    layer.w = matrix_from_json(lj.at("w"));
    const auto b = lj.at("b").get<std::vector<double>>();
    layer.b = Eigen::Map<const Eigen::RowVectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    layer.relu = lj.at("relu").get<bool>();
    net.layers().push_back(std::move(layer));
  }
}

json moments_to_json(const Mlp::Gradients& g) {
  json out = json::array();
  for (std::size_t l = 0; l < g.w.size(); ++l) {
    out.push_back(json{
        {"w", matrix_to_json(g.w[l])},
        {"b", std::vector<double>(g.b[l].data(), g.b[l].data() + g.b[l].size())}});
  }
  return out;
}

void moments_from_json(const json& j, Mlp::Gradients& g) {
  g.w.clear();
  g.b.clear();
  for (const auto& lj : j) {
    g.w.push_back(matrix_from_json(lj.at("w")));
    const auto b = lj.at("b").get<std::vector<double>>();
    g.b.emplace_back(
        Eigen::Map<const Eigen::RowVectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
  }
}

std::uint64_t obs_key(double obs) { return std::bit_cast<std::uint64_t>(obs); }

}  // namespace

DdqnAgent::DdqnAgent(DdqnConfig config, std::uint64_t seed)
    : config_(config),
      online_(ddqn_sizes(config), seed),
      target_(online_),
      opt_(config.learning_rate),
      buffer_(config.replay_capacity) {
  if (config.actions < 1) throw_error(ErrorCode::invalid_argument, "actions must be >= 1");
  if (config.batch_size < 1) throw_error(ErrorCode::invalid_argument, "batch size must be >= 1");
  if (config.target_sync < 1) throw_error(ErrorCode::invalid_argument, "target_sync must be >= 1");
}

Eigen::VectorXd DdqnAgent::q_values(double obs) const {
  Eigen::MatrixXd x(1, 1);
  x(0, 0) = obs;
  return online_.forward(x).row(0).transpose();
}

int DdqnAgent::select_action(double obs, Rng& rng, bool greedy) const {
  if (!greedy && rng.bernoulli(config_.epsilon))
    return rng.uniform_int(0, config_.actions - 1);
  const Eigen::VectorXd q = q_values(obs);
  Eigen::Index best = 0;
  q.maxCoeff(&best);  // first occurrence: ties to the smallest index
  return static_cast<int>(best);
}

double DdqnAgent::train_step(Rng& rng) {
  if (!ready())
    throw_error(ErrorCode::invalid_argument, "replay buffer smaller than one batch");
  buffer_.sample(static_cast<std::size_t>(config_.batch_size), rng, batch_);
  return train_on_batch(batch_);
}

double DdqnAgent::train_on_batch(const std::vector<Transition>& batch) {
  if (batch.empty()) throw_error(ErrorCode::invalid_argument, "empty batch");
  const int k = config_.actions;
  const auto batch_size = static_cast<double>(batch.size());

  // Fitness observations repeat heavily within a batch, so evaluate each
  // distinct value once and gather; gradients aggregate per distinct row,
  // which is algebraically identical to the per-transition computation.
  std::unordered_map<std::uint64_t, int> next_rows, state_rows;
  next_rows.reserve(batch.size());
  state_rows.reserve(batch.size());
  for (const Transition& t : batch) {
    const bool bootstrap =
        !t.next_terminal && (!t.truncated || config_.bootstrap_on_truncation);
    if (bootstrap) next_rows.emplace(obs_key(t.next_obs), static_cast<int>(next_rows.size()));
    state_rows.emplace(obs_key(t.obs), static_cast<int>(state_rows.size()));
  }

  Eigen::MatrixXd next_values;  // one row per distinct next state: value of the double-Q action
  if (!next_rows.empty()) {
    Eigen::MatrixXd xn(static_cast<Eigen::Index>(next_rows.size()), 1);
    for (const auto& [key, row] : next_rows) xn(row, 0) = std::bit_cast<double>(key);
    const Eigen::MatrixXd q_online = online_.forward(xn);
    const Eigen::MatrixXd q_target = target_.forward(xn);
    next_values.resize(q_online.rows(), 1);
    for (Eigen::Index r = 0; r < q_online.rows(); ++r) {
      Eigen::Index best = 0;
      q_online.row(r).maxCoeff(&best);      // online net selects
      next_values(r, 0) = q_target(r, best);  // target net evaluates
    }
  }

  Eigen::MatrixXd xs(static_cast<Eigen::Index>(state_rows.size()), 1);
  for (const auto& [key, row] : state_rows) xs(row, 0) = std::bit_cast<double>(key);
  const Eigen::MatrixXd& prediction = online_.forward(xs, ws_);

  Eigen::MatrixXd dy = Eigen::MatrixXd::Zero(prediction.rows(), k);
  double loss = 0.0;
  for (const Transition& t : batch) {
    const bool bootstrap =
        !t.next_terminal && (!t.truncated || config_.bootstrap_on_truncation);
    double target = t.reward;
    if (bootstrap) target += config_.gamma * next_values(next_rows.at(obs_key(t.next_obs)), 0);
    const int row = state_rows.at(obs_key(t.obs));
    const double delta = prediction(row, t.action) - target;
    loss += delta * delta;
    dy(row, t.action) += 2.0 * delta / batch_size;
  }
  loss /= batch_size;
  if (!std::isfinite(loss))
    throw_error(ErrorCode::training_diverged, "non-finite loss in train step");

  online_.backward(ws_, dy, grads_);
  opt_.step(online_, grads_);
  ++train_steps_;
  if (train_steps_ % config_.target_sync == 0) target_ = online_;
  return loss;
}

json DdqnAgent::checkpoint() const {
  return json{{"type", "ddqn"},
              {"config",
               {{"actions", config_.actions},
                {"hidden_units", config_.hidden_units},
                {"hidden_layers", config_.hidden_layers},
                {"batch_size", config_.batch_size},
                {"epsilon", config_.epsilon},
                {"gamma", config_.gamma},
                {"learning_rate", config_.learning_rate},
                {"replay_capacity", config_.replay_capacity},
                {"target_sync", config_.target_sync},
                {"bootstrap_on_truncation", config_.bootstrap_on_truncation}}},
              {"train_steps", train_steps_},
              {"online", mlp_to_json(online_)},
              {"target", mlp_to_json(target_)},
              {"adam",
               {{"t", opt_.step_count()},
                {"m", moments_to_json(opt_.first_moment())},
                {"v", moments_to_json(opt_.second_moment())}}}};
}

DdqnAgent DdqnAgent::restore(const json& j) {
  if (j.value("type", "") != "ddqn")
    throw_error(ErrorCode::parse, "not a ddqn agent checkpoint");
  const json& cj = j.at("config");
  DdqnConfig config;
  config.actions = cj.at("actions").get<int>();
  config.hidden_units = cj.at("hidden_units").get<int>();
  config.hidden_layers = cj.at("hidden_layers").get<int>();
  config.batch_size = cj.at("batch_size").get<int>();
  config.epsilon = cj.at("epsilon").get<double>();
  config.gamma = cj.at("gamma").get<double>();
  config.learning_rate = cj.at("learning_rate").get<double>();
  config.replay_capacity = cj.at("replay_capacity").get<std::size_t>();
  config.target_sync = cj.at("target_sync").get<int>();
  config.bootstrap_on_truncation = cj.at("bootstrap_on_truncation").get<bool>();
  DdqnAgent agent(config, 0);
  mlp_from_json(j.at("online"), agent.online_);
  mlp_from_json(j.at("target"), agent.target_);
  agent.train_steps_ = j.at("train_steps").get<long long>();
  AdamOptimizer opt(config.learning_rate);
  moments_from_json(j.at("adam").at("m"), opt.first_moment());
  moments_from_json(j.at("adam").at("v"), opt.second_moment());
  opt.step_count_mutable() = j.at("adam").at("t").get<long long>();
  agent.opt_ = opt;
  return agent;
}

// ---------------------------------------------------------------------------
// Greedy policy extraction
// ---------------------------------------------------------------------------

namespace {

template <typename GreedyAt>
Policy greedy_policy_table(const EnvSpec& spec, GreedyAt greedy_at) {
  std::vector<int> table(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i)
    table[static_cast<std::size_t>(i)] =
        spec.portfolio.radii[static_cast<std::size_t>(greedy_at(i))];
  return Policy::from_table(spec.portfolio, std::move(table));
}

}  // namespace

Policy extract_greedy_policy(const QLearningAgent& agent, const EnvSpec& spec) {
  if (agent.num_actions() != spec.portfolio.size())
    throw_error(ErrorCode::invalid_argument, "agent/portfolio action count mismatch");
  if (agent.averaging())
    return greedy_policy_table(spec, [&](int i) { return agent.greedy_action_averaged(i); });
  return greedy_policy_table(spec, [&](int i) { return agent.greedy_action(i); });
}

Policy extract_greedy_policy(const DdqnAgent& agent, const EnvSpec& spec) {
  if (agent.config().actions != spec.portfolio.size())
    throw_error(ErrorCode::invalid_argument, "agent/portfolio action count mismatch");
  return greedy_policy_table(spec, [&](int i) {
    const Eigen::VectorXd q = agent.q_values(spec.observe(i));
    Eigen::Index best = 0;
    q.maxCoeff(&best);
    return static_cast<int>(best);
  });
}

}  // namespace lobench
