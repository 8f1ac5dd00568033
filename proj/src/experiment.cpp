#include "lobench/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "lobench/runtime.hpp"
#include "lobench/stats.hpp"

namespace lobench {

using nlohmann::json;

Portfolio ExperimentConfig::resolve_portfolio() const {
  if (!radii.empty()) return Portfolio::of(n, radii);
  const FamilyKind kind = family_from_string(family);
  if (kind == FamilyKind::optimal) return search_optimal_portfolio(k, n, jobs).portfolio;
  return make_portfolio(kind, k, n);
}

long long ExperimentConfig::resolve_budget() const {
  if (budget >= 0) return budget;
  return n <= 50 ? 1'000'000LL : 1'400'000LL;
}

long long ExperimentConfig::resolve_cutoff() const {
  return cutoff >= 0 ? cutoff : EnvSpec::default_cutoff(n);
}

json ExperimentConfig::to_json() const {
  return json{{"n", n},
              {"family", family},
              {"k", k},
              {"radii", radii},
              {"agent", agent},
              {"budget", budget},
              {"eval_period", eval_period},
              {"eval_runs", eval_runs},
              {"final_runs", final_runs},
              {"tau", tau},
              {"empirical_optimal_std", empirical_optimal_std},
              {"backend", backend == Backend::bitstring ? "bitstring" : "surrogate"},
              {"cutoff", cutoff},
              {"seed", seed},
              {"jobs", jobs},
              {"ddqn",
               {{"hidden_units", ddqn.hidden_units},
                {"hidden_layers", ddqn.hidden_layers},
                {"batch_size", ddqn.batch_size},
                {"epsilon", ddqn.epsilon},
                {"gamma", ddqn.gamma},
                {"learning_rate", ddqn.learning_rate},
                {"replay_capacity", ddqn.replay_capacity},
                {"target_sync", ddqn.target_sync},
                {"bootstrap_on_truncation", ddqn.bootstrap_on_truncation}}},
              {"tabular",
               {{"alpha", tabular.alpha},
                {"gamma", tabular.gamma},
                {"epsilon", tabular.epsilon},
                {"bootstrap_on_truncation", tabular.bootstrap_on_truncation},
                {"alpha_min", tabular_alpha_min},
                {"alpha_halflife", tabular_alpha_halflife},
                {"average_from", tabular_average_from}}}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.n = j.value("n", c.n);
  c.family = j.value("family", c.family);
  c.k = j.value("k", c.k);
  c.radii = j.value("radii", c.radii);
  c.agent = j.value("agent", c.agent);
  c.budget = j.value("budget", c.budget);
  c.eval_period = j.value("eval_period", c.eval_period);
  c.eval_runs = j.value("eval_runs", c.eval_runs);
  c.final_runs = j.value("final_runs", c.final_runs);
  c.tau = j.value("tau", c.tau);
  c.empirical_optimal_std = j.value("empirical_optimal_std", c.empirical_optimal_std);
  const std::string backend = j.value("backend", std::string("bitstring"));
  if (backend == "bitstring")
    c.backend = Backend::bitstring;
  else if (backend == "surrogate")
    c.backend = Backend::surrogate;
  else
    throw_error(ErrorCode::parse, "unknown backend: " + backend);
  c.cutoff = j.value("cutoff", c.cutoff);
  c.seed = j.value("seed", c.seed);
  c.jobs = j.value("jobs", c.jobs);
  if (j.contains("ddqn")) {
    const json& d = j.at("ddqn");
    c.ddqn.hidden_units = d.value("hidden_units", c.ddqn.hidden_units);
    c.ddqn.hidden_layers = d.value("hidden_layers", c.ddqn.hidden_layers);
    c.ddqn.batch_size = d.value("batch_size", c.ddqn.batch_size);
    c.ddqn.epsilon = d.value("epsilon", c.ddqn.epsilon);
    c.ddqn.gamma = d.value("gamma", c.ddqn.gamma);
    c.ddqn.learning_rate = d.value("learning_rate", c.ddqn.learning_rate);
    c.ddqn.replay_capacity = d.value("replay_capacity", c.ddqn.replay_capacity);
    c.ddqn.target_sync = d.value("target_sync", c.ddqn.target_sync);
    c.ddqn.bootstrap_on_truncation =
        d.value("bootstrap_on_truncation", c.ddqn.bootstrap_on_truncation);
  }
  if (j.contains("tabular")) {
    const json& t = j.at("tabular");
    c.tabular.alpha = t.value("alpha", c.tabular.alpha);
    c.tabular.gamma = t.value("gamma", c.tabular.gamma);
    c.tabular.epsilon = t.value("epsilon", c.tabular.epsilon);
    c.tabular.bootstrap_on_truncation =
        t.value("bootstrap_on_truncation", c.tabular.bootstrap_on_truncation);
    c.tabular_alpha_min = t.value("alpha_min", c.tabular_alpha_min);
    c.tabular_alpha_halflife = t.value("alpha_halflife", c.tabular_alpha_halflife);
    c.tabular_average_from = t.value("average_from", c.tabular_average_from);
  }
  return c;
}

OptimalStats optimal_stats_for(const ExperimentConfig& config, const Portfolio& portfolio,
                               const ImprovementTable& table) {
  const Policy optimal = optimal_restricted_policy(portfolio, table);
  OptimalStats stats;
  stats.expectation = expected_runtime(optimal, table);
  if (config.empirical_optimal_std) {
    const RunStats empirical =
        estimate_runtime(optimal, Instance::canonical(config.n), config.final_runs,
                         derive_seed(config.seed, 0xE57Dull), config.resolve_cutoff(), config.jobs);
    stats.stddev = empirical.stddev;
  } else {
    stats.stddev = std::sqrt(runtime_variance(optimal, table));
  }
  return stats;
}

namespace {

struct Trainer {
  const ExperimentConfig& config;
  Portfolio portfolio;
  ImprovementTable table;
  EnvSpec spec;
  Env env;
  OptimalStats optimal;
  Instance instance;
  long long budget;
  long long cutoff;

  std::optional<QLearningAgent> tabular;
  std::optional<DdqnAgent> ddqn;

  Rng action_rng;
  Rng train_rng;
  ExperimentLog log;
  long long eval_count = 0;

  explicit Trainer(const ExperimentConfig& cfg, const ResumeState* resume)
      : config(cfg),
        portfolio(cfg.resolve_portfolio()),
        table(cfg.n),
        spec(EnvSpec::make(cfg.n, portfolio, cfg.backend,
                           cfg.agent == "tabular" ? ObservationKind::raw_fitness
                                                  : ObservationKind::normalized_fitness,
                           cfg.resolve_cutoff())),
        env(spec, derive_seed(cfg.seed, 0xE0Full)),
        optimal(optimal_stats_for(cfg, portfolio, table)),
        instance(Instance::canonical(cfg.n)),
        budget(cfg.resolve_budget()),
        cutoff(cfg.resolve_cutoff()),
        action_rng(derive_seed(cfg.seed, resume ? 0xAC7 + static_cast<std::uint64_t>(
                                                              resume->completed_steps)
                                                : 0xAC7ull)),
        train_rng(derive_seed(cfg.seed, resume ? 0x7EA + static_cast<std::uint64_t>(
                                                             resume->completed_steps)
                                               : 0x7EAull)) {
    if (!portfolio.solvable())
      throw_error(ErrorCode::unsolvable_portfolio,
                  "training needs a solvable portfolio (radius 1)");
    if (config.agent == "tabular") {
      QLearningConfig qc = config.tabular;
      if (resume) {
        tabular = QLearningAgent::restore(resume->agent_checkpoint);
      } else {
        tabular.emplace(config.n + 1, portfolio.size(), qc);
      }
    } else if (config.agent == "ddqn") {
      if (resume) {
        ddqn = DdqnAgent::restore(resume->agent_checkpoint);
      } else {
        DdqnConfig dc = config.ddqn;
        dc.actions = portfolio.size();
        ddqn.emplace(dc, derive_seed(config.seed, 0xDD17ull));
      }
    } else {
      throw_error(ErrorCode::invalid_argument, "unknown agent kind: " + config.agent);
    }
    if (resume) {
      log.evals = resume->evals;
      if (resume->best_policy) {
        log.best_policy = resume->best_policy;
        log.best_eval_mean = resume->best_eval_mean;
        log.best_step = resume->best_step;
      }
    }
  }

  Policy greedy_policy() const {
    return tabular ? extract_greedy_policy(*tabular, spec) : extract_greedy_policy(*ddqn, spec);
  }

  double tabular_alpha(long long step) const {
    const long long halflife =
        config.tabular_alpha_halflife > 0 ? config.tabular_alpha_halflife : std::max<long long>(budget / 50, 1);
    const double decayed = config.tabular.alpha /
                           (1.0 + static_cast<double>(step) / static_cast<double>(halflife));
    return std::max(config.tabular_alpha_min, decayed);
  }

  void evaluate(long long step) {
    const Policy policy = greedy_policy();
    const RunStats stats =
        estimate_runtime(policy, instance, config.eval_runs,
                         derive_seed(config.seed, 0x11A0 + static_cast<std::uint64_t>(eval_count)),
                         cutoff, config.jobs);
    ++eval_count;
    EvalRecord rec{step, stats.mean, stats.stddev, is_hit(stats.mean, optimal, config.tau)};
    log.evals.push_back(rec);
    if (!log.best_policy || stats.mean < log.best_eval_mean) {
      log.best_policy = policy;
      log.best_eval_mean = stats.mean;
      log.best_step = step;
    }
  }

  void finalize() {
    log.final_policy = greedy_policy();
    if (log.best_policy) {
      log.final_stats = estimate_runtime(*log.best_policy, instance, config.final_runs,
                                         derive_seed(config.seed, 0xF17A1ull), cutoff, config.jobs);
    }
  }

  void run(long long start_step) {
    if (start_step == 0) evaluate(0);
    double obs = env.reset();
    for (long long step = start_step + 1; step <= budget; ++step) {
      const bool greedy = false;
      const int action = tabular
                             ? tabular->select_action(static_cast<int>(obs), action_rng, greedy)
                             : ddqn->select_action(obs, action_rng, greedy);
      const StepResult sr = env.step(action);
      const bool optimum = sr.done && sr.terminal == Terminal::optimum_found;
      const bool truncated = sr.done && sr.terminal == Terminal::cutoff;
      if (tabular) {
        if (!tabular->averaging() &&
            static_cast<double>(step) >= config.tabular_average_from * static_cast<double>(budget))
          tabular->begin_averaging();
        tabular->config().alpha = tabular_alpha(step);
        const bool terminal =
            optimum || (truncated && !config.tabular.bootstrap_on_truncation);
        tabular->update(static_cast<int>(obs), action, sr.reward,
                        static_cast<int>(sr.observation), terminal);
      } else {
        ddqn->observe({obs, action, sr.reward, sr.observation, optimum, truncated});
        if (ddqn->ready()) {
          try {
            ddqn->train_step(train_rng);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::training_diverged) throw;
            log.diverged = true;
            finalize();
            throw TrainingDivergedError(e.what(), log);
          }
        }
      }
      obs = sr.done ? env.reset() : sr.observation;
      if (step % config.eval_period == 0) evaluate(step);
    }
    finalize();
  }
};

}  // namespace

TrainOutcome train_with_checkpoint(const ExperimentConfig& config, const ResumeState* resume) {
  Trainer trainer(config, resume);
  trainer.run(resume ? resume->completed_steps : 0);
  TrainOutcome outcome;
  outcome.log = std::move(trainer.log);
  outcome.final_agent =
      trainer.tabular ? trainer.tabular->checkpoint() : trainer.ddqn->checkpoint();
  return outcome;
}

ExperimentLog train(const ExperimentConfig& config, const ResumeState* resume) {
  return train_with_checkpoint(config, resume).log;
}

}  // namespace lobench
