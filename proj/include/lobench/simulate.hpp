#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lobench/bitstring.hpp"
#include "lobench/improvement.hpp"
#include "lobench/policy.hpp"
#include "lobench/rng.hpp"

namespace lobench {

enum class Backend { bitstring, surrogate };

enum class Terminal { optimum_found, cutoff };

enum class TraceMode {
  automatic,          // full below n = 256, improvements-only beyond
  full,               // one record per iteration
  improvements_only,  // records only iterations that raised the fitness
  none,
};

struct StepRecord {
  long long step;  // 1-based iteration index
  int fitness_before;
  int action_radius;
  int fitness_after;
  double reward;  // fitness_after - fitness_before - 1
};

/// One episode of the elitist single-solution loop. Runtime convention:
/// total_steps counts iterations executed before the optimum is the current
/// solution, so an initial sample that is already optimal costs 0.
struct EpisodeTrace {
  std::vector<StepRecord> steps;
  Terminal terminal = Terminal::optimum_found;
  long long total_steps = 0;
  int initial_fitness = 0;
  int final_fitness = 0;
};

/// Executes the algorithm exactly on bit strings: uniform random init, then
/// per iteration read fitness, look up the radius, flip, accept iff not worse.
/// Stops at the optimum or after `cutoff` iterations (if given).
EpisodeTrace run_rls(const Policy& policy, const Instance& inst, Rng& rng,
                     std::optional<long long> cutoff = {},
                     TraceMode mode = TraceMode::automatic);

/// Fitness-chain surrogate: state is the fitness alone. Initial fitness is
/// drawn from the uniform-init law P[f=i] = 2^-(i+1) (P[f=n] = 2^-n); a step
/// with radius r improves with probability q(r, i), and an improvement lands
/// on i+1 plus free riders (each further position counts as a leading one
/// with probability 1/2 until the first failure or position n).
EpisodeTrace run_surrogate(const Policy& policy, const ImprovementTable& table, Rng& rng,
                           std::optional<long long> cutoff = {},
                           TraceMode mode = TraceMode::automatic);
EpisodeTrace run_surrogate(const Policy& policy, int n, Rng& rng,
                           std::optional<long long> cutoff = {},
                           TraceMode mode = TraceMode::automatic);

struct RunStats {
  long long runs = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  long long min = 0;
  long long max = 0;
};

/// Independent runtimes, one per run, with per-run streams derived from
/// (base_seed, run_index); identical output for any job count.
std::vector<long long> sample_runtimes(const Policy& policy, const Instance& inst, long long runs,
                                       std::uint64_t base_seed,
                                       std::optional<long long> cutoff = {}, int jobs = 1);
std::vector<long long> sample_runtimes_surrogate(const Policy& policy,
                                                 const ImprovementTable& table, long long runs,
                                                 std::uint64_t base_seed,
                                                 std::optional<long long> cutoff = {},
                                                 int jobs = 1);

/// Aggregated Monte-Carlo runtime estimate over `runs` independent episodes.
RunStats estimate_runtime(const Policy& policy, const Instance& inst, long long runs,
                          std::uint64_t base_seed, std::optional<long long> cutoff = {},
                          int jobs = 1);

RunStats stats_of_runtimes(const std::vector<long long>& samples);

/// CSV with header: step;fitness_before;action;fitness_after;reward
void write_trace_csv(std::ostream& os, const EpisodeTrace& trace);

}  // namespace lobench
