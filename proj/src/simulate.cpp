#include "lobench/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "lobench/errors.hpp"

namespace lobench {

namespace {

bool record_full(TraceMode mode, int n) {
  switch (mode) {
    case TraceMode::automatic:
      return n < 256;
    case TraceMode::full:
      return true;
    default:
      return false;
  }
}

void record_step(EpisodeTrace& trace, TraceMode mode, bool full, long long step, int before,
                 int radius, int after) {
  if (mode == TraceMode::none) return;
  if (!full && after <= before) return;
  trace.steps.push_back({step, before, radius, after,
                         static_cast<double>(after - before) - 1.0});
}

// Core loop shared by the public entry point and the samplers; trace may be
// null for runtime-only use.
long long rls_episode(const Policy& policy, const Instance& inst, Rng& rng,
                      std::optional<long long> cutoff, TraceMode mode, EpisodeTrace* trace) {
  const int n = inst.n;
  BitString x = random_bitstring(n, rng);
  int fitness = leading_ones(x, inst);
  const bool full = record_full(mode, n);
  if (trace) trace->initial_fitness = fitness;
  SubsetSampler sampler(n);
  std::vector<int> positions;
  long long step = 0;
  while (fitness < n && (!cutoff || step < *cutoff)) {
    const int radius = policy(fitness);
    sampler.sample(radius, rng, positions);
    // Mutate in place; rejection re-flips the same positions.
    for (int pos : positions) x[static_cast<std::size_t>(pos)] ^= 1u;
    const int offspring = leading_ones(x, inst);
    const int before = fitness;
    if (offspring >= fitness) {
      fitness = offspring;
    } else {
      for (int pos : positions) x[static_cast<std::size_t>(pos)] ^= 1u;
    }
    ++step;
    if (trace) record_step(*trace, mode, full, step, before, radius, fitness);
  }
  if (trace) {
    trace->total_steps = step;
    trace->final_fitness = fitness;
    trace->terminal = (fitness == n) ? Terminal::optimum_found : Terminal::cutoff;
  }
  return step;
}

int surrogate_initial_fitness(int n, Rng& rng) {
  int f = 0;
  while (f < n && rng.coin()) ++f;
  return f;
}

long long surrogate_episode(const Policy& policy, const ImprovementTable& table, Rng& rng,
                            std::optional<long long> cutoff, TraceMode mode,
                            EpisodeTrace* trace) {
  const int n = table.n();
  int fitness = surrogate_initial_fitness(n, rng);
  const bool full = record_full(mode, n);
  if (trace) trace->initial_fitness = fitness;
  long long step = 0;
  while (fitness < n && (!cutoff || step < *cutoff)) {
    const int radius = policy(fitness);
    const int before = fitness;
    if (rng.bernoulli(table.q(radius, fitness))) {
      ++fitness;  // the improving flip fixes position i+1
      while (fitness < n && rng.coin()) ++fitness;  // free riders
    }
    ++step;
    if (trace) record_step(*trace, mode, full, step, before, radius, fitness);
  }
  if (trace) {
    trace->total_steps = step;
    trace->final_fitness = fitness;
    trace->terminal = (fitness == n) ? Terminal::optimum_found : Terminal::cutoff;
  }
  return step;
}

int resolve_jobs(int jobs, long long runs) {
  int j = jobs;
  if (j <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    j = hw > 0 ? static_cast<int>(hw) : 1;
  }
  return static_cast<int>(std::min<long long>(j, std::max<long long>(runs, 1)));
}

template <typename Episode>
std::vector<long long> sample_with(Episode episode, long long runs, std::uint64_t base_seed,
                                   int jobs) {
  if (runs < 1) throw_error(ErrorCode::invalid_argument, "runs must be >= 1");
  std::vector<long long> out(static_cast<std::size_t>(runs));
  const int workers = resolve_jobs(jobs, runs);
  auto chunk = [&](int w) {
    const long long lo = runs * w / workers;
    const long long hi = runs * (w + 1) / workers;
    for (long long run = lo; run < hi; ++run) {
      Rng rng(derive_seed(base_seed, static_cast<std::uint64_t>(run)));
      out[static_cast<std::size_t>(run)] = episode(rng);
    }
  };
  if (workers <= 1) {
    chunk(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(chunk, w);
    for (auto& th : threads) th.join();
  }
  return out;
}

}  // namespace

EpisodeTrace run_rls(const Policy& policy, const Instance& inst, Rng& rng,
                     std::optional<long long> cutoff, TraceMode mode) {
  if (policy.n() != inst.n)
    throw_error(ErrorCode::invalid_argument, "policy and instance dimensions differ");
  EpisodeTrace trace;
  rls_episode(policy, inst, rng, cutoff, mode, &trace);
  return trace;
}

EpisodeTrace run_surrogate(const Policy& policy, const ImprovementTable& table, Rng& rng,
                           std::optional<long long> cutoff, TraceMode mode) {
  if (policy.n() != table.n())
    throw_error(ErrorCode::invalid_argument, "policy and table dimensions differ");
  EpisodeTrace trace;
  surrogate_episode(policy, table, rng, cutoff, mode, &trace);
  return trace;
}

EpisodeTrace run_surrogate(const Policy& policy, int n, Rng& rng, std::optional<long long> cutoff,
                           TraceMode mode) {
  const ImprovementTable table(n);
  return run_surrogate(policy, table, rng, cutoff, mode);
}

std::vector<long long> sample_runtimes(const Policy& policy, const Instance& inst, long long runs,
                                       std::uint64_t base_seed, std::optional<long long> cutoff,
                                       int jobs) {
  if (policy.n() != inst.n)
    throw_error(ErrorCode::invalid_argument, "policy and instance dimensions differ");
  return sample_with(
      [&](Rng& rng) { return rls_episode(policy, inst, rng, cutoff, TraceMode::none, nullptr); },
      runs, base_seed, jobs);
}

std::vector<long long> sample_runtimes_surrogate(const Policy& policy,
                                                 const ImprovementTable& table, long long runs,
                                                 std::uint64_t base_seed,
                                                 std::optional<long long> cutoff, int jobs) {
  if (policy.n() != table.n())
    throw_error(ErrorCode::invalid_argument, "policy and table dimensions differ");
  return sample_with(
      [&](Rng& rng) {
        return surrogate_episode(policy, table, rng, cutoff, TraceMode::none, nullptr);
      },
      runs, base_seed, jobs);
}

RunStats stats_of_runtimes(const std::vector<long long>& samples) {
  if (samples.empty()) throw_error(ErrorCode::invalid_argument, "no runtime samples");
  long long lo = samples.front(), hi = samples.front();
  __int128 sum = 0, sumsq = 0;
  for (long long t : samples) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
    sum += t;
    sumsq += static_cast<__int128>(t) * t;
  }
  const auto count = static_cast<double>(samples.size());
  const double mean = static_cast<double>(sum) / count;
  double stddev = 0.0;
  if (samples.size() > 1) {
    const double centered = static_cast<double>(sumsq) - count * mean * mean;
    stddev = std::sqrt(std::max(0.0, centered / (count - 1.0)));
  }
  return {static_cast<long long>(samples.size()), mean, stddev, lo, hi};
}

RunStats estimate_runtime(const Policy& policy, const Instance& inst, long long runs,
                          std::uint64_t base_seed, std::optional<long long> cutoff, int jobs) {
  return stats_of_runtimes(sample_runtimes(policy, inst, runs, base_seed, cutoff, jobs));
}

void write_trace_csv(std::ostream& os, const EpisodeTrace& trace) {
  os << "step;fitness_before;action;fitness_after;reward\n";
  for (const auto& s : trace.steps)
    os << s.step << ';' << s.fitness_before << ';' << s.action_radius << ';' << s.fitness_after
       << ';' << s.reward << '\n';
}

}  // namespace lobench
