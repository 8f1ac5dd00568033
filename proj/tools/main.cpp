// Command line front end: exact policy/portfolio math, simulation, RL
// training, metrics, and the canned reproduction commands. CSV files are the
// canonical outputs; SVG charts are rendered next to them for quick checks.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lobench/experiment.hpp"
#include "lobench/families.hpp"
#include "lobench/improvement.hpp"
#include "lobench/metrics.hpp"
#include "lobench/plot.hpp"
#include "lobench/policy.hpp"
#include "lobench/runtime.hpp"
#include "lobench/simulate.hpp"
#include "lobench/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lobench;

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) {
    if (!token.empty()) values.push_back(std::stoi(token));
  }
  if (values.empty()) throw_error(ErrorCode::parse, "empty integer list: " + text);
  return values;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> values;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) {
    if (!token.empty()) values.push_back(std::stoull(token));
  }
  if (values.empty()) throw_error(ErrorCode::parse, "empty seed list: " + text);
  return values;
}

fs::path ensure_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw_error(ErrorCode::parse, "cannot write " + path.string());
  os << content;
}

struct PolicySource {
  std::string policy_file;
  std::string table;
  std::string breakpoints;
  int constant = -1;

  // Resolves against a portfolio; default is the optimal restricted policy.
  Policy resolve(const Portfolio& portfolio, const ImprovementTable& table_q) const {
    if (!policy_file.empty()) return Policy::load(policy_file);
    if (!table.empty()) return Policy::from_table(portfolio, parse_int_list(table));
    if (!breakpoints.empty()) {
      std::vector<int> bp;
      if (breakpoints != "none") bp = parse_int_list(breakpoints);
      return Policy::from_breakpoints(portfolio, bp);
    }
    if (constant >= 0) return Policy::constant(portfolio.n, constant);
    return optimal_restricted_policy(portfolio, table_q);
  }
};

Portfolio resolve_portfolio(int n, const std::string& portfolio, const std::string& family,
                            int k, int jobs) {
  if (!portfolio.empty()) return parse_portfolio(n, portfolio);
  if (!family.empty()) {
    const FamilyKind kind = family_from_string(family);
    if (kind == FamilyKind::optimal) return search_optimal_portfolio(k, n, jobs).portfolio;
    return make_portfolio(kind, k, n);
  }
  throw_error(ErrorCode::invalid_argument, "need --portfolio or --family with --k");
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_eval_policy(int n, const std::string& portfolio, const std::string& family, int k,
                    const PolicySource& source, const std::string& out, int jobs) {
  const Portfolio K = resolve_portfolio(n, portfolio, family, k, jobs);
  const ImprovementTable table(n);
  const Policy policy = source.resolve(K, table);
  const RuntimeMoments moments = runtime_moments(policy, table);
  json report{{"n", n},
              {"portfolio", K.radii},
              {"expectation", moments.expectation},
              {"variance", moments.variance},
              {"stddev", std::sqrt(moments.variance)},
              {"normalized", moments.expectation / (static_cast<double>(n) * n)}};
  std::cout << report.dump(2) << '\n';
  if (!out.empty()) {
    const fs::path dir = ensure_dir(out);
    policy.save((dir / "policy.txt").string());
    write_file(dir / "eval.json", report.dump(2) + "\n");
  }
  return 0;
}

int cmd_optimal_policy(int n, const std::string& portfolio, const std::string& family, int k,
                       const std::string& out, int jobs) {
  const Portfolio K = resolve_portfolio(n, portfolio, family, k, jobs);
  const ImprovementTable table(n);
  const Policy policy = optimal_restricted_policy(K, table);
  const std::vector<int> bp = breaking_points_bisect(K, table);
  const RuntimeMoments moments = runtime_moments(policy, table);
  json report{{"n", n},
              {"portfolio", K.radii},
              {"breaking_points", bp},
              {"expectation", moments.expectation},
              {"normalized", moments.expectation / (static_cast<double>(n) * n)}};
  std::cout << report.dump(2) << '\n';
  if (!out.empty()) {
    const fs::path dir = ensure_dir(out);
    Policy::from_breakpoints(K, bp).save((dir / "policy.txt").string());
    write_file(dir / "optimal_policy.json", report.dump(2) + "\n");
  }
  return 0;
}

int cmd_optimal_portfolio(int n, int k, int jobs, std::uint64_t cap, const std::string& out) {
  if (binomial_count(n - 1, k - 1) > cap)
    throw_error(ErrorCode::enumeration_too_large,
                "search over " + std::to_string(binomial_count(n - 1, k - 1)) +
                    " candidates exceeds --cap " + std::to_string(cap));
  const SearchResult result = search_optimal_portfolio(k, n, jobs);
  json report{{"n", n},
              {"k", k},
              {"portfolio", result.portfolio.radii},
              {"expectation", result.moments.expectation},
              {"normalized", result.moments.expectation / (static_cast<double>(n) * n)},
              {"candidates", result.candidates}};
  std::cout << report.dump(2) << '\n';
  if (!out.empty()) {
    const fs::path dir = ensure_dir(out);
    write_file(dir / "optimal_portfolio.json", report.dump(2) + "\n");
  }
  return 0;
}

int cmd_sweep(int n, int k, bool all, std::uint64_t cap, const std::string& out) {
  const auto records = sweep_all_portfolios(k, n, !all, cap);
  const fs::path dir = ensure_dir(out.empty() ? "." : out);
  std::ofstream csv(dir / "sweep.csv");
  csv << "portfolio;expected_runtime;normalized\n";
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < rec.radii.size(); ++i) csv << (i ? " " : "") << rec.radii[i];
    csv << ';' << rec.expected_runtime << ';' << rec.normalized << '\n';
  }
  std::cout << "portfolios: " << records.size() << "\nbest: ";
  for (std::size_t i = 0; i < records.front().radii.size(); ++i)
    std::cout << (i ? " " : "") << records.front().radii[i];
  std::cout << "\nbest normalized: " << records.front().normalized << '\n';
  return 0;
}

int cmd_simulate(int n, const std::string& portfolio, const std::string& family, int k,
                 const PolicySource& source, long long runs, std::uint64_t seed,
                 std::optional<long long> cutoff, bool surrogate, const std::string& trace_file,
                 int jobs) {
  const Portfolio K = resolve_portfolio(n, portfolio, family, k, jobs);
  const ImprovementTable table(n);
  const Policy policy = source.resolve(K, table);
  const Instance inst = Instance::canonical(n);

  RunStats stats;
  if (surrogate)
    stats = stats_of_runtimes(sample_runtimes_surrogate(policy, table, runs, seed, cutoff, jobs));
  else
    stats = estimate_runtime(policy, inst, runs, seed, cutoff, jobs);

  json report{{"n", n},          {"portfolio", K.radii},
              {"runs", stats.runs}, {"mean", stats.mean},
              {"std", stats.stddev}, {"min", stats.min},
              {"max", stats.max},    {"backend", surrogate ? "surrogate" : "bitstring"}};
  std::cout << report.dump(2) << '\n';

  if (!trace_file.empty()) {
    Rng rng(derive_seed(seed, 0));
    const EpisodeTrace trace =
        surrogate ? run_surrogate(policy, table, rng, cutoff, TraceMode::full)
                  : run_rls(policy, inst, rng, cutoff, TraceMode::full);
    std::ofstream os(trace_file);
    if (!os) throw_error(ErrorCode::parse, "cannot write " + trace_file);
    write_trace_csv(os, trace);
  }
  return 0;
}

void write_train_outputs(const fs::path& dir, const ExperimentConfig& config,
                         const TrainOutcome& outcome, const OptimalStats& optimal) {
  fs::create_directories(dir);
  write_file(dir / "config.json", config.to_json().dump(2) + "\n");
  std::ofstream log_csv(dir / "log.csv");
  outcome.log.write_csv(log_csv);
  if (outcome.log.best_policy) outcome.log.best_policy->save((dir / "best_policy.txt").string());
  if (outcome.log.final_policy)
    outcome.log.final_policy->save((dir / "final_policy.txt").string());
  write_file(dir / "agent.json", outcome.final_agent.dump() + "\n");

  json summary{{"optimal_expectation", optimal.expectation},
               {"optimal_std", optimal.stddev},
               {"best_step", outcome.log.best_step},
               {"best_eval_mean", outcome.log.best_eval_mean},
               {"evals", outcome.log.evals.size()},
               {"diverged", outcome.log.diverged}};
  if (outcome.log.final_stats) {
    summary["final_mean"] = outcome.log.final_stats->mean;
    summary["final_std"] = outcome.log.final_stats->stddev;
    summary["final_runs"] = outcome.log.final_stats->runs;
  }
  if (outcome.log.evals.size() >= 3) {
    summary["hitting_ratio"] = hitting_ratio(outcome.log, optimal, config.tau);
    summary["hitting_ratio_literal"] = hitting_ratio(outcome.log, optimal, 0.0025);
    summary["ruggedness"] = ruggedness(outcome.log);
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  SvgSeries curve{"evaluation mean", {}, false};
  for (const auto& e : outcome.log.evals)
    curve.points.emplace_back(static_cast<double>(e.train_step), e.mean);
  SvgSeries opt_line{"optimal expectation",
                     {{0.0, optimal.expectation},
                      {static_cast<double>(outcome.log.evals.back().train_step),
                       optimal.expectation}},
                     false};
  save_svg_chart((dir / "progress.svg").string(), "training progress", "train step",
                 "mean runtime", {curve, opt_line});
}

int cmd_train(ExperimentConfig config, const std::string& seeds_text, const std::string& out,
              bool resume) {
  const std::vector<std::uint64_t> seeds =
      seeds_text.empty() ? std::vector<std::uint64_t>{config.seed} : parse_seed_list(seeds_text);
  const fs::path root = ensure_dir(out.empty() ? "results" : out);
  for (std::uint64_t seed : seeds) {
    config.seed = seed;
    const fs::path dir = root / ("seed_" + std::to_string(seed));
    const Portfolio K = config.resolve_portfolio();
    const ImprovementTable table(config.n);
    const OptimalStats optimal = optimal_stats_for(config, K, table);
    std::optional<ResumeState> state;
    if (resume) {
      std::ifstream agent_in(dir / "agent.json");
      std::ifstream log_in(dir / "log.csv");
      if (!agent_in || !log_in)
        throw_error(ErrorCode::invalid_argument,
                    "no checkpoint to resume in " + dir.string());
      ResumeState rs;
      agent_in >> rs.agent_checkpoint;
      rs.evals = ExperimentLog::read_csv(log_in);
      rs.completed_steps = rs.evals.empty() ? 0 : rs.evals.back().train_step;
      std::ifstream best_in(dir / "best_policy.txt");
      std::ifstream summary_in(dir / "summary.json");
      if (best_in && summary_in) {
        std::ostringstream text;
        text << best_in.rdbuf();
        rs.best_policy = Policy::parse(text.str());
        json summary;
        summary_in >> summary;
        rs.best_eval_mean = summary.value("best_eval_mean", 0.0);
        rs.best_step = summary.value("best_step", 0LL);
      }
      state = std::move(rs);
    }
    try {
      const TrainOutcome outcome =
          train_with_checkpoint(config, state ? &*state : nullptr);
      write_train_outputs(dir, config, outcome, optimal);
      std::cout << "seed " << seed << ": best eval mean " << outcome.log.best_eval_mean
                << " at step " << outcome.log.best_step;
      if (outcome.log.final_stats)
        std::cout << "; final " << outcome.log.final_stats->runs << "-run mean "
                  << outcome.log.final_stats->mean;
      std::cout << " (optimal " << optimal.expectation << ")\n";
    } catch (const TrainingDivergedError& e) {
      // Keep what we have: the partial log plus its best checkpoint.
      TrainOutcome partial;
      partial.log = e.partial_log();
      partial.final_agent = json::object();
      write_train_outputs(dir, config, partial, optimal);
      throw;
    }
  }
  return 0;
}

int cmd_metrics(const std::string& log_file, int n, const std::string& portfolio,
                const std::string& family, int k, double tau, bool empirical, int runs,
                std::uint64_t seed, int jobs) {
  std::ifstream is(log_file);
  if (!is) throw_error(ErrorCode::parse, "cannot read " + log_file);
  const auto evals = ExperimentLog::read_csv(is);
  const Portfolio K = resolve_portfolio(n, portfolio, family, k, jobs);
  const ImprovementTable table(n);
  const Policy optimal = optimal_restricted_policy(K, table);
  OptimalStats stats{expected_runtime(optimal, table), std::sqrt(runtime_variance(optimal, table))};
  if (empirical) {
    const RunStats emp = estimate_runtime(optimal, Instance::canonical(n), runs, seed,
                                          EnvSpec::default_cutoff(n), jobs);
    stats.stddev = emp.stddev;
  }
  json report{{"evals", evals.size()},
              {"optimal_expectation", stats.expectation},
              {"optimal_std", stats.stddev},
              {"tau", tau},
              {"hitting_ratio", hitting_ratio(evals, stats, tau)},
              {"hitting_ratio_literal", hitting_ratio(evals, stats, 0.0025)},
              {"ruggedness", ruggedness(evals)}};
  std::cout << report.dump(2) << '\n';
  return 0;
}

// --- reproduce ---

int cmd_reproduce_table1(const std::vector<int>& ns, int kmin, int kmax, int jobs,
                         std::uint64_t cap, const std::string& out) {
  const fs::path dir = ensure_dir(out);
  std::ofstream csv(dir / "table1.csv");
  csv << "n;k;portfolio;normalized_runtime\n";
  std::vector<SvgSeries> series;
  for (int n : ns) {
    SvgSeries s{"n=" + std::to_string(n), {}, true};
    for (int k = kmin; k <= kmax; ++k) {
      const std::uint64_t count = binomial_count(n - 1, k - 1);
      if (count > cap)
        throw_error(ErrorCode::enumeration_too_large,
                    "n=" + std::to_string(n) + " k=" + std::to_string(k) + " needs " +
                        std::to_string(count) + " evaluations; raise --cap to allow");
      const SearchResult r = search_optimal_portfolio(k, n, jobs);
      const double normalized = r.moments.expectation / (static_cast<double>(n) * n);
      csv << n << ';' << k << ';';
      for (std::size_t i = 0; i < r.portfolio.radii.size(); ++i)
        csv << (i ? " " : "") << r.portfolio.radii[i];
      csv << ';' << std::setprecision(10) << normalized << '\n';
      s.points.emplace_back(k, normalized);
      std::cout << "n=" << n << " k=" << k << " -> {" << r.portfolio.to_string() << "} "
                << std::setprecision(10) << normalized << '\n';
    }
    series.push_back(std::move(s));
  }
  save_svg_chart((dir / "table1.svg").string(), "optimal portfolios", "portfolio size k",
                 "expected runtime / n^2", series);
  return 0;
}

int cmd_reproduce_table2(const std::vector<int>& ns, const std::vector<int>& ks, int jobs,
                         const std::string& out) {
  const fs::path dir = ensure_dir(out);
  std::ofstream csv(dir / "table2.csv");
  csv << "n;k;family;portfolio;breaking_points;breaking_points_over_n\n";
  for (int n : ns) {
    const ImprovementTable table(n);
    for (int k : ks) {
      std::vector<SvgSeries> series;
      for (FamilyKind kind : {FamilyKind::optimal, FamilyKind::powers_of_2,
                              FamilyKind::initial_segment, FamilyKind::evenly_spread}) {
        const Portfolio K = kind == FamilyKind::optimal
                                ? search_optimal_portfolio(k, n, jobs).portfolio
                                : make_portfolio(kind, k, n);
        const auto bp = breaking_points_bisect(K, table);
        csv << n << ';' << k << ';' << family_to_string(kind) << ';';
        for (std::size_t i = 0; i < K.radii.size(); ++i) csv << (i ? " " : "") << K.radii[i];
        csv << ';';
        for (std::size_t i = 0; i < bp.size(); ++i) csv << (i ? " " : "") << bp[i];
        csv << ';';
        for (std::size_t i = 0; i < bp.size(); ++i)
          csv << (i ? " " : "") << static_cast<double>(bp[i]) / n;
        csv << '\n';
        const Policy policy = optimal_restricted_policy(K, table);
        SvgSeries s{family_to_string(kind), {}, false};
        for (int i = 0; i < n; ++i) s.points.emplace_back(i, policy(i));
        series.push_back(std::move(s));
      }
      save_svg_chart((dir / ("table2_n" + std::to_string(n) + "_k" + std::to_string(k) + ".svg"))
                         .string(),
                     "optimal policies, n=" + std::to_string(n) + ", k=" + std::to_string(k),
                     "fitness", "search radius", series);
    }
  }
  std::cout << "wrote " << (dir / "table2.csv").string() << '\n';
  return 0;
}

int cmd_reproduce_fig1(int n, int k, std::uint64_t cap, const std::string& out) {
  const fs::path dir = ensure_dir(out);
  const auto records = sweep_all_portfolios(k, n, true, cap);
  std::ofstream csv(dir / "fig1_sweep.csv");
  csv << "portfolio;expected_runtime;normalized\n";
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < rec.radii.size(); ++i) csv << (i ? " " : "") << rec.radii[i];
    csv << ';' << rec.expected_runtime << ';' << rec.normalized << '\n';
  }
  std::ofstream cdf(dir / "fig1_cdf.csv");
  cdf << "normalized;cumulative_fraction\n";
  SvgSeries curve{"portfolios", {}, false};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double fraction = static_cast<double>(i + 1) / static_cast<double>(records.size());
    cdf << records[i].normalized << ';' << fraction << '\n';
    curve.points.emplace_back(records[i].normalized, fraction);
  }
  save_svg_chart((dir / "fig1.svg").string(),
                 "cumulative fraction of portfolios by expected runtime, n=" + std::to_string(n),
                 "expected runtime / n^2", "cumulative fraction", {curve});
  std::cout << "portfolios: " << records.size() << ", min normalized: " << records.front().normalized
            << '\n';
  return 0;
}

int cmd_reproduce_fig4(int n, int kmin, int kmax, int jobs, std::uint64_t cap,
                       const std::string& out) {
  const fs::path dir = ensure_dir(out);
  const ImprovementTable table(n);
  std::ofstream csv(dir / "fig4.csv");
  csv << "n;k;family;normalized_runtime\n";
  std::vector<SvgSeries> series;
  for (FamilyKind kind : {FamilyKind::optimal, FamilyKind::powers_of_2,
                          FamilyKind::initial_segment, FamilyKind::evenly_spread}) {
    SvgSeries s{family_to_string(kind), {}, true};
    for (int k = kmin; k <= kmax; ++k) {
      double normalized = 0.0;
      if (kind == FamilyKind::optimal) {
        if (binomial_count(n - 1, k - 1) > cap)
          throw_error(ErrorCode::enumeration_too_large,
                      "optimal family at k=" + std::to_string(k) + " exceeds --cap");
        normalized =
            search_optimal_portfolio(k, n, jobs).moments.expectation / (static_cast<double>(n) * n);
      } else {
        try {
          const Portfolio K = make_portfolio(kind, k, n);
          normalized = optimal_expected_runtime(K, table) / (static_cast<double>(n) * n);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::family_undefined) continue;  // e.g. powers_of_2 for large k
          throw;
        }
      }
      csv << n << ';' << k << ';' << family_to_string(kind) << ';' << std::setprecision(10)
          << normalized << '\n';
      s.points.emplace_back(k, normalized);
    }
    series.push_back(std::move(s));
  }
  save_svg_chart((dir / "fig4.svg").string(),
                 "expected runtimes of optimal policies, n=" + std::to_string(n),
                 "portfolio size k", "expected runtime / n^2", series);
  std::cout << "wrote " << (dir / "fig4.csv").string() << '\n';
  return 0;
}

int cmd_reproduce_training(ExperimentConfig base, const std::vector<int>& ks,
                           const std::string& seeds_text, const std::string& out) {
  const std::vector<std::uint64_t> seeds =
      seeds_text.empty() ? std::vector<std::uint64_t>{1, 2, 3} : parse_seed_list(seeds_text);
  const fs::path root = ensure_dir(out);
  write_file(root / "config.json", base.to_json().dump(2) + "\n");
  std::ofstream csv(root / "training_metrics.csv");
  csv << "n;family;k;seed;hitting_ratio;hitting_ratio_literal;ruggedness;best_eval_mean;"
         "final_mean;final_std;optimal_expectation;optimal_std\n";
  std::vector<SvgSeries> ratio_series;
  for (int k : ks) {
    ExperimentConfig config = base;
    config.k = k;
    const Portfolio K = config.resolve_portfolio();
    const ImprovementTable table(config.n);
    const OptimalStats optimal = optimal_stats_for(config, K, table);
    double ratio_sum = 0.0;
    for (std::uint64_t seed : seeds) {
      config.seed = seed;
      const TrainOutcome outcome = train_with_checkpoint(config);
      const fs::path dir =
          root / ("k" + std::to_string(k) + "_seed" + std::to_string(seed));
      write_train_outputs(dir, config, outcome, optimal);
      const double ratio = hitting_ratio(outcome.log, optimal, config.tau);
      ratio_sum += ratio;
      csv << config.n << ';' << config.family << ';' << k << ';' << seed << ';' << ratio << ';'
          << hitting_ratio(outcome.log, optimal, 0.0025) << ';' << ruggedness(outcome.log) << ';'
          << outcome.log.best_eval_mean << ';'
          << (outcome.log.final_stats ? outcome.log.final_stats->mean : 0.0) << ';'
          << (outcome.log.final_stats ? outcome.log.final_stats->stddev : 0.0) << ';'
          << optimal.expectation << ';' << optimal.stddev << '\n';
      csv.flush();
      std::cout << "k=" << k << " seed=" << seed << ": hitting ratio " << ratio << '\n';
    }
    if (ratio_series.empty()) ratio_series.push_back({"mean hitting ratio", {}, true});
    ratio_series[0].points.emplace_back(k, ratio_sum / static_cast<double>(seeds.size()));
  }
  save_svg_chart((root / "hitting_ratio.svg").string(),
                 "hitting ratio vs portfolio size, " + base.family + ", n=" +
                     std::to_string(base.n),
                 "portfolio size k", "hitting ratio", ratio_series);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LeadingOnes parameter-control benchmark toolkit"};
  app.require_subcommand(1);

  // shared option storage
  int n = 50, k = 3, jobs = 1, runs_i = 2000;
  long long runs = 1000, budget = -1, cutoff_v = -1;
  std::uint64_t seed = 1, cap = 5'000'000;
  double tau = 0.25;
  std::string portfolio, family, out, seeds_text, log_file, trace_file, config_file;
  bool all = false, surrogate = false, resume = false, empirical = false;
  PolicySource source;

  auto add_portfolio_opts = [&](CLI::App* cmd) {
    cmd->add_option("--n", n, "problem dimension");
    cmd->add_option("--portfolio", portfolio, "explicit radii, e.g. 1,2,6");
    cmd->add_option("--family", family,
                    "powers_of_2 | initial_segment | evenly_spread | optimal");
    cmd->add_option("--k", k, "portfolio size for --family");
    cmd->add_option("--jobs", jobs, "worker threads");
  };
  auto add_policy_opts = [&](CLI::App* cmd) {
    cmd->add_option("--policy", source.policy_file, "policy file to load");
    cmd->add_option("--table", source.table, "table policy, e.g. 6,6,2,...");
    cmd->add_option("--breakpoints", source.breakpoints,
                    "breakpoint policy, e.g. 11,24 ('none' for a single radius)");
    cmd->add_option("--constant", source.constant, "constant radius policy");
  };

  auto* eval_cmd = app.add_subcommand("eval-policy", "exact expectation/variance of a policy");
  add_portfolio_opts(eval_cmd);
  add_policy_opts(eval_cmd);
  eval_cmd->add_option("--out", out, "output directory");

  auto* optpol_cmd =
      app.add_subcommand("optimal-policy", "optimal policy and breaking points for a portfolio");
  add_portfolio_opts(optpol_cmd);
  optpol_cmd->add_option("--out", out, "output directory");

  auto* optpf_cmd =
      app.add_subcommand("optimal-portfolio", "brute-force optimal portfolio of size k");
  optpf_cmd->add_option("--n", n, "problem dimension");
  optpf_cmd->add_option("--k", k, "portfolio size")->required();
  optpf_cmd->add_option("--jobs", jobs, "worker threads");
  optpf_cmd->add_option("--cap", cap, "candidate cap");
  optpf_cmd->add_option("--out", out, "output directory");

  auto* sweep_cmd =
      app.add_subcommand("sweep-portfolios", "evaluate every portfolio of size k");
  sweep_cmd->add_option("--n", n, "problem dimension");
  sweep_cmd->add_option("--k", k, "portfolio size")->required();
  sweep_cmd->add_flag("--all", all, "do not require radius 1");
  sweep_cmd->add_option("--cap", cap, "candidate cap");
  sweep_cmd->add_option("--out", out, "output directory");

  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo runtime of a policy");
  add_portfolio_opts(sim_cmd);
  add_policy_opts(sim_cmd);
  sim_cmd->add_option("--runs", runs, "number of independent runs");
  sim_cmd->add_option("--seed", seed, "base seed");
  sim_cmd->add_option("--cutoff", cutoff_v, "iteration cutoff (-1: none)");
  sim_cmd->add_flag("--surrogate", surrogate, "use the fitness-chain surrogate");
  sim_cmd->add_option("--trace", trace_file, "write one full episode trace CSV here");

  auto* train_cmd = app.add_subcommand("train", "train an agent against the environment");
  train_cmd->add_option("--config", config_file, "JSON experiment config");
  add_portfolio_opts(train_cmd);
  std::string agent_kind;
  train_cmd->add_option("--agent", agent_kind, "ddqn | tabular");
  train_cmd->add_option("--budget", budget, "training steps (-1: protocol default)");
  train_cmd->add_option("--seed", seed, "seed (single)");
  train_cmd->add_option("--seeds", seeds_text, "comma-separated seeds");
  train_cmd->add_option("--tau", tau, "hit threshold in optimal-std units");
  train_cmd->add_option("--out", out, "results directory");
  train_cmd->add_flag("--resume", resume, "resume from checkpoints in --out");

  auto* metrics_cmd = app.add_subcommand("metrics", "hitting ratio and ruggedness of a log");
  metrics_cmd->add_option("--log", log_file, "log.csv from train")->required();
  add_portfolio_opts(metrics_cmd);
  metrics_cmd->add_option("--tau", tau, "hit threshold in optimal-std units");
  metrics_cmd->add_flag("--empirical-std", empirical, "estimate the optimal std empirically");
  metrics_cmd->add_option("--runs", runs_i, "runs for the empirical std");
  metrics_cmd->add_option("--seed", seed, "seed for the empirical std");

  auto* repro = app.add_subcommand("reproduce", "canned reproductions");
  repro->require_subcommand(1);
  std::string ns_text = "50,100", ks_text = "3,4";
  int kmin = 2, kmax = 6;

  auto* t1 = repro->add_subcommand("table1", "optimal portfolios and runtimes");
  t1->add_option("--n", ns_text, "dimensions, comma separated");
  t1->add_option("--kmin", kmin, "smallest k");
  t1->add_option("--kmax", kmax, "largest k");
  t1->add_option("--jobs", jobs, "worker threads");
  t1->add_option("--cap", cap, "per-search candidate cap");
  t1->add_option("--out", out, "output directory")->required();

  auto* t2 = repro->add_subcommand("table2", "breaking points of the four families");
  t2->add_option("--n", ns_text, "dimensions, comma separated");
  t2->add_option("--k", ks_text, "portfolio sizes, comma separated");
  t2->add_option("--jobs", jobs, "worker threads");
  t2->add_option("--out", out, "output directory")->required();

  auto* f1 = repro->add_subcommand("fig1", "cumulative sweep curve");
  f1->add_option("--n", n, "problem dimension");
  f1->add_option("--k", k, "portfolio size");
  f1->add_option("--cap", cap, "candidate cap");
  f1->add_option("--out", out, "output directory")->required();

  auto* f4 = repro->add_subcommand("fig4", "family comparison across k");
  f4->add_option("--n", n, "problem dimension");
  f4->add_option("--kmin", kmin, "smallest k");
  f4->add_option("--kmax", kmax, "largest k");
  f4->add_option("--jobs", jobs, "worker threads");
  f4->add_option("--cap", cap, "candidate cap for the optimal family");
  f4->add_option("--out", out, "output directory")->required();

  auto* tr = repro->add_subcommand("training", "hitting ratio / ruggedness across k");
  tr->add_option("--n", n, "problem dimension");
  tr->add_option("--family", family, "portfolio family");
  tr->add_option("--k", ks_text, "portfolio sizes, comma separated");
  tr->add_option("--seeds", seeds_text, "comma-separated seeds");
  tr->add_option("--budget", budget, "training steps per run (-1: protocol default)");
  tr->add_option("--agent", agent_kind, "ddqn | tabular");
  tr->add_option("--tau", tau, "hit threshold in optimal-std units");
  tr->add_option("--jobs", jobs, "worker threads");
  tr->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval_policy(n, portfolio, family, k, source, out, jobs);
    if (optpol_cmd->parsed()) return cmd_optimal_policy(n, portfolio, family, k, out, jobs);
    if (optpf_cmd->parsed()) return cmd_optimal_portfolio(n, k, jobs, cap, out);
    if (sweep_cmd->parsed()) return cmd_sweep(n, k, all, cap, out);
    if (sim_cmd->parsed()) {
      std::optional<long long> cutoff;
      if (cutoff_v >= 0) cutoff = cutoff_v;
      return cmd_simulate(n, portfolio, family, k, source, runs, seed, cutoff, surrogate,
                          trace_file, jobs);
    }
    if (train_cmd->parsed() || tr->parsed()) {
      ExperimentConfig config;
      if (!config_file.empty()) {
        std::ifstream is(config_file);
        if (!is) throw_error(ErrorCode::parse, "cannot read " + config_file);
        json j;
        is >> j;
        config = ExperimentConfig::from_json(j);
      }
      if (n != 50 || config_file.empty()) config.n = n;
      if (!family.empty()) config.family = family;
      if (!portfolio.empty()) config.radii = parse_int_list(portfolio);
      if (!agent_kind.empty()) config.agent = agent_kind;
      if (budget >= 0) config.budget = budget;
      config.tau = tau;
      config.jobs = jobs;
      config.seed = seed;
      if (train_cmd->parsed()) {
        config.k = k;
        return cmd_train(config, seeds_text, out, resume);
      }
      return cmd_reproduce_training(config, parse_int_list(ks_text), seeds_text, out);
    }
    if (metrics_cmd->parsed())
      return cmd_metrics(log_file, n, portfolio, family, k, tau, empirical, runs_i, seed, jobs);
    if (t1->parsed())
      return cmd_reproduce_table1(parse_int_list(ns_text), kmin, kmax, jobs, cap, out);
    if (t2->parsed())
      return cmd_reproduce_table2(parse_int_list(ns_text), parse_int_list(ks_text), jobs, out);
    if (f1->parsed()) return cmd_reproduce_fig1(n, k, cap, out);
    if (f4->parsed()) return cmd_reproduce_fig4(n, kmin, kmax, jobs, cap, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
