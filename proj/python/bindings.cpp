#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "lobench/env.hpp"
#include "lobench/experiment.hpp"
#include "lobench/families.hpp"
#include "lobench/improvement.hpp"
#include "lobench/metrics.hpp"
#include "lobench/policy.hpp"
#include "lobench/runtime.hpp"
#include "lobench/simulate.hpp"

namespace py = pybind11;
using namespace lobench;

namespace {

Policy make_policy(int n, const std::vector<int>& radii,
                   const std::optional<std::vector<int>>& table,
                   const std::optional<std::vector<int>>& breakpoints) {
  Portfolio portfolio = Portfolio::of(n, radii);
  if (table) return Policy::from_table(std::move(portfolio), *table);
  if (breakpoints) return Policy::from_breakpoints(std::move(portfolio), *breakpoints);
  return optimal_restricted_policy(portfolio);
}

py::dict stats_to_dict(const RunStats& s) {
  py::dict d;
  d["runs"] = s.runs;
  d["mean"] = s.mean;
  d["std"] = s.stddev;
  d["min"] = s.min;
  d["max"] = s.max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact parameter-control ground truth and simulators for the "
            "prefix-counting benchmark";

  py::register_exception<Error>(m, "BenchError");

  m.def("improvement_probability", &improvement_probability, py::arg("r"), py::arg("i"),
        py::arg("n"), "Probability that flipping exactly r bits improves fitness i.");
  m.def("prefers_larger", &prefers_larger, py::arg("r"), py::arg("i"), py::arg("n"),
        "True iff q(r, i) <= q(r+1, i), ties included.");
  m.def("optimal_radius_full", &optimal_radius_full, py::arg("i"), py::arg("n"),
        "floor(n / (i+1)): the unrestricted optimal radius at fitness i.");
  m.def(
      "leading_ones", [](const BitString& x) { return leading_ones(x); }, py::arg("bits"),
      "Length of the maximal all-ones prefix.");

  py::class_<Policy>(m, "Policy")
      .def_static(
          "from_table",
          [](int n, const std::vector<int>& radii, const std::vector<int>& table) {
            return Policy::from_table(Portfolio::of(n, radii), table);
          },
          py::arg("n"), py::arg("radii"), py::arg("table"))
      .def_static(
          "from_breakpoints",
          [](int n, const std::vector<int>& radii, const std::vector<int>& breakpoints) {
            return Policy::from_breakpoints(Portfolio::of(n, radii), breakpoints);
          },
          py::arg("n"), py::arg("radii"), py::arg("breakpoints"))
      .def_static("constant", &Policy::constant, py::arg("n"), py::arg("radius"))
      .def_property_readonly("n", &Policy::n)
      .def_property_readonly("radii", [](const Policy& p) { return p.portfolio().radii; })
      .def("__call__", &Policy::operator(), py::arg("fitness"))
      .def("table", [](const Policy& p) { return p.to_table().table(); })
      .def("serialize", &Policy::serialize)
      .def_static("parse", &Policy::parse, py::arg("text"))
      .def("__repr__", [](const Policy& p) {
        return "<Policy n=" + std::to_string(p.n()) + " portfolio {" +
               p.portfolio().to_string() + "}>";
      });

  m.def(
      "breaking_points",
      [](int n, const std::vector<int>& radii) {
        const Portfolio k = Portfolio::of(n, radii);
        return breaking_points_bisect(k, ImprovementTable(n));
      },
      py::arg("n"), py::arg("radii"),
      "Breaking points of the optimal policy for the portfolio.");
  m.def(
      "optimal_policy",
      [](int n, const std::vector<int>& radii) {
        return optimal_restricted_policy(Portfolio::of(n, radii));
      },
      py::arg("n"), py::arg("radii"));
  m.def("optimal_full_policy", &optimal_full_policy, py::arg("n"));
  m.def(
      "expected_runtime", [](const Policy& p) { return expected_runtime(p); }, py::arg("policy"));
  m.def(
      "runtime_variance", [](const Policy& p) { return runtime_variance(p); }, py::arg("policy"));

  m.def(
      "make_portfolio",
      [](const std::string& kind, int k, int n) {
        return make_portfolio(family_from_string(kind), k, n).radii;
      },
      py::arg("kind"), py::arg("k"), py::arg("n"));
  m.def(
      "search_optimal_portfolio",
      [](int n, int k, int jobs) {
        const SearchResult r = search_optimal_portfolio(k, n, jobs);
        py::dict d;
        d["portfolio"] = r.portfolio.radii;
        d["expectation"] = r.moments.expectation;
        d["variance"] = r.moments.variance;
        d["normalized"] = r.moments.expectation / (static_cast<double>(n) * n);
        d["candidates"] = r.candidates;
        return d;
      },
      py::arg("n"), py::arg("k"), py::arg("jobs") = 1);
  m.def(
      "sweep_portfolios",
      [](int n, int k, bool require_radius_one, std::uint64_t cap) {
        const auto records = sweep_all_portfolios(k, n, require_radius_one, cap);
        py::list out;
        for (const auto& rec : records)
          out.append(py::make_tuple(rec.radii, rec.expected_runtime, rec.normalized));
        return out;
      },
      py::arg("n"), py::arg("k"), py::arg("require_radius_one") = true,
      py::arg("cap") = kDefaultSweepCap);

  m.def(
      "estimate_runtime",
      [](const Policy& policy, long long runs, std::uint64_t seed,
         std::optional<long long> cutoff, bool surrogate, int jobs) {
        if (surrogate) {
          const ImprovementTable table(policy.n());
          return stats_to_dict(
              stats_of_runtimes(sample_runtimes_surrogate(policy, table, runs, seed, cutoff, jobs)));
        }
        return stats_to_dict(
            estimate_runtime(policy, Instance::canonical(policy.n()), runs, seed, cutoff, jobs));
      },
      py::arg("policy"), py::arg("runs"), py::arg("seed") = 1,
      py::arg("cutoff") = std::nullopt, py::arg("surrogate") = false, py::arg("jobs") = 1);

  py::class_<Env>(m, "Env")
      .def(py::init([](int n, const std::vector<int>& radii, std::uint64_t seed,
                       std::optional<long long> cutoff, bool surrogate, bool raw_observation) {
             return Env(EnvSpec::make(n, Portfolio::of(n, radii),
                                      surrogate ? Backend::surrogate : Backend::bitstring,
                                      raw_observation ? ObservationKind::raw_fitness
                                                      : ObservationKind::normalized_fitness,
                                      cutoff),
                        seed);
           }),
           py::arg("n"), py::arg("radii"), py::arg("seed") = 1,
           py::arg("cutoff") = std::nullopt, py::arg("surrogate") = false,
           py::arg("raw_observation") = false)
      .def("reset", [](Env& env) { return env.reset(); })
      .def(
          "reset_seeded", [](Env& env, std::uint64_t seed) { return env.reset(seed); },
          py::arg("seed"))
      .def(
          "step",
          [](Env& env, int action) {
            const StepResult r = env.step(action);
            py::dict info;
            info["fitness"] = r.fitness;
            if (r.terminal)
              info["terminal"] =
                  *r.terminal == Terminal::optimum_found ? "optimum_found" : "cutoff";
            return py::make_tuple(r.observation, r.reward, r.done, info);
          },
          py::arg("action"))
      .def_property_readonly("fitness", &Env::fitness)
      .def_property_readonly("steps", &Env::steps)
      .def_property_readonly("episode_return", &Env::episode_return)
      .def_property_readonly("actions",
                             [](const Env& env) { return env.spec().portfolio.size(); })
      .def_property_readonly("cutoff", [](const Env& env) { return env.spec().cutoff; });

  m.def(
      "run_experiment",
      [](const py::dict& config_dict) {
        const auto config =
            ExperimentConfig::from_json(nlohmann::json::parse(std::string(
                py::str(py::module_::import("json").attr("dumps")(config_dict)))));
        const ExperimentLog log = train(config);
        const Portfolio k = config.resolve_portfolio();
        const ImprovementTable table(config.n);
        const OptimalStats optimal = optimal_stats_for(config, k, table);
        py::dict out;
        out["optimal_expectation"] = optimal.expectation;
        out["optimal_std"] = optimal.stddev;
        py::list evals;
        for (const auto& e : log.evals)
          evals.append(py::make_tuple(e.train_step, e.mean, e.stddev, e.hit));
        out["evals"] = evals;
        out["best_step"] = log.best_step;
        out["best_eval_mean"] = log.best_eval_mean;
        if (log.best_policy) out["best_policy"] = log.best_policy->to_table().table();
        if (log.final_policy) out["final_policy"] = log.final_policy->to_table().table();
        if (log.final_stats) out["final_stats"] = stats_to_dict(*log.final_stats);
        if (log.evals.size() >= 3) {
          out["hitting_ratio"] = hitting_ratio(log, optimal, config.tau);
          out["ruggedness"] = ruggedness(log);
        }
        return out;
      },
      py::arg("config"),
      "Train an agent from a config dict (same schema as the CLI JSON config).");
}
