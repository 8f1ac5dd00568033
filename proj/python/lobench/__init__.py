"""Exact ground truth, simulators, and RL training for the prefix-counting
parameter-control benchmark."""

from lobench._core import (
    BenchError,
    Env,
    Policy,
    breaking_points,
    estimate_runtime,
    expected_runtime,
    improvement_probability,
    leading_ones,
    make_portfolio,
    optimal_full_policy,
    optimal_policy,
    optimal_radius_full,
    prefers_larger,
    run_experiment,
    runtime_variance,
    search_optimal_portfolio,
    sweep_portfolios,
)

__all__ = [
    "BenchError",
    "Env",
    "Policy",
    "breaking_points",
    "estimate_runtime",
    "expected_runtime",
    "improvement_probability",
    "leading_ones",
    "make_portfolio",
    "optimal_full_policy",
    "optimal_policy",
    "optimal_radius_full",
    "prefers_larger",
    "run_experiment",
    "runtime_variance",
    "search_optimal_portfolio",
    "sweep_portfolios",
]
