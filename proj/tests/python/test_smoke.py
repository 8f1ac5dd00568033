"""Smoke tests for the python bindings: exact values, env contract, training."""

import math

import pytest

import lobench


def test_improvement_probability_basics():
    n = 50
    for i in range(0, n, 7):
        assert lobench.improvement_probability(1, i, n) == pytest.approx(1 / n, rel=1e-15)
    assert lobench.improvement_probability(0, 3, n) == 0.0
    assert lobench.optimal_radius_full(0, n) == n
    assert lobench.optimal_radius_full(1, n) == 25
    assert lobench.prefers_larger(1, 24, n)
    assert not lobench.prefers_larger(1, 25, n)
    with pytest.raises(lobench.BenchError):
        lobench.improvement_probability(-1, 0, n)


def test_leading_ones():
    assert lobench.leading_ones([1, 1, 1, 0, 1]) == 3
    assert lobench.leading_ones([1] * 8) == 8
    assert lobench.leading_ones([0, 1, 1]) == 0


def test_exact_policy_math():
    constant_one = lobench.Policy.constant(50, 1)
    assert lobench.expected_runtime(constant_one) == 1250.0
    assert lobench.runtime_variance(constant_one) == pytest.approx(92500.0, rel=1e-12)

    assert lobench.breaking_points(50, [1, 2, 6]) == [11, 24]
    policy = lobench.optimal_policy(50, [1, 2, 6])
    assert lobench.expected_runtime(policy) / 2500.0 == pytest.approx(0.39568, rel=1e-6)
    assert policy(0) == 6 and policy(12) == 2 and policy(25) == 1

    round_trip = lobench.Policy.parse(policy.serialize())
    assert round_trip.table() == policy.table()


def test_portfolio_lab():
    assert lobench.make_portfolio("evenly_spread", 3, 50) == [1, 17, 33]
    result = lobench.search_optimal_portfolio(50, 2)
    assert result["portfolio"] == [1, 4]
    assert result["normalized"] == pytest.approx(0.4098306452, rel=1e-8)
    sweep = lobench.sweep_portfolios(50, 3)
    assert len(sweep) == 1176
    assert sweep[0][0] == [1, 2, 6]


def test_env_contract():
    env = lobench.Env(20, [1, 2, 6], seed=3, raw_observation=True)
    obs = env.reset()
    assert 0 <= obs <= 20
    total_reward = 0.0
    first = obs
    while True:
        obs, reward, done, info = env.step(0)
        total_reward += reward
        if done:
            break
    assert total_reward == (env.fitness - first) - env.steps
    assert info["terminal"] in ("optimum_found", "cutoff")
    with pytest.raises(lobench.BenchError):
        env.step(0)


def test_simulation_matches_exact_value():
    policy = lobench.optimal_policy(30, [1, 2, 6])
    stats = lobench.estimate_runtime(policy, runs=4000, seed=11, jobs=2)
    exact = lobench.expected_runtime(policy)
    se = stats["std"] / math.sqrt(stats["runs"])
    assert abs(stats["mean"] - exact) < 4 * se
    again = lobench.estimate_runtime(policy, runs=4000, seed=11, jobs=1)
    assert again["mean"] == stats["mean"]


def test_training_round_trip():
    log = lobench.run_experiment(
        {
            "n": 12,
            "radii": [1, 2, 6],
            "agent": "tabular",
            "budget": 20000,
            "eval_period": 2000,
            "eval_runs": 10,
            "final_runs": 50,
            "seed": 4,
        }
    )
    assert len(log["evals"]) == 11
    assert log["final_stats"]["runs"] == 50
    assert set(log["best_policy"]) <= {1, 2, 6}
    assert 0.0 <= log["hitting_ratio"] <= 1.0
    assert log["ruggedness"] >= 0.0
