"""Tests for the derivative-free trust-region minimizer."""

import numpy as np
import pytest

from warmpce.cobyla import (
    NonFiniteObjectiveError,
    OptimizerConfig,
    minimize,
    random_start,
)


def rosenbrock(x):
    return (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2


class TestMinimize:
    def test_1d_quadratic(self):
        result = minimize(
            lambda x: (x[0] - 2.0) ** 2,
            np.array([0.0]),
            OptimizerConfig(max_evals=200),
        )
        assert abs(result.best_params[0] - 2.0) < 1e-3
        assert result.evals_used <= 200

    def test_constant_objective_terminates_early(self):
        result = minimize(
            lambda x: 3.25, np.array([0.5, 1.5, -1.0]), OptimizerConfig(max_evals=200)
        )
        assert result.best_loss == 3.25
        assert result.evals_used < 200

    def test_rosenbrock(self):
        result = minimize(
            rosenbrock, np.array([-1.2, 1.0]), OptimizerConfig(max_evals=1000)
        )
        assert result.best_loss < 0.5
        assert result.evals_used <= 1000

    def test_budget_respected(self):
        calls = []

        def counting(x):
            calls.append(1)
            return float(np.sum(x * x))

        for budget in (1, 3, 10, 50):
            calls.clear()
            result = minimize(
                counting, np.ones(4), OptimizerConfig(max_evals=budget)
            )
            assert len(calls) <= budget
            assert result.evals_used == len(calls)

    def test_best_loss_matches_best_params(self):
        result = minimize(
            rosenbrock, np.array([-1.2, 1.0]), OptimizerConfig(max_evals=300)
        )
        assert result.best_loss == pytest.approx(
            rosenbrock(result.best_params), abs=1e-12
        )

    def test_running_minimum_nonincreasing(self):
        result = minimize(
            rosenbrock, np.array([-1.2, 1.0]), OptimizerConfig(max_evals=400)
        )
        running = np.minimum.accumulate(result.trace)
        assert np.all(np.diff(running) <= 0.0)
        assert result.best_loss == running[-1]

    def test_deterministic_traces(self):
        a = minimize(rosenbrock, np.array([-1.2, 1.0]), OptimizerConfig(max_evals=500))
        b = minimize(rosenbrock, np.array([-1.2, 1.0]), OptimizerConfig(max_evals=500))
        assert a.trace == b.trace
        assert np.array_equal(a.best_params, b.best_params)

    def test_nonfinite_objective_aborts_with_params(self):
        def bad(x):
            return float("nan") if x[0] > 0.5 else float(x[0] ** 2)

        with pytest.raises(NonFiniteObjectiveError) as err:
            minimize(bad, np.array([0.4]), OptimizerConfig(max_evals=100))
        assert err.value.params.shape == (1,)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OptimizerConfig(max_evals=0)
        with pytest.raises(ValueError):
            OptimizerConfig(initial_step=0.1, final_step=0.2)


class TestRandomStart:
    def test_same_seed_identical(self):
        assert np.array_equal(random_start(12, 5), random_start(12, 5))

    def test_different_seeds_differ(self):
        starts = [tuple(random_start(8, s)) for s in range(20)]
        assert len(set(starts)) == 20

    def test_range_and_mean(self):
        samples = np.concatenate([random_start(100, s) for s in range(1000)])
        assert samples.min() >= 0.0
        assert samples.max() < 2 * np.pi
        # mean of U[0, 2pi) is pi; allow 3 sigma
        sigma = 2 * np.pi / np.sqrt(12 * samples.size)
        assert abs(samples.mean() - np.pi) < 3 * sigma

    def test_rejects_zero_count(self):
        with pytest.raises(ValueError):
            random_start(0, 1)
