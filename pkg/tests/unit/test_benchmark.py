"""
Unit tests for size sweeps
"""
import pytest

from src.core.benchmark import (
    BENCH_COLUMNS,
    BenchConfig,
    InstanceOutcome,
    instance_seeds,
    run_instance,
    summarize,
    sweep,
)
from src.core.gen import HessianKind
from src.core.solver_types import SolveStatus
from src.utils.config_models import BaseIterationSettings, PenaltySettings, SolveOptions


def _outcome(n, rep, status, iterations=10, phi_increases=0):
    return InstanceOutcome(n=n, rep=rep, status=status, iterations=iterations,
                           elapsed_seconds=0.01, phi_increases=phi_increases)


class TestBenchConfig:
    """Tests for BenchConfig validation"""

    def test_rejects_zero_reps(self):
        with pytest.raises(ValueError):
            BenchConfig(m=10, ns=[2], reps=0)

    def test_rejects_unknown_p_rule(self):
        with pytest.raises(ValueError):
            BenchConfig(m=10, ns=[2], p_rule="all")

    def test_infeasible_needs_two_rows(self):
        with pytest.raises(ValueError):
            BenchConfig(m=1, ns=[2], infeasible=True)

    def test_p_rule(self):
        assert BenchConfig(m=10, ns=[5], p_rule="half").p_for(5) == 2
        assert BenchConfig(m=10, ns=[5]).p_for(5) == 0


class TestInstanceSeeds:
    """Tests for instance_seeds()"""

    def test_deterministic_and_distinct(self):
        assert instance_seeds(0, 10, 3) == instance_seeds(0, 10, 3)
        assert instance_seeds(0, 10, 3) != instance_seeds(0, 10, 4)
        assert instance_seeds(0, 10, 3) != instance_seeds(1, 10, 3)


class TestSummarize:
    """Tests for summarize()"""

    def test_feasible_sweep_counts_false_positives(self):
        config = BenchConfig(m=10, ns=[2], reps=3)
        outcomes = [
            _outcome(2, 0, SolveStatus.OPTIMAL, 10, 1),
            _outcome(2, 1, SolveStatus.INFEASIBLE, 20, 2),
            _outcome(2, 2, SolveStatus.ITERATION_LIMIT, 30, 0),
        ]
        row = summarize(config, 2, outcomes)
        assert tuple(row) == BENCH_COLUMNS
        assert row["mean_iters"] == pytest.approx(20.0)
        assert row["failures"] == 2
        assert row["false_positive_count"] == 1
        assert row["mean_phi_increases"] == pytest.approx(1.0)
        assert row["mean_time_ms"] == pytest.approx(10.0)

    def test_infeasible_sweep_expects_infeasible(self):
        config = BenchConfig(m=10, ns=[2], reps=2, infeasible=True)
        outcomes = [_outcome(2, 0, SolveStatus.INFEASIBLE), _outcome(2, 1, SolveStatus.OPTIMAL)]
        row = summarize(config, 2, outcomes)
        assert row["failures"] == 1
        assert row["false_positive_count"] == 0


class TestSweep:
    """Tests for sweep()"""

    def test_rows_sorted_and_deterministic(self):
        config = BenchConfig(m=30, ns=[4, 2], reps=2, seed=5, kind=HessianKind.STRONGLY_CONVEX)
        first = sweep(config)
        second = sweep(BenchConfig(m=30, ns=[4, 2], reps=2, seed=5, workers=2))
        assert [row["n"] for row in first] == [2, 4]
        for a, b in zip(first, second):
            assert {k: v for k, v in a.items() if k != "mean_time_ms"} == \
                   {k: v for k, v in b.items() if k != "mean_time_ms"}


class TestRunInstance:
    """Tests for run_instance()"""

    def test_penalty_and_base_settings_reach_the_solver(self, monkeypatch):
        import src.core.benchmark as benchmark

        seen = {}
        real_solve = benchmark.solve

        def recording_solve(problem, x0, options, penalty_settings, base_settings):
            seen["options"] = options
            seen["penalty"] = penalty_settings
            seen["base"] = base_settings
            return real_solve(problem, x0, options, penalty_settings, base_settings)

        monkeypatch.setattr(benchmark, "solve", recording_solve)
        penalty = PenaltySettings(sigma1=20.0, sigma2=3.0)
        base = BaseIterationSettings(delta_bar=0.5)
        options = SolveOptions(max_iter=40)
        config = BenchConfig(m=20, ns=[3], reps=1, options=options, penalty=penalty, base=base)

        outcome = run_instance(config, 3, 0)
        assert seen["penalty"] is penalty
        assert seen["base"] is base
        assert seen["options"] is options
        assert outcome.iterations <= 40

    def test_defaults(self):
        config = BenchConfig(m=10, ns=[2])
        assert config.penalty == PenaltySettings()
        assert config.base == BaseIterationSettings()
