"""
Unit tests for the brute-force reference oracle
"""
import numpy as np
import pytest

from src.core.exceptions import SizeLimit
from src.core.oracle import OracleVerdict, feasibility_tiny, solve_tiny
from src.core.problem import CqpProblem, validate


class TestSolveTiny:
    """Tests for solve_tiny()"""

    def test_scalar_qp(self, scalar_qp):
        result = solve_tiny(validate(scalar_qp))
        assert result.verdict is OracleVerdict.OPTIMAL
        assert result.x[0] == pytest.approx(1.0)
        assert result.pi[0] == pytest.approx(0.0)
        assert result.active == ()

    def test_bounded_lp(self, bounded_lp):
        result = solve_tiny(validate(bounded_lp))
        assert result.verdict is OracleVerdict.OPTIMAL
        assert result.x[0] == pytest.approx(1.0)
        assert result.pi[0] == pytest.approx(1.0)

    def test_infeasible(self, inconsistent_pair):
        result = solve_tiny(validate(inconsistent_pair))
        assert result.verdict is OracleVerdict.INFEASIBLE

    def test_equality_qp(self, equality_qp):
        result = solve_tiny(validate(equality_qp))
        np.testing.assert_allclose(result.x, [1.0, 1.0])
        np.testing.assert_allclose(result.omega, [1.0])

    def test_unbounded_lp(self):
        """min −x  s.t.  x ≥ 0"""
        problem = validate(CqpProblem.from_arrays(H=[0.0], c=[-1.0], A=[[1.0]], b=[0.0]))
        result = solve_tiny(problem)
        assert result.verdict is OracleVerdict.UNBOUNDED
        assert result.direction[0] > 0.0

    def test_size_limit(self):
        problem = validate(CqpProblem.from_arrays(H=np.ones(7), c=np.zeros(7), A=np.eye(7), b=np.zeros(7)))
        with pytest.raises(SizeLimit):
            solve_tiny(problem)

    def test_degenerate_ties_pick_smallest_set(self):
        """Two copies of the same active constraint: the first index wins"""
        problem = validate(CqpProblem.from_arrays(
            H=[1.0], c=[-3.0], A=[[-1.0], [-1.0]], b=[-1.0, -1.0],
        ))
        result = solve_tiny(problem)
        assert result.active == (0,)
        assert result.x[0] == pytest.approx(1.0)


class TestFeasibilityTiny:
    """Tests for feasibility_tiny()"""

    def test_interval(self):
        problem = validate(CqpProblem.from_arrays(H=[0.0], c=[0.0], A=[[1.0], [-1.0]], b=[0.0, -1.0]))
        result = feasibility_tiny(problem)
        assert result.feasible
        assert -1e-12 <= result.witness[0] <= 1.0 + 1e-12

    def test_inconsistent_pair_certificate(self, inconsistent_pair):
        result = feasibility_tiny(validate(inconsistent_pair))
        assert not result.feasible
        np.testing.assert_allclose(result.pi, [1.0, 1.0], atol=1e-9)
        np.testing.assert_allclose(inconsistent_pair.A.T @ result.pi, [0.0], atol=1e-9)
        assert result.gain == pytest.approx(1.0)

    def test_equality_against_bound(self):
        """x = 2 with −x ≥ −1"""
        problem = validate(CqpProblem.from_arrays(
            H=[1.0], c=[0.0], A=[[-1.0]], b=[-1.0], C=[[1.0]], d=[2.0],
        ))
        result = feasibility_tiny(problem)
        assert not result.feasible
        assert result.violation == pytest.approx(1.0)
        residual = problem.A.T @ result.pi + problem.C.T @ result.omega
        np.testing.assert_allclose(residual, [0.0], atol=1e-9)
        assert np.all(result.pi >= 0.0)
        assert problem.b @ result.pi + problem.d @ result.omega > 0.0
