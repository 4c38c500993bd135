"""
IsQP Test Fixtures
Shared fixtures for all tests.
"""

import pytest
import os
import sys

import numpy as np

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

# Test run-ları data/logs altına log faylı yazmasın
os.environ.setdefault('ISQP_LOG_DIR', '')


@pytest.fixture
def scalar_qp():
    """min ½x² − x  s.t.  x ≥ 0  (x* = 1, π* = 0)."""
    from src.core.problem import CqpProblem

    return CqpProblem.from_arrays(H=[1.0], c=[-1.0], A=[[1.0]], b=[0.0])


@pytest.fixture
def inconsistent_pair():
    """x ≥ 1 and −x ≥ 0 (no feasible point)."""
    from src.core.problem import CqpProblem

    return CqpProblem.from_arrays(H=[1.0], c=[0.0], A=[[1.0], [-1.0]], b=[1.0, 0.0])


@pytest.fixture
def equality_qp():
    """min ½‖x‖²  s.t.  x₁ + x₂ = 2,  x ≥ 0  (x* = (1, 1))."""
    from src.core.problem import CqpProblem

    return CqpProblem.from_arrays(
        H=[1.0, 1.0],
        c=[0.0, 0.0],
        A=np.eye(2),
        b=[0.0, 0.0],
        C=[[1.0, 1.0]],
        d=[2.0],
    )


@pytest.fixture
def bounded_lp():
    """min −x  s.t.  −x ≥ −1  (x* = 1)."""
    from src.core.problem import CqpProblem

    return CqpProblem.from_arrays(H=[0.0], c=[-1.0], A=[[-1.0]], b=[-1.0])


@pytest.fixture
def separable_svm():
    """p₁ = 1 (ℓ = +1), p₂ = −1 (ℓ = −1): w = 1, β = 0."""
    from src.core.gen import SvmData

    return SvmData(patterns=np.array([[1.0], [-1.0]]), labels=np.array([1.0, -1.0]))


@pytest.fixture
def overlapping_svm():
    """p₁ = p₂ = 1 with opposite labels: hard margin infeasible."""
    from src.core.gen import SvmData

    return SvmData(patterns=np.array([[1.0], [1.0]]), labels=np.array([1.0, -1.0]))


@pytest.fixture
def random_state():
    """Small strictly interior augmented state on a random problem (n=3, m=5, p=1)."""
    from src.core.gen import GenSpec, random_feasible
    from src.core.problem import augment, validate

    problem, _ = random_feasible(GenSpec(m=5, n=3, p=1, seed=11))
    problem = validate(problem)
    rng = np.random.Generator(np.random.PCG64(3))
    state = augment(problem, rng.standard_normal(3))
    state.pi = rng.uniform(0.5, 2.0, 5)
    state.xi = rng.uniform(0.5, 2.0, 5)
    state.eta = rng.uniform(0.5, 2.0, 1)
    state.zeta = rng.uniform(0.5, 2.0, 1)
    return problem, state
