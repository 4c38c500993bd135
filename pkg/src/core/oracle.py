"""
IsQP Oracle
Kiçik nümunələr üçün brute-force referans həlledici (test dəstəyi).

solve_tiny enumerates candidate active sets (by size, then
lexicographically) and solves each equality-constrained KKT system.
feasibility_tiny minimizes Σ max(b − Ax, 0) + Σ |Cx − d| over the vertices
of the hyperplane arrangement of [A; C] and, when the optimum is positive,
returns the exact Farkas pair read off the subgradient optimality condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linprog, lsq_linear

from src.core.exceptions import OracleError, SizeLimit
from src.core.problem import CqpProblem

MAX_N = 6
MAX_M = 12
MAX_P = 3

COND_LIMIT = 1e12
FEAS_TOL = 1e-9


class OracleVerdict(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class FeasibilityResult:
    """
    Phase-1 verdict.

    feasible: witness is a point with zero total violation.
    infeasible: (pi, omega) satisfy Aᵀπ + Cᵀω = 0, π ≥ 0 and
    bᵀπ + dᵀω = violation > 0.
    """
    feasible: bool
    witness: np.ndarray
    violation: float
    pi: Optional[np.ndarray] = None
    omega: Optional[np.ndarray] = None

    @property
    def gain(self) -> float:
        return self.violation if not self.feasible else 0.0


@dataclass(frozen=True)
class TinyResult:
    """solve_tiny nəticəsi."""
    verdict: OracleVerdict
    x: Optional[np.ndarray] = None
    pi: Optional[np.ndarray] = None
    omega: Optional[np.ndarray] = None
    objective: Optional[float] = None
    active: Tuple[int, ...] = ()
    direction: Optional[np.ndarray] = None
    feasibility: Optional[FeasibilityResult] = None


def check_size(problem: CqpProblem) -> None:
    """Raises SizeLimit beyond n ≤ 6, m ≤ 12, p ≤ 3."""
    if problem.n > MAX_N or problem.m > MAX_M or problem.p > MAX_P:
        raise SizeLimit(
            f"oracle handles n<={MAX_N}, m<={MAX_M}, p<={MAX_P}; "
            f"got n={problem.n}, m={problem.m}, p={problem.p}"
        )


def _violation(problem: CqpProblem, x: np.ndarray) -> float:
    return float(
        np.sum(np.maximum(problem.b - problem.A @ x, 0.0))
        + np.sum(np.abs(problem.C @ x - problem.d))
    )


def _tolerance(problem: CqpProblem) -> float:
    scale = max(
        1.0,
        float(np.max(np.abs(problem.b))) if problem.m else 0.0,
        float(np.max(np.abs(problem.d))) if problem.p else 0.0,
    )
    return FEAS_TOL * scale


def feasibility_tiny(problem: CqpProblem) -> FeasibilityResult:
    """ℓ1 phase-1 problemini sayma yolu ilə həll edir."""
    check_size(problem)
    rows = np.vstack([problem.A, problem.C])
    rhs = np.concatenate([problem.b, problem.d])
    tol = _tolerance(problem)

    rank = int(np.linalg.matrix_rank(rows)) if rows.size else 0
    best_x = np.zeros(problem.n)
    best_f = _violation(problem, best_x)
    if rank > 0:
        for subset in combinations(range(rows.shape[0]), rank):
            sub = rows[list(subset)]
            if np.linalg.matrix_rank(sub) < rank:
                continue
            x, *_ = np.linalg.lstsq(sub, rhs[list(subset)], rcond=None)
            f = _violation(problem, x)
            if f < best_f - 1e-12 * max(1.0, best_f):
                best_x, best_f = x, f

    if best_f <= tol:
        return FeasibilityResult(feasible=True, witness=best_x, violation=best_f)

    pi, omega = _farkas_from_subgradient(problem, best_x, tol)
    gain = float(problem.b @ pi + problem.d @ omega)
    return FeasibilityResult(feasible=False, witness=best_x, violation=gain, pi=pi, omega=omega)


def _farkas_from_subgradient(
    problem: CqpProblem,
    x: np.ndarray,
    tol: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    0 ∈ ∂f(x) gives π (1 on violated rows, [0,1] on tight rows) and
    ω′ (sign of the equality residual, [−1,1] where it is zero); ω = −ω′.
    """
    gap = problem.b - problem.A @ x
    r = problem.C @ x - problem.d

    violated = gap > tol
    tight = np.abs(gap) <= tol
    eq_zero = np.abs(r) <= tol
    signs = np.where(eq_zero, 0.0, np.sign(r))

    pi = violated.astype(np.float64)
    omega_prime = signs.copy()

    fixed = problem.A.T @ pi - problem.C.T @ omega_prime
    columns = np.hstack([problem.A[tight].T, -problem.C[eq_zero].T])
    if columns.shape[1]:
        lower = np.concatenate([np.zeros(int(tight.sum())), -np.ones(int(eq_zero.sum()))])
        upper = np.ones(columns.shape[1])
        theta = lsq_linear(columns, -fixed, bounds=(lower, upper)).x
        k = int(tight.sum())
        pi[tight] = theta[:k]
        omega_prime[eq_zero] = theta[k:]

    return pi, -omega_prime


def solve_tiny(problem: CqpProblem) -> TinyResult:
    """
    Kiçik CQP üçün dəqiq verdict: optimal, infeasible və ya unbounded.

    Raises:
        SizeLimit: problem exceeds the caps
        OracleError: feasible, no KKT point found and no recession direction
    """
    check_size(problem)
    feasibility = feasibility_tiny(problem)
    if not feasibility.feasible:
        return TinyResult(
            verdict=OracleVerdict.INFEASIBLE,
            pi=feasibility.pi,
            omega=feasibility.omega,
            feasibility=feasibility,
        )

    n, m, p = problem.n, problem.m, problem.p
    H = problem.hess_dense()
    tol = _tolerance(problem)

    best: Optional[TinyResult] = None
    for size in range(0, min(m, n) + 1):
        for subset in combinations(range(m), size):
            w = list(subset)
            A_w = problem.A[w]
            k = len(w)
            K = np.zeros((n + k + p, n + k + p))
            K[:n, :n] = H
            K[:n, n:n + k] = -A_w.T
            K[:n, n + k:] = -problem.C.T
            K[n:n + k, :n] = A_w
            K[n + k:, :n] = problem.C
            if np.linalg.cond(K) > COND_LIMIT:
                continue
            sol = np.linalg.solve(K, np.concatenate([-problem.c, problem.b[w], problem.d]))
            x, lam, omega = sol[:n], sol[n:n + k], sol[n + k:]

            if np.any(problem.A @ x - problem.b < -tol):
                continue
            if p and np.max(np.abs(problem.C @ x - problem.d)) > tol:
                continue
            if np.any(lam < -FEAS_TOL * max(1.0, float(np.max(np.abs(sol))))):
                continue

            objective = problem.objective(x)
            if best is None or objective < best.objective - 1e-12 * max(1.0, abs(best.objective)):
                pi = np.zeros(m)
                pi[w] = np.maximum(lam, 0.0)
                best = TinyResult(
                    verdict=OracleVerdict.OPTIMAL,
                    x=x, pi=pi, omega=omega,
                    objective=objective, active=tuple(w),
                    feasibility=feasibility,
                )

    if best is not None:
        return best

    direction = _recession_direction(problem, H)
    if direction is not None:
        return TinyResult(verdict=OracleVerdict.UNBOUNDED, direction=direction, feasibility=feasibility)
    raise OracleError("no KKT point and no descent recession direction (degenerate instance)")


def _recession_direction(problem: CqpProblem, H: np.ndarray) -> Optional[np.ndarray]:
    """
    d = N u with Hd = 0, Cd = 0, Ad ≥ 0 and cᵀd < 0, u ∈ [−1, 1].
    """
    N = sla.null_space(np.vstack([H, problem.C]))
    if N.shape[1] == 0:
        return None
    res = linprog(
        c=problem.c @ N,
        A_ub=-(problem.A @ N) if problem.m else None,
        b_ub=np.zeros(problem.m) if problem.m else None,
        bounds=[(-1.0, 1.0)] * N.shape[1],
        method="highs",
    )
    if res.status != 0 or res.fun >= -FEAS_TOL:
        return None
    return N @ res.x
