"""
IsQP Generators
Təsadüfi CQP nümunələri (feasible / infeasible), infeasible başlanğıc
nöqtələri və SVM kvadratik proqramları.

All random draws come from numpy's Generator(PCG64(seed)); its normal
sampler is platform independent, so identical seeds give bit-identical
instances everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.core.exceptions import DimensionMismatch, ProblemFormatError
from src.core.problem import CqpProblem
from src.utils.helpers import load_numeric_csv
from src.utils.logger import get_logger

logger = get_logger()

MAX_START_SAMPLES = 100


class HessianKind(Enum):
    """Hessian tipi: diagonal U(0,1) və ya sıfır (LP)."""
    STRONGLY_CONVEX = "sc"
    LINEAR = "lp"


@dataclass(frozen=True)
class GenSpec:
    """Sizes, Hessian kind, feasibility flag and 64-bit seed of one instance."""
    m: int
    n: int
    p: int = 0
    hessian_kind: HessianKind = HessianKind.STRONGLY_CONVEX
    feasible: bool = True
    seed: int = 0

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


@dataclass(frozen=True)
class SvmData:
    """Training patterns (m̄×n̄) and labels in {−1, +1}."""
    patterns: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.patterns.ndim != 2 or self.labels.shape != (self.patterns.shape[0],):
            raise ProblemFormatError(
                f"patterns {self.patterns.shape} and labels {self.labels.shape} disagree"
            )
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise ProblemFormatError("labels must be -1 or +1")

    @property
    def n_patterns(self) -> int:
        return self.patterns.shape[0]

    @property
    def n_features(self) -> int:
        return self.patterns.shape[1]

    def accuracy(self, w: np.ndarray, beta: float) -> float:
        """sign(Pw − β) ilə etiketlərin üst-üstə düşmə nisbəti."""
        predicted = np.where(self.patterns @ w - beta >= 0.0, 1.0, -1.0)
        return float(np.mean(predicted == self.labels))


def _hessian(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.hessian_kind is HessianKind.STRONGLY_CONVEX:
        return rng.uniform(0.0, 1.0, spec.n)
    return np.zeros(spec.n)


def random_feasible(spec: GenSpec) -> Tuple[CqpProblem, np.ndarray]:
    """
    Strictly feasible instance with a known interior point.

    Draw order: A, C, c, H (sc only), x_feas, s_feas ~ U(1, 2);
    then b = A·x_feas − s_feas and d = C·x_feas.
    """
    rng = spec.rng()
    A = rng.standard_normal((spec.m, spec.n))
    C = rng.standard_normal((spec.p, spec.n))
    c = rng.standard_normal(spec.n)
    H = _hessian(spec, rng)
    x_feas = rng.standard_normal(spec.n)
    s_feas = rng.uniform(1.0, 2.0, spec.m)

    problem = CqpProblem(
        n=spec.n, m=spec.m, p=spec.p,
        H=H, c=c, A=A, b=A @ x_feas - s_feas, C=C, d=C @ x_feas,
    )
    return problem, x_feas


def random_infeasible(spec: GenSpec) -> CqpProblem:
    """
    Instance whose last inequality contradicts row i < m − 1.

    aᵢᵀx ≥ bᵢ together with −aᵢᵀx ≥ −bᵢ + δ, δ ∈ (0, 1), forces 0 ≥ δ.
    """
    if spec.m < 2:
        raise DimensionMismatch(f"infeasible recipe needs m >= 2, got m={spec.m}")

    rng = spec.rng()
    A = rng.standard_normal((spec.m, spec.n))
    C = rng.standard_normal((spec.p, spec.n))
    c = rng.standard_normal(spec.n)
    H = _hessian(spec, rng)
    b = rng.standard_normal(spec.m)
    d = rng.standard_normal(spec.p)

    i = int(rng.integers(0, spec.m - 1))
    delta = 0.0
    while delta == 0.0:
        delta = float(rng.uniform(0.0, 1.0))

    A[-1] = -A[i]
    b[-1] = -b[i] + delta
    return CqpProblem(n=spec.n, m=spec.m, p=spec.p, H=H, c=c, A=A, b=b, C=C, d=d)


def generate(spec: GenSpec) -> Tuple[CqpProblem, Optional[np.ndarray]]:
    """GenSpec-ə görə feasible və ya infeasible nümunə."""
    if spec.feasible:
        return random_feasible(spec)
    return random_infeasible(spec), None


def infeasible_start_point(problem: CqpProblem, seed: int) -> np.ndarray:
    """
    Standard-normal x0 that violates at least one constraint.

    After MAX_START_SAMPLES draws the last sample is returned with a warning.
    """
    if problem.m + problem.p == 0:
        raise DimensionMismatch("problem has no constraints")

    rng = np.random.Generator(np.random.PCG64(seed))
    x0 = rng.standard_normal(problem.n)
    for _ in range(MAX_START_SAMPLES):
        if problem.constraint_violation(x0) > 0.0:
            return x0
        x0 = rng.standard_normal(problem.n)

    logger.warning(f"No infeasible start found after {MAX_START_SAMPLES} samples; using a feasible one")
    return x0


def svm_problem(data: SvmData) -> CqpProblem:
    """
    Hard-margin QP over x = [w; β]:  min ½‖w‖²  s.t.  L(Pw − β·1) ≥ 1.
    """
    labels = data.labels
    A = np.hstack([labels[:, None] * data.patterns, -labels[:, None]])
    n = data.n_features + 1
    H = np.concatenate([np.ones(data.n_features), [0.0]])
    return CqpProblem(
        n=n, m=data.n_patterns, p=0,
        H=H, c=np.zeros(n), A=A, b=np.ones(data.n_patterns),
        C=np.zeros((0, n)), d=np.zeros(0),
    )


def svm_relaxed_problem(data: SvmData, tau: float) -> CqpProblem:
    """
    Soft-margin QP over x = [w; β; ν]:
    min ½‖w‖² + τν  s.t.  L(Pw − β·1) + ν·1 ≥ 1,  ν ≥ 0.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")

    labels = data.labels
    m_bar, n_bar = data.n_patterns, data.n_features
    n = n_bar + 2
    rows = np.hstack([labels[:, None] * data.patterns, -labels[:, None], np.ones((m_bar, 1))])
    nu_row = np.zeros((1, n))
    nu_row[0, -1] = 1.0
    A = np.vstack([rows, nu_row])
    b = np.concatenate([np.ones(m_bar), [0.0]])
    c = np.zeros(n)
    c[-1] = tau
    H = np.concatenate([np.ones(n_bar), [0.0, 0.0]])
    return CqpProblem(
        n=n, m=m_bar + 1, p=0,
        H=H, c=c, A=A, b=b, C=np.zeros((0, n)), d=np.zeros(0),
    )


def synthetic_svm_data(m_bar: int, n_bar: int, seed: int, separation: float = 4.0) -> SvmData:
    """
    İki Gaussian sinif: x = N(0, I) + ℓ·(separation/2)·u, u təsadüfi vahid vektor.

    Labels alternate +1, −1 so both classes have ⌈m̄/2⌉ / ⌊m̄/2⌋ members.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    direction = rng.standard_normal(n_bar)
    direction /= np.linalg.norm(direction)
    labels = np.where(np.arange(m_bar) % 2 == 0, 1.0, -1.0)
    patterns = rng.standard_normal((m_bar, n_bar)) + labels[:, None] * (0.5 * separation) * direction
    return SvmData(patterns=patterns, labels=labels)


def load_svm_csv(path: str) -> SvmData:
    """
    SVM CSV: bir sətir bir pattern, son sütun etiket (−1/+1).

    Raises:
        ProblemFormatError: unreadable file or bad labels
    """
    try:
        table = load_numeric_csv(path)
    except (OSError, ValueError) as e:
        raise ProblemFormatError(f"cannot read SVM data from {path}: {e}") from e
    if table.shape[1] < 2:
        raise ProblemFormatError(f"{path}: need at least one feature column and a label column")
    return SvmData(patterns=table[:, :-1], labels=table[:, -1])
