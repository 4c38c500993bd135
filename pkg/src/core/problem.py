"""
IsQP Problem Module
CQP data modeli, yoxlama, sətir normallaşdırması, relaxation dəyişənləri ilə
genişləndirmə və bütün residual/objective hesablamaları.

Problem (P):   minimize ½xᵀHx + cᵀx   s.t.  A x ≥ b,  C x = d
Augmented:     minimize ½xᵀHx + cᵀx + φ·1ᵀ[z; y]
               s.t. A x + z ≥ b, z ≥ 0, C x + y ≥ d, C x − y ≤ d
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

import numpy as np
import scipy.linalg as sla

from src.core.exceptions import (
    AsymmetricHessian,
    DimensionMismatch,
    IndefiniteHessian,
    ProblemFormatError,
)
from src.utils.diagnostics import DiagnosticLog
from src.utils.helpers import read_json, write_json
from src.utils.logger import get_logger

logger = get_logger()

SYMMETRY_RTOL = 1e-12
RANK_RTOL = 1e-10


def _inf_norm(v: np.ndarray) -> float:
    """‖v‖∞, boş vektor üçün 0."""
    return float(np.max(np.abs(v))) if v.size else 0.0


def _matrix_inf_norm(M: np.ndarray) -> float:
    """Max row sum of |M|, 0 for an empty matrix."""
    if M.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(M), axis=1)))


# =============================================================================
# Domain Types
# =============================================================================

@dataclass(frozen=True)
class CqpProblem:
    """
    Convex QP (H, c, A, b, C, d) with declared sizes (n, m, p).

    H is stored either dense (n×n) or as its diagonal (length-n vector);
    `hessian_is_diagonal` tells which. C/d are (0, n)/(0,) when p = 0.
    Validated instances hold read-only float64 arrays.
    """
    n: int
    m: int
    p: int
    H: np.ndarray
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    C: np.ndarray
    d: np.ndarray

    @classmethod
    def from_arrays(
        cls,
        H,
        c,
        A=None,
        b=None,
        C=None,
        d=None,
    ) -> 'CqpProblem':
        """Ölçüləri massivlərdən çıxararaq problem yaradır (yoxlamadan)."""
        c = np.asarray(c, dtype=np.float64).reshape(-1)
        n = c.shape[0]
        A = np.zeros((0, n)) if A is None else np.atleast_2d(np.asarray(A, dtype=np.float64))
        b = np.zeros(0) if b is None else np.asarray(b, dtype=np.float64).reshape(-1)
        C = np.zeros((0, n)) if C is None else np.atleast_2d(np.asarray(C, dtype=np.float64))
        d = np.zeros(0) if d is None else np.asarray(d, dtype=np.float64).reshape(-1)
        if A.size == 0:
            A = A.reshape(0, n)
        if C.size == 0:
            C = C.reshape(0, n)
        return cls(
            n=n, m=A.shape[0], p=C.shape[0],
            H=np.asarray(H, dtype=np.float64), c=c, A=A, b=b, C=C, d=d,
        )

    @property
    def hessian_is_diagonal(self) -> bool:
        return self.H.ndim == 1

    def hess_matvec(self, x: np.ndarray) -> np.ndarray:
        if self.hessian_is_diagonal:
            return self.H * x
        return self.H @ x

    def hess_dense(self) -> np.ndarray:
        if self.hessian_is_diagonal:
            return np.diag(self.H)
        return np.array(self.H)

    def hess_inf_norm(self) -> float:
        if self.hessian_is_diagonal:
            return _inf_norm(self.H)
        return _matrix_inf_norm(self.H)

    def objective(self, x: np.ndarray) -> float:
        """f(x) = ½xᵀHx + cᵀx."""
        return float(0.5 * x @ self.hess_matvec(x) + self.c @ x)

    def data_scale(self, include_hessian: bool = True) -> float:
        """max{‖H‖∞, ‖c‖∞, ‖A‖∞, ‖C‖∞} over the blocks present (1 if all zero)."""
        parts = [_matrix_inf_norm(self.A)]
        if include_hessian:
            parts += [self.hess_inf_norm(), _inf_norm(self.c)]
        if self.p > 0:
            parts.append(_matrix_inf_norm(self.C))
        scale = max(parts) if parts else 0.0
        return scale if scale > 0.0 else 1.0

    def constraint_violation(self, x: np.ndarray) -> float:
        """max{max(b − Ax, 0), |Cx − d|}."""
        ineq = np.maximum(self.b - self.A @ x, 0.0)
        eq = np.abs(self.C @ x - self.d)
        return max(_inf_norm(ineq), _inf_norm(eq))

    def to_dict(self) -> Dict[str, Any]:
        """Problem JSON formatına çevirir."""
        data: Dict[str, Any] = {
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "H": {"diag": self.H.tolist()} if self.hessian_is_diagonal else {"dense": self.H.tolist()},
            "c": self.c.tolist(),
            "A": self.A.tolist(),
            "b": self.b.tolist(),
        }
        if self.p > 0:
            data["C"] = self.C.tolist()
            data["d"] = self.d.tolist()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CqpProblem':
        """
        Problem JSON dictionary-dən problem yaradır.

        Format: {"n", "m", "p", "H": {"diag": [..]} | {"dense": [[..]]},
                 "c", "A", "b", "C"?, "d"?}
        """
        try:
            n = int(data["n"])
            m = int(data["m"])
            p = int(data.get("p", 0))
            h_spec = data["H"]
            if "diag" in h_spec:
                H = np.asarray(h_spec["diag"], dtype=np.float64)
            elif "dense" in h_spec:
                H = np.asarray(h_spec["dense"], dtype=np.float64)
            else:
                raise ProblemFormatError("H must contain 'diag' or 'dense'")
            c = np.asarray(data["c"], dtype=np.float64)
            A = np.asarray(data.get("A", []), dtype=np.float64)
            b = np.asarray(data.get("b", []), dtype=np.float64)
            C = np.asarray(data.get("C", []), dtype=np.float64)
            d = np.asarray(data.get("d", []), dtype=np.float64)
        except ProblemFormatError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise ProblemFormatError(f"Malformed problem data: {e}") from e

        if A.size == 0:
            A = A.reshape(0, n)
        if C.size == 0:
            C = C.reshape(0, n)
        return cls(n=n, m=m, p=p, H=H, c=c, A=A, b=b, C=C, d=d)


@dataclass(frozen=True)
class ScalingRecord:
    """Row scales D1 (inequalities) and D2 (equalities); original dual = scale · scaled dual."""
    row_scale_ineq: np.ndarray
    row_scale_eq: np.ndarray

    @classmethod
    def identity(cls, m: int, p: int) -> 'ScalingRecord':
        return cls(row_scale_ineq=np.ones(m), row_scale_eq=np.ones(p))


@dataclass
class AugmentedState:
    """
    Primal (x, z, y), slacks (s, t₊, t₋) and duals (π, ξ, η, ζ) of the
    augmented pair.  s = Ax + z − b, t₊ = Cx + y − d, t₋ = −Cx + y + d.
    """
    x: np.ndarray
    z: np.ndarray
    y: np.ndarray
    s: np.ndarray
    t_plus: np.ndarray
    t_minus: np.ndarray
    pi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    zeta: np.ndarray

    def copy(self) -> 'AugmentedState':
        return AugmentedState(**{k: np.array(v, copy=True) for k, v in self.__dict__.items()})

    def is_strictly_interior(self) -> bool:
        return bool(
            np.all(self.s > 0) and np.all(self.z > 0)
            and np.all(self.t_plus > 0) and np.all(self.t_minus > 0)
        )

    def duals_nonnegative(self) -> bool:
        return bool(
            np.all(self.pi >= 0) and np.all(self.xi >= 0)
            and np.all(self.eta >= 0) and np.all(self.zeta >= 0)
        )

    def relaxation_inf_norm(self) -> float:
        """‖[z; y]‖∞."""
        return max(_inf_norm(self.z), _inf_norm(self.y))

    def multiplier_inf_norm(self) -> float:
        """‖[π; η − ζ]‖∞."""
        return max(_inf_norm(self.pi), _inf_norm(self.eta - self.zeta))


@dataclass(frozen=True)
class KktResiduals:
    """G1 (complementarity), G2 (dual feasibility), G3 (scalar) at a state."""
    g1: np.ndarray
    g2: np.ndarray
    g3: float
    stationarity: np.ndarray = field(repr=False)

    @property
    def g1_norm(self) -> float:
        return float(np.linalg.norm(self.g1))

    @property
    def g2_norm(self) -> float:
        return float(np.linalg.norm(self.g2))

    @property
    def g3_abs(self) -> float:
        return abs(self.g3)


# =============================================================================
# Operations
# =============================================================================

def validate(
    problem: CqpProblem,
    check_psd: bool = False,
    diagnostics: Optional[DiagnosticLog] = None,
) -> CqpProblem:
    """
    Problemi yoxlayır və təmizlənmiş (read-only) nüsxəsini qaytarır.

    Raises:
        DimensionMismatch: declared sizes disagree with array shapes,
            m + p = 0, or n < p.
        AsymmetricHessian: relative asymmetry of H above 1e-12.
        IndefiniteHessian: PSD check enabled and H + εI is not factorizable.
    """
    n, m, p = problem.n, problem.m, problem.p
    H = np.asarray(problem.H, dtype=np.float64)
    c = np.asarray(problem.c, dtype=np.float64)
    A = np.asarray(problem.A, dtype=np.float64)
    b = np.asarray(problem.b, dtype=np.float64)
    C = np.asarray(problem.C, dtype=np.float64)
    d = np.asarray(problem.d, dtype=np.float64)

    if A.size == 0 and m == 0:
        A = A.reshape(0, n)
    if C.size == 0 and p == 0:
        C = C.reshape(0, n)

    if n < 1:
        raise DimensionMismatch(f"n must be positive, got {n}")
    if m < 0 or p < 0:
        raise DimensionMismatch(f"negative constraint count (m={m}, p={p})")
    if m + p == 0:
        raise DimensionMismatch("problem has no constraints (m + p = 0)")
    if n < p:
        raise DimensionMismatch(f"more equalities than variables (p={p} > n={n})")

    expected = {
        "c": (c.shape, (n,)),
        "A": (A.shape, (m, n)),
        "b": (b.shape, (m,)),
        "C": (C.shape, (p, n)),
        "d": (d.shape, (p,)),
    }
    for name, (got, want) in expected.items():
        if got != want:
            raise DimensionMismatch(f"{name} has shape {got}, expected {want}")
    if H.shape not in ((n,), (n, n)):
        raise DimensionMismatch(f"H has shape {H.shape}, expected ({n},) or ({n}, {n})")

    arrays = (H, c, A, b, C, d)
    if not all(np.all(np.isfinite(a)) for a in arrays):
        raise DimensionMismatch("problem data contains NaN or Inf")

    if H.ndim == 2:
        h_max = float(np.max(np.abs(H))) if H.size else 0.0
        asym = float(np.max(np.abs(H - H.T))) if H.size else 0.0
        if asym > SYMMETRY_RTOL * h_max:
            raise AsymmetricHessian(
                f"max|H - Hᵀ| = {asym:.3e} exceeds {SYMMETRY_RTOL:g} · max|H| = {h_max:.3e}"
            )
        H = 0.5 * (H + H.T)

    if check_psd:
        _check_psd(H)

    if p > 0:
        rank = _numerical_rank(C)
        if rank < p:
            message = f"C has numerical rank {rank} < p = {p}"
            if diagnostics is not None:
                diagnostics.warn("Rank-deficient C", message, source="problem")
            else:
                logger.warning(f"[problem] Rank-deficient C: {message}")

    frozen = []
    for a in (H, c, A, b, C, d):
        a = np.array(a, dtype=np.float64, copy=True)
        a.setflags(write=False)
        frozen.append(a)
    H, c, A, b, C, d = frozen
    return CqpProblem(n=n, m=m, p=p, H=H, c=c, A=A, b=b, C=C, d=d)


def _check_psd(H: np.ndarray) -> None:
    """H + εI Cholesky faktorizasiyasını yoxlayır."""
    h_max = float(np.max(np.abs(H))) if H.size else 0.0
    eps = 1e-10 * (1.0 + h_max)
    if H.ndim == 1:
        if np.any(H + eps <= 0.0):
            raise IndefiniteHessian("diagonal H has a negative entry")
        return
    try:
        sla.cholesky(H + eps * np.eye(H.shape[0]), lower=True, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise IndefiniteHessian(f"H + {eps:.1e}·I is not positive definite: {e}") from e


def _numerical_rank(M: np.ndarray) -> int:
    """Pivoted QR ilə rank (tolerans 1e-10·‖M‖₂)."""
    if M.size == 0:
        return 0
    _, R, _ = sla.qr(M.T, mode='economic', pivoting=True)
    diag = np.abs(np.diag(R))
    norm = float(np.linalg.norm(M, 2))
    if norm == 0.0:
        return 0
    return int(np.sum(diag > RANK_RTOL * norm))


def normalize_rows(problem: CqpProblem) -> Tuple[CqpProblem, ScalingRecord]:
    """
    Hər bərabərsizlik/bərabərlik sətrini öz 2-normasına bölür.

    Zero-norm rows keep scale 1.  H and c are untouched.
    """
    def _scales(M: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(M, axis=1) if M.size else np.zeros(M.shape[0])
        safe = np.where(norms > 0.0, norms, 1.0)
        return 1.0 / safe

    d1 = _scales(problem.A)
    d2 = _scales(problem.C)
    scaled = replace(
        problem,
        A=problem.A * d1[:, None],
        b=problem.b * d1,
        C=problem.C * d2[:, None],
        d=problem.d * d2,
    )
    return scaled, ScalingRecord(row_scale_ineq=d1, row_scale_eq=d2)


def augment(problem: CqpProblem, x0: np.ndarray) -> AugmentedState:
    """
    x0 nöqtəsindən strictly feasible augmented state qurur.

    z0 = c_z·1 with c_z = −min{min(Ax0 − b), 0} + 1,
    y0 = c_y·1 with c_y = max|Cx0 − d| + 1, all duals = 1.
    """
    x = np.array(x0, dtype=np.float64, copy=True).reshape(-1)
    if x.shape != (problem.n,):
        raise DimensionMismatch(f"x0 has shape {x.shape}, expected ({problem.n},)")

    r_ineq = problem.A @ x - problem.b
    r_eq = problem.C @ x - problem.d

    c_z = -min(float(np.min(r_ineq)) if problem.m else 0.0, 0.0) + 1.0
    c_y = (float(np.max(np.abs(r_eq))) if problem.p else 0.0) + 1.0

    z = np.full(problem.m, c_z)
    y = np.full(problem.p, c_y)

    return AugmentedState(
        x=x,
        z=z,
        y=y,
        s=r_ineq + z,
        t_plus=r_eq + y,
        t_minus=-r_eq + y,
        pi=np.ones(problem.m),
        xi=np.ones(problem.m),
        eta=np.ones(problem.p),
        zeta=np.ones(problem.p),
    )


def penalty_objective(problem: CqpProblem, state: AugmentedState, phi: float) -> float:
    """f(x) + φ·(Σz + Σy)."""
    return problem.objective(state.x) + phi * (float(np.sum(state.z)) + float(np.sum(state.y)))


def stationarity(
    problem: CqpProblem,
    x: np.ndarray,
    pi: np.ndarray,
    eta: np.ndarray,
    zeta: np.ndarray,
) -> np.ndarray:
    """Hx + c − Aᵀπ − Cᵀ(η − ζ)."""
    return problem.hess_matvec(x) + problem.c - problem.A.T @ pi - problem.C.T @ (eta - zeta)


def optimality_error(
    problem: CqpProblem,
    x: np.ndarray,
    pi: np.ndarray,
    eta: np.ndarray,
    zeta: np.ndarray,
) -> float:
    """
    Normalized KKT error of (P):

        ‖[Hx + c − Aᵀπ − Cᵀ(η−ζ); min{s, π}; min{[t₊; t₋], [η; ζ]}]‖₂
        / max{‖H‖∞, ‖c‖∞, ‖A‖∞, ‖C‖∞}

    with s = Ax − b, t₊ = Cx − d, t₋ = −t₊.  Equality terms (and ‖C‖∞)
    drop out when p = 0.  Negative duals are clamped to zero.
    """
    pi = np.maximum(pi, 0.0)
    eta = np.maximum(eta, 0.0)
    zeta = np.maximum(zeta, 0.0)

    r_dual = stationarity(problem, x, pi, eta, zeta)
    s = problem.A @ x - problem.b
    parts = [r_dual, np.minimum(s, pi)]
    if problem.p > 0:
        t_plus = problem.C @ x - problem.d
        parts.append(np.minimum(np.concatenate([t_plus, -t_plus]), np.concatenate([eta, zeta])))

    numerator = float(np.linalg.norm(np.concatenate(parts)))
    return numerator / problem.data_scale()


def kkt_residuals(problem: CqpProblem, state: AugmentedState, phi: float) -> KktResiduals:
    """G1, G2, G3 residuals of the augmented pair at the given state."""
    r_dual = stationarity(problem, state.x, state.pi, state.eta, state.zeta)
    g1 = np.concatenate([
        state.s * state.pi,
        state.z * state.xi,
        state.t_plus * state.eta,
        state.t_minus * state.zeta,
    ])
    g2 = np.concatenate([
        r_dual,
        state.pi + state.xi - phi,
        state.eta + state.zeta - phi,
    ])
    g3 = float(r_dual @ state.x)
    return KktResiduals(g1=g1, g2=g2, g3=g3, stationarity=r_dual)


def load_problem(path: str) -> CqpProblem:
    """
    Problem JSON faylını oxuyur.

    Raises:
        ProblemFormatError: file missing, not JSON, or malformed fields
    """
    try:
        data = read_json(path)
    except (OSError, ValueError) as e:
        raise ProblemFormatError(f"cannot read problem file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ProblemFormatError(f"{path}: top-level JSON value must be an object")
    return CqpProblem.from_dict(data)


def save_problem(problem: CqpProblem, path: str) -> None:
    write_json(problem.to_dict(), path)
