"""
IsQP Solver Types
Həll nəticələri üçün data strukturları: status, Farkas sertifikatı,
relaxation, iteration trace və yekun hesabat.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from src.core.problem import CqpProblem

MACHINE_EPS = float(np.finfo(np.float64).eps)

TRACE_COLUMNS = ("iter", "phi", "mu", "err", "q_size", "obj", "penalty_obj", "z_inf_norm")


class SolveStatus(Enum):
    """Həllin yekun statusu."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    ITERATION_LIMIT = "iteration_limit"
    FAILED = "failed"

    @property
    def exit_code(self) -> int:
        return {
            SolveStatus.OPTIMAL: 0,
            SolveStatus.INFEASIBLE: 2,
            SolveStatus.ITERATION_LIMIT: 3,
            SolveStatus.FAILED: 4,
        }[self]


@dataclass(frozen=True)
class FarkasCertificate:
    """
    Candidate (π̂ ≥ 0, ω̂) with Aᵀπ̂ + Cᵀω̂ ≈ 0 and bᵀπ̂ + dᵀω̂ > 0.

    residual = ‖[Aᵀπ̂ + Cᵀω̂; min{π̂, 0}]‖₂ / max{‖A‖∞, ‖C‖∞}.
    """
    pi_hat: np.ndarray
    omega_hat: np.ndarray
    gain: float
    residual: float
    valid: bool

    @classmethod
    def build(
        cls,
        problem: CqpProblem,
        pi_hat: np.ndarray,
        omega_hat: np.ndarray,
        tol_infeas: float,
    ) -> 'FarkasCertificate':
        gain = float(problem.b @ pi_hat + problem.d @ omega_hat)
        residual = cls.residual_of(problem, pi_hat, omega_hat)
        valid = gain > np.sqrt(MACHINE_EPS) and residual <= tol_infeas
        return cls(pi_hat=pi_hat, omega_hat=omega_hat, gain=gain, residual=residual, valid=valid)

    @staticmethod
    def residual_of(problem: CqpProblem, pi_hat: np.ndarray, omega_hat: np.ndarray) -> float:
        r = np.concatenate([
            problem.A.T @ pi_hat + problem.C.T @ omega_hat,
            np.minimum(pi_hat, 0.0),
        ])
        return float(np.linalg.norm(r)) / problem.data_scale(include_hessian=False)

    @classmethod
    def zero(cls, problem: CqpProblem) -> 'FarkasCertificate':
        return cls(
            pi_hat=np.zeros(problem.m), omega_hat=np.zeros(problem.p),
            gain=0.0, residual=0.0, valid=False,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pi_hat": self.pi_hat.tolist(),
            "omega_hat": self.omega_hat.tolist(),
            "gain": self.gain,
            "residual": self.residual,
            "valid": self.valid,
        }


@dataclass(frozen=True)
class RelaxationResult:
    """
    Least relaxation at the stopping iterate.

    x_feasible satisfies A x ≥ b_prime and −d_minus_shift ≤ C x − d ≤ d_plus_shift;
    with d_adjusted = C x it also satisfies the adjusted system C x = d_adjusted.
    """
    b_prime: np.ndarray
    d_plus_shift: np.ndarray
    d_minus_shift: np.ndarray
    d_adjusted: np.ndarray
    x_feasible: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {
            "b_prime": self.b_prime.tolist(),
            "d_plus_shift": self.d_plus_shift.tolist(),
            "d_minus_shift": self.d_minus_shift.tolist(),
            "d_adjusted": self.d_adjusted.tolist(),
            "x_feasible": self.x_feasible.tolist(),
        }


@dataclass
class TraceRow:
    """Bir master iteration-un qeydi."""
    iter: int
    phi: float
    mu: float
    err: float
    q_size: int
    obj: float
    penalty_obj: float
    z_inf_norm: float
    accepted: bool = True
    penalty_obj_before: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SolveReport:
    """
    Final result of `solve`.

    Primal/dual vectors are in the original (unscaled) row units.
    """
    status: SolveStatus
    x: np.ndarray
    pi: np.ndarray
    eta: np.ndarray
    zeta: np.ndarray
    z: np.ndarray
    y: np.ndarray
    iterations: int
    phi_final: float
    phi_increases: int
    err: float
    objective: float
    certificate: Optional[FarkasCertificate] = None
    relaxation: Optional[RelaxationResult] = None
    trace: List[TraceRow] = field(default_factory=list)
    diagnostics: List[Dict[str, Any]] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def omega(self) -> np.ndarray:
        """Equality multipliers η − ζ."""
        return self.eta - self.zeta

    def trace_rows(self) -> List[Dict[str, Any]]:
        return [row.to_dict() for row in self.trace]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "x": self.x.tolist(),
            "duals": {
                "pi": self.pi.tolist(),
                "omega": self.omega.tolist(),
                "eta": self.eta.tolist(),
                "zeta": self.zeta.tolist(),
            },
            "z": self.z.tolist(),
            "y": self.y.tolist(),
            "iterations": self.iterations,
            "phi_final": self.phi_final,
            "phi_increases": self.phi_increases,
            "err": self.err,
            "objective": self.objective,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "relaxation": self.relaxation.to_dict() if self.relaxation else None,
            "trace": self.trace_rows(),
            "diagnostics": self.diagnostics,
            "elapsed_seconds": self.elapsed_seconds,
        }
