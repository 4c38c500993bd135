"""
IsQP KKT Module
Augmented problemin Newton-KKT sistemlərinin qurulması və həlli.

Slacks and duals are eliminated first (diagonal blocks), then the z- and
y-columns through their identity structure, which leaves one n×n system

    M Δx = −r_x^Q + A_Qᵀ h_π,Q + Cᵀ h_ω,     M = H + A_Qᵀ E_Q A_Q + Cᵀ F C

where r_x^Q = Hx + c − A_Qᵀπ_Q − Cᵀ(η − ζ) is the stationarity residual
of the reduced problem (rows outside Q dropped),

with (per row)
    D_s = π/s, D_z = ξ/z, W = D_s + D_z, E = D_s·D_z / W
    D₊ = η/t₊, D₋ = ζ/t₋, V = D₊ + D₋,  F = 4·D₊·D₋ / V
    g_z = (−r_z + r_s/s + r_ξ/z) / W,        h_π = r_s/s − D_s·g_z
    g_y = (−r_y + r_η/t₊ + r_ζ/t₋) / V,      h_ω = r_η/t₊ − r_ζ/t₋ − (D₊ − D₋)·g_y

and back-substitution
    Δz = g_z − (D_s/W)·AΔx,      Δs = AΔx + Δz
    Δy = g_y − ((D₊ − D₋)/V)·CΔx, Δt₊ = CΔx + Δy, Δt₋ = −CΔx + Δy
    Δπ = (r_s − π·Δs)/s, Δξ = (r_ξ − ξ·Δz)/z, Δη = (r_η − η·Δt₊)/t₊, Δζ = (r_ζ − ζ·Δt₋)/t₋

The x-system is the Newton system of the problem restricted to Q, so M and
its right-hand side agree.  Rows outside Q take AΔx from the full A and
satisfy their own slack and complementarity equations exactly.  With Q = all
rows this is the unreduced Newton step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla

from src.core.exceptions import FactorizationFailure
from src.core.problem import AugmentedState, CqpProblem, stationarity
from src.utils.diagnostics import DiagnosticLog
from src.utils.logger import get_logger

logger = get_logger()

PERTURBATION_SEED = 1e-10
PERTURBATION_RETRIES = 5


class StepKind(Enum):
    """Newton sisteminin növü."""
    AFFINE = "affine"
    CORRECTOR = "corrector"


@dataclass
class KktRhs:
    """
    Right-hand side of the unreduced Newton system.

    r_x, r_z, r_y are the dual residuals (Hx + c − Aᵀπ − Cᵀ(η−ζ), φ − π − ξ,
    φ − η − ζ); r_s, r_xi, r_eta, r_zeta are the complementarity targets.
    """
    r_x: np.ndarray
    r_z: np.ndarray
    r_y: np.ndarray
    r_s: np.ndarray
    r_xi: np.ndarray
    r_eta: np.ndarray
    r_zeta: np.ndarray

    def stacked(self) -> np.ndarray:
        """Dense sistemin sağ tərəfi: [−r_x; −r_z; −r_y; r_s; r_ξ; r_η; r_ζ]."""
        return np.concatenate([
            -self.r_x, -self.r_z, -self.r_y,
            self.r_s, self.r_xi, self.r_eta, self.r_zeta,
        ])

    def norm(self) -> float:
        return float(np.linalg.norm(self.stacked()))


@dataclass
class Direction:
    """Newton direction for every block of the augmented pair."""
    dx: np.ndarray
    dz: np.ndarray
    dy: np.ndarray
    ds: np.ndarray
    dt_plus: np.ndarray
    dt_minus: np.ndarray
    dpi: np.ndarray
    dxi: np.ndarray
    deta: np.ndarray
    dzeta: np.ndarray
    kind: StepKind = StepKind.AFFINE

    def unknowns(self) -> np.ndarray:
        """[Δx; Δz; Δy; Δπ; Δξ; Δη; Δζ] (dense sistemin dəyişən sırası)."""
        return np.concatenate([
            self.dx, self.dz, self.dy,
            self.dpi, self.dxi, self.deta, self.dzeta,
        ])


@dataclass
class KktWorkspace:
    """
    Condensed system at one iterate.

    Holds the n×n matrix M, the per-row diagonals, the Cholesky factor and
    the index set Q used for the A-block.  `perturbation` is the β added to
    the diagonal of M (0.0 when the plain factorization succeeded).
    """
    problem: CqpProblem
    state: AugmentedState
    phi: float
    active: np.ndarray
    M: np.ndarray
    d_s: np.ndarray
    d_z: np.ndarray
    d_plus: np.ndarray
    d_minus: np.ndarray
    factor: Tuple[np.ndarray, bool] = field(repr=False)
    perturbation: float = 0.0

    @property
    def q_size(self) -> int:
        return int(self.active.size)


def _factorize(M: np.ndarray) -> Tuple[Tuple[np.ndarray, bool], float]:
    """
    Cholesky of M with a diagonal-shift fallback.

    β starts at 1e-10·trace(M)/n and doubles up to five times.
    """
    if not np.all(np.isfinite(M)):
        raise FactorizationFailure("reduced Newton matrix contains NaN or Inf")

    try:
        return sla.cho_factor(M, lower=True, check_finite=False), 0.0
    except np.linalg.LinAlgError:
        pass

    n = M.shape[0]
    trace = float(np.trace(M))
    beta = PERTURBATION_SEED * trace / n if trace > 0.0 else PERTURBATION_SEED
    identity = np.eye(n)
    for _ in range(PERTURBATION_RETRIES + 1):
        try:
            return sla.cho_factor(M + beta * identity, lower=True, check_finite=False), beta
        except np.linalg.LinAlgError:
            beta *= 2.0

    raise FactorizationFailure(
        f"Cholesky failed after {PERTURBATION_RETRIES} perturbation retries",
        perturbation=beta / 2.0,
    )


def assemble(
    problem: CqpProblem,
    state: AugmentedState,
    phi: float,
    active: Optional[np.ndarray] = None,
    diagnostics: Optional[DiagnosticLog] = None,
) -> KktWorkspace:
    """
    Condensed Newton matrisini qurur və faktorizasiya edir.

    Args:
        problem: validated problem (possibly row-normalized)
        state: strictly interior augmented state
        phi: penalty parameter
        active: inequality indices Q (None = all rows)
        diagnostics: receives a warning when M had to be perturbed

    Raises:
        FactorizationFailure: M stayed singular after all retries
    """
    if active is None:
        active = np.arange(problem.m)
    active = np.asarray(active, dtype=np.intp)

    d_s = state.pi / state.s
    d_z = state.xi / state.z
    d_plus = state.eta / state.t_plus
    d_minus = state.zeta / state.t_minus

    e = d_s * d_z / (d_s + d_z)
    f = 4.0 * d_plus * d_minus / (d_plus + d_minus)

    M = problem.hess_dense()
    if active.size:
        A_q = problem.A[active]
        M += A_q.T @ (e[active][:, None] * A_q)
    if problem.p:
        M += problem.C.T @ (f[:, None] * problem.C)
    M = 0.5 * (M + M.T)

    factor, beta = _factorize(M)
    if beta > 0.0:
        message = f"added {beta:.3e}·I to the {problem.n}×{problem.n} reduced matrix"
        if diagnostics is not None:
            diagnostics.warn("Perturbed factorization", message, source="kkt")
        else:
            logger.warning(f"[kkt] Perturbed factorization: {message}")

    return KktWorkspace(
        problem=problem,
        state=state,
        phi=phi,
        active=active,
        M=M,
        d_s=d_s,
        d_z=d_z,
        d_plus=d_plus,
        d_minus=d_minus,
        factor=factor,
        perturbation=beta,
    )


def solve_step(workspace: KktWorkspace, rhs: KktRhs, kind: StepKind = StepKind.AFFINE) -> Direction:
    """Condensed sistemi həll edir və bütün blokları geri yerinə qoyur."""
    problem, st = workspace.problem, workspace.state
    d_s, d_z = workspace.d_s, workspace.d_z
    d_plus, d_minus = workspace.d_plus, workspace.d_minus

    w = d_s + d_z
    g_z = (-rhs.r_z + rhs.r_s / st.s + rhs.r_xi / st.z) / w
    h_pi = rhs.r_s / st.s - d_s * g_z

    v = d_plus + d_minus
    g_y = (-rhs.r_y + rhs.r_eta / st.t_plus + rhs.r_zeta / st.t_minus) / v
    h_omega = rhs.r_eta / st.t_plus - rhs.r_zeta / st.t_minus - (d_plus - d_minus) * g_y

    active = workspace.active
    r_x = rhs.r_x
    if active.size < problem.m:
        dropped = np.ones(problem.m, dtype=bool)
        dropped[active] = False
        r_x = r_x + problem.A[dropped].T @ st.pi[dropped]
    A_q = problem.A[active]
    b = -r_x + A_q.T @ h_pi[active] + problem.C.T @ h_omega
    dx = sla.cho_solve(workspace.factor, b, check_finite=False)

    a_dx = problem.A @ dx
    dz = g_z - (d_s / w) * a_dx
    ds = a_dx + dz
    dpi = (rhs.r_s - st.pi * ds) / st.s
    dxi = (rhs.r_xi - st.xi * dz) / st.z

    c_dx = problem.C @ dx
    dy = g_y - ((d_plus - d_minus) / v) * c_dx
    dt_plus = c_dx + dy
    dt_minus = -c_dx + dy
    deta = (rhs.r_eta - st.eta * dt_plus) / st.t_plus
    dzeta = (rhs.r_zeta - st.zeta * dt_minus) / st.t_minus

    return Direction(
        dx=dx, dz=dz, dy=dy, ds=ds,
        dt_plus=dt_plus, dt_minus=dt_minus,
        dpi=dpi, dxi=dxi, deta=deta, dzeta=dzeta,
        kind=kind,
    )


def newton_rhs(
    problem: CqpProblem,
    state: AugmentedState,
    phi: float,
    target: float = 0.0,
    correction: Optional[Direction] = None,
    alpha_primal: float = 1.0,
    alpha_dual: float = 1.0,
) -> KktRhs:
    """
    Predictor/corrector sağ tərəfi.

    target = σμ (0 for the affine step); `correction` adds the second-order
    terms −(α_p·Δs_aff)(α_d·Δπ_aff) etc. of the Mehrotra corrector, with the
    affine step lengths the predictor could actually take.
    """
    r_s = target - state.s * state.pi
    r_xi = target - state.z * state.xi
    r_eta = target - state.t_plus * state.eta
    r_zeta = target - state.t_minus * state.zeta
    if correction is not None:
        scale = alpha_primal * alpha_dual
        r_s = r_s - scale * correction.ds * correction.dpi
        r_xi = r_xi - scale * correction.dz * correction.dxi
        r_eta = r_eta - scale * correction.dt_plus * correction.deta
        r_zeta = r_zeta - scale * correction.dt_minus * correction.dzeta

    return KktRhs(
        r_x=stationarity(problem, state.x, state.pi, state.eta, state.zeta),
        r_z=phi - state.pi - state.xi,
        r_y=phi - state.eta - state.zeta,
        r_s=r_s,
        r_xi=r_xi,
        r_eta=r_eta,
        r_zeta=r_zeta,
    )


# =============================================================================
# Dense reference system
# =============================================================================

def dense_newton_matrix(problem: CqpProblem, state: AugmentedState) -> np.ndarray:
    """
    Unreduced Newton-KKT matrix over [Δx; Δz; Δy; Δπ; Δξ; Δη; Δζ].

    Row blocks: stationarity in x, z, y; then the four linearized
    complementarity families with Δs = AΔx + Δz, Δt± = ±CΔx + Δy.
    """
    n, m, p = problem.n, problem.m, problem.p
    A, C = problem.A, problem.C
    sizes = [n, m, p, m, m, p, p]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    K = np.zeros((offsets[-1], offsets[-1]))

    def block(i: int, j: int) -> Tuple[slice, slice]:
        return slice(offsets[i], offsets[i + 1]), slice(offsets[j], offsets[j + 1])

    X, Z, Y, PI, XI, ETA, ZETA = range(7)
    eye_m, eye_p = np.eye(m), np.eye(p)

    K[block(X, X)] = problem.hess_dense()
    K[block(X, PI)] = -A.T
    K[block(X, ETA)] = -C.T
    K[block(X, ZETA)] = C.T

    K[block(Z, PI)] = -eye_m
    K[block(Z, XI)] = -eye_m
    K[block(Y, ETA)] = -eye_p
    K[block(Y, ZETA)] = -eye_p

    K[block(PI, X)] = state.pi[:, None] * A
    K[block(PI, Z)] = np.diag(state.pi)
    K[block(PI, PI)] = np.diag(state.s)

    K[block(XI, Z)] = np.diag(state.xi)
    K[block(XI, XI)] = np.diag(state.z)

    K[block(ETA, X)] = state.eta[:, None] * C
    K[block(ETA, Y)] = np.diag(state.eta)
    K[block(ETA, ETA)] = np.diag(state.t_plus)

    K[block(ZETA, X)] = -state.zeta[:, None] * C
    K[block(ZETA, Y)] = np.diag(state.zeta)
    K[block(ZETA, ZETA)] = np.diag(state.t_minus)
    return K


def full_newton_residual(
    problem: CqpProblem,
    state: AugmentedState,
    direction: Direction,
    rhs: KktRhs,
) -> float:
    """‖K·u − v‖₂ / max(1, ‖v‖₂) for the dense system."""
    K = dense_newton_matrix(problem, state)
    v = rhs.stacked()
    r = K @ direction.unknowns() - v
    return float(np.linalg.norm(r)) / max(1.0, float(np.linalg.norm(v)))
