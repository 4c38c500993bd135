"""
IsQP Base Iteration
Augmented problem üçün feasible-start Mehrotra predictor-corrector addımı,
slack-əsaslı constraint reduction ilə.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.core.exceptions import StallError
from src.core.kkt import StepKind, assemble, newton_rhs, solve_step
from src.core.problem import AugmentedState, CqpProblem, penalty_objective
from src.utils.config_models import BaseIterationSettings
from src.utils.diagnostics import DiagnosticLog
from src.utils.logger import get_logger

logger = get_logger()


@dataclass
class BaseIterationVars:
    """
    Internal state of the base iteration for the current φ.

    `counter` counts steps since the last φ increase; the driver calls
    `reset` whenever φ grows.
    """
    delta: float
    counter: int = 0
    mu_history: List[float] = field(default_factory=list)
    boundary_fraction: float = 0.995

    @classmethod
    def initial(cls, settings: Optional[BaseIterationSettings] = None) -> 'BaseIterationVars':
        settings = settings or BaseIterationSettings()
        return cls(delta=settings.delta_bar, boundary_fraction=settings.min_boundary_fraction)

    def reset(self, settings: Optional[BaseIterationSettings] = None) -> None:
        fresh = BaseIterationVars.initial(settings)
        self.delta = fresh.delta
        self.counter = 0
        self.mu_history = []
        self.boundary_fraction = fresh.boundary_fraction


@dataclass
class StepResult:
    """Bir base iteration addımının nəticəsi."""
    state: AugmentedState
    accepted: bool
    mu: float
    mu_next: float
    sigma: float = 0.0
    alpha_primal: float = 0.0
    alpha_dual: float = 0.0
    active: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.intp))
    backtracks: int = 0
    penalty_obj_before: float = 0.0
    penalty_obj_after: float = 0.0

    @property
    def q_size(self) -> int:
        return int(self.active.size)


def duality_measure(state: AugmentedState) -> float:
    """μ = (sᵀπ + zᵀξ + t₊ᵀη + t₋ᵀζ) / (2m + 2p)."""
    total = (
        float(state.s @ state.pi) + float(state.z @ state.xi)
        + float(state.t_plus @ state.eta) + float(state.t_minus @ state.zeta)
    )
    count = 2 * state.s.size + 2 * state.t_plus.size
    return total / count if count else 0.0


def select_constraints(
    state: AugmentedState,
    n: int,
    bvars: BaseIterationVars,
    settings: Optional[BaseIterationSettings] = None,
    reduction: bool = True,
    qmin: Optional[int] = None,
) -> np.ndarray:
    """
    Near-active inequality rows Q (sorted indices).

    Q = {i : sᵢ ≤ δ}, padded with the smallest slacks up to
    min(m, max(n + 1, qmin)).  δ stays at δ̄ for the first
    `frozen_iterations` steps after a φ change, then follows
    max(δ̄·min(1, μ), δ_min).  The z, y families are never reduced.
    """
    settings = settings or BaseIterationSettings()
    m = state.s.size
    if not reduction:
        return np.arange(m, dtype=np.intp)

    if bvars.counter < settings.frozen_iterations:
        bvars.delta = settings.delta_bar
    else:
        mu = duality_measure(state)
        bvars.delta = max(settings.delta_bar * min(1.0, mu), settings.delta_min)

    if qmin is None:
        qmin = settings.qmin_factor * n
    target = min(m, max(n + 1, qmin))

    order = np.argsort(state.s, kind='stable')
    below = int(np.count_nonzero(state.s <= bvars.delta))
    count = max(target, below)
    return np.sort(order[:count]).astype(np.intp)


def _max_step(values: np.ndarray, steps: np.ndarray) -> float:
    """Largest α with values + α·steps ≥ 0 (inf when nothing decreases)."""
    decreasing = steps < 0.0
    if not np.any(decreasing):
        return np.inf
    return float(np.min(-values[decreasing] / steps[decreasing]))


def _primal_pairs(state: AugmentedState, direction):
    values = np.concatenate([state.s, state.z, state.t_plus, state.t_minus])
    steps = np.concatenate([direction.ds, direction.dz, direction.dt_plus, direction.dt_minus])
    return values, steps


def _dual_pairs(state: AugmentedState, direction):
    values = np.concatenate([state.pi, state.xi, state.eta, state.zeta])
    steps = np.concatenate([direction.dpi, direction.dxi, direction.deta, direction.dzeta])
    return values, steps


def _move_primal(state: AugmentedState, direction, alpha: float) -> AugmentedState:
    nxt = state.copy()
    nxt.x = state.x + alpha * direction.dx
    nxt.z = state.z + alpha * direction.dz
    nxt.y = state.y + alpha * direction.dy
    nxt.s = state.s + alpha * direction.ds
    nxt.t_plus = state.t_plus + alpha * direction.dt_plus
    nxt.t_minus = state.t_minus + alpha * direction.dt_minus
    return nxt


def _move_dual(state: AugmentedState, direction, alpha: float) -> None:
    state.pi = np.maximum(state.pi + alpha * direction.dpi, 0.0)
    state.xi = np.maximum(state.xi + alpha * direction.dxi, 0.0)
    state.eta = np.maximum(state.eta + alpha * direction.deta, 0.0)
    state.zeta = np.maximum(state.zeta + alpha * direction.dzeta, 0.0)


def step(
    problem: CqpProblem,
    state: AugmentedState,
    phi: float,
    bvars: BaseIterationVars,
    settings: Optional[BaseIterationSettings] = None,
    reduction: bool = True,
    qmin: Optional[int] = None,
    diagnostics: Optional[DiagnosticLog] = None,
) -> StepResult:
    """
    One predictor-corrector step on the augmented problem at fixed φ.

    The primal step length is halved (up to `max_backtracks` times) until
    the penalty objective does not increase.  If that never happens the
    undamped step is taken and reported with accepted=False.

    Raises:
        FactorizationFailure: from the KKT solve
        StallError: backtracking exhausted and μ did not decrease
    """
    settings = settings or BaseIterationSettings()
    mu = duality_measure(state)
    f_old = penalty_objective(problem, state, phi)

    if mu <= settings.mu_floor:
        return StepResult(
            state=state.copy(), accepted=True, mu=mu, mu_next=mu,
            penalty_obj_before=f_old, penalty_obj_after=f_old,
        )

    active = select_constraints(state, problem.n, bvars, settings, reduction, qmin)
    workspace = assemble(problem, state, phi, active, diagnostics)

    # Predictor
    affine = solve_step(workspace, newton_rhs(problem, state, phi), StepKind.AFFINE)
    p_vals, p_steps = _primal_pairs(state, affine)
    d_vals, d_steps = _dual_pairs(state, affine)
    alpha_p_aff = min(1.0, _max_step(p_vals, p_steps))
    alpha_d_aff = min(1.0, _max_step(d_vals, d_steps))
    mu_aff = float(
        (p_vals + alpha_p_aff * p_steps) @ (d_vals + alpha_d_aff * d_steps)
    ) / max(p_vals.size, 1)
    sigma = min(1.0, (max(mu_aff, 0.0) / mu) ** settings.centering_exponent)

    # Corrector
    rhs = newton_rhs(
        problem, state, phi, target=sigma * mu, correction=affine,
        alpha_primal=alpha_p_aff, alpha_dual=alpha_d_aff,
    )
    direction = solve_step(workspace, rhs, StepKind.CORRECTOR)

    tau = max(bvars.boundary_fraction, 1.0 - mu)
    p_vals, p_steps = _primal_pairs(state, direction)
    d_vals, d_steps = _dual_pairs(state, direction)
    alpha_p = min(1.0, tau * _max_step(p_vals, p_steps))
    alpha_d = min(1.0, tau * _max_step(d_vals, d_steps))

    threshold = f_old + settings.monotone_rtol * max(1.0, abs(f_old))
    alpha = alpha_p
    backtracks = 0
    candidate = _move_primal(state, direction, alpha)
    f_new = penalty_objective(problem, candidate, phi)
    while f_new > threshold and backtracks < settings.max_backtracks:
        alpha *= 0.5
        backtracks += 1
        candidate = _move_primal(state, direction, alpha)
        f_new = penalty_objective(problem, candidate, phi)

    accepted = f_new <= threshold
    if not accepted:
        alpha = alpha_p
        candidate = _move_primal(state, direction, alpha)
        f_new = penalty_objective(problem, candidate, phi)

    _move_dual(candidate, direction, alpha_d)
    mu_next = duality_measure(candidate)

    if not accepted:
        if mu_next >= mu:
            raise StallError(
                f"penalty objective rose ({f_old:.6e} -> {f_new:.6e}) and mu did not "
                f"decrease ({mu:.3e} -> {mu_next:.3e}) after {backtracks} halvings"
            )
        message = f"penalty objective rose {f_old:.6e} -> {f_new:.6e} at phi={phi:g}"
        if diagnostics is not None:
            diagnostics.warn("Non-monotone base step", message, source="base_mpc")
        else:
            logger.warning(f"[base_mpc] Non-monotone base step: {message}")

    bvars.counter += 1
    bvars.mu_history.append(mu)

    if logger.is_debug_enabled():
        logger.debug(
            f"step: mu={mu:.3e}->{mu_next:.3e} sigma={sigma:.3e} "
            f"alpha_p={alpha:.3e} alpha_d={alpha_d:.3e} |Q|={active.size} bt={backtracks}"
        )

    return StepResult(
        state=candidate,
        accepted=accepted,
        mu=mu,
        mu_next=mu_next,
        sigma=sigma,
        alpha_primal=alpha,
        alpha_dual=alpha_d,
        active=active,
        backtracks=backtracks,
        penalty_obj_before=f_old,
        penalty_obj_after=f_new,
    )
