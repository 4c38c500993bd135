"""
IsQP Driver
Master loop: optimality/infeasibility yoxlaması, penalty yeniləməsi və
base iteration addımları.  Farkas sertifikatı və ℓ1-least relaxation da
burada qurulur.
"""

from __future__ import annotations

import time
from typing import Optional

import numpy as np
import scipy.linalg as sla

from src.core.base_mpc import BaseIterationVars, duality_measure, step
from src.core.exceptions import FactorizationFailure, RelaxationError, StallError
from src.core.penalty import PenaltyConfig, init_thresholds, update
from src.core.problem import (
    AugmentedState,
    CqpProblem,
    ScalingRecord,
    augment,
    kkt_residuals,
    normalize_rows,
    optimality_error,
    penalty_objective,
    validate,
)
from src.core.solver_types import (
    MACHINE_EPS,
    FarkasCertificate,
    RelaxationResult,
    SolveReport,
    SolveStatus,
    TraceRow,
)
from src.utils.config_models import BaseIterationSettings, PenaltySettings, SolveOptions
from src.utils.diagnostics import DiagnosticLevel, DiagnosticLog
from src.utils.logger import get_logger

logger = get_logger()

PROJECTION_RANK_RTOL = 1e-10
RELAXATION_ATOL = 1e-9
CERTIFICATE_REFINEMENTS = 3


def _null_projection(rows: np.ndarray, v: np.ndarray) -> np.ndarray:
    """v minus its component in the column space of `rows` (pivoted QR)."""
    if rows.shape[0] == 0:
        return v.copy()
    Q, R, _ = sla.qr(rows, mode='economic', pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size and diag[0] > 0.0:
        rank = int(np.sum(diag > PROJECTION_RANK_RTOL * diag[0]))
    else:
        rank = 0
    U = Q[:, :rank]
    return v - U @ (U.T @ v)


def certificate_candidate(
    problem: CqpProblem,
    state: AugmentedState,
    phi: float,
    active: Optional[np.ndarray] = None,
    tol_infeas: float = 1e-6,
) -> FarkasCertificate:
    """
    Scaled duals [π_Q/φ; (η−ζ)/φ] projected onto null([A_Qᵀ, Cᵀ]).

    The projection removes the component in range([A_Q; C]), computed
    from a pivoted QR of the stacked rows.  π̂ is clamped at zero and is
    zero outside Q.

    When clamping breaks the certificate, rows whose projected entry is not
    positive are dropped and the projection is repeated on the remaining
    support (at most CERTIFICATE_REFINEMENTS times).  The candidate with
    the smaller residual is returned.
    """
    if active is None:
        active = np.arange(problem.m)
    active = np.asarray(active, dtype=np.intp)

    rows = np.vstack([problem.A[active], problem.C])
    if rows.shape[0] == 0:
        return FarkasCertificate.zero(problem)

    v = np.concatenate([state.pi[active], state.eta - state.zeta]) / phi
    q = active.size

    def _build(projected: np.ndarray) -> FarkasCertificate:
        pi_hat = np.zeros(problem.m)
        pi_hat[active] = np.maximum(projected[:q], 0.0)
        return FarkasCertificate.build(problem, pi_hat, projected[q:], tol_infeas)

    projected = _null_projection(rows, v)
    best = _build(projected)
    if best.valid:
        return best

    keep = np.ones(rows.shape[0], dtype=bool)
    for _ in range(CERTIFICATE_REFINEMENTS):
        if not np.any(projected[:q][keep[:q]] < 0.0):
            break
        keep[:q] &= projected[:q] > 0.0
        projected = np.zeros_like(v)
        projected[keep] = _null_projection(rows[keep], v[keep])
        refined = _build(projected)
        if refined.residual < best.residual or (refined.valid and not best.valid):
            best = refined
        if best.valid:
            break
    return best


def extract_relaxation(problem: CqpProblem, state: AugmentedState) -> RelaxationResult:
    """
    ℓ1-least relaxation at an infeasible stopping point.

    b′ = b − z, Δd₊ᵢ = yᵢ where (Cx − d)ᵢ > 0 and Δd₋ᵢ = yᵢ where (Cx − d)ᵢ < 0.
    Rounding-level violations (≤ 1e-9 relative) are absorbed so that x is
    feasible for the relaxed data exactly.

    Raises:
        RelaxationError: x violates the relaxed constraints beyond rounding
    """
    x = state.x
    ax = problem.A @ x
    b_prime = problem.b - state.z
    r = problem.C @ x - problem.d

    tol = RELAXATION_ATOL * max(1.0, float(np.max(np.abs(problem.b))) if problem.m else 1.0)
    ineq_gap = float(np.max(b_prime - ax)) if problem.m else 0.0
    if ineq_gap > tol:
        raise RelaxationError(f"A x ≥ b′ violated by {ineq_gap:.3e}")

    eq_gap = float(np.max(np.abs(r) - state.y)) if problem.p else 0.0
    if eq_gap > tol:
        raise RelaxationError(f"|C x − d| ≤ y violated by {eq_gap:.3e}")

    b_prime = np.minimum(b_prime, ax)
    d_plus = np.where(r > 0.0, np.maximum(state.y, r), 0.0)
    d_minus = np.where(r < 0.0, np.maximum(state.y, -r), 0.0)

    return RelaxationResult(
        b_prime=b_prime,
        d_plus_shift=d_plus,
        d_minus_shift=d_minus,
        d_adjusted=problem.C @ x,
        x_feasible=np.array(x, copy=True),
    )


def _unscale_state(state: AugmentedState, scaling: ScalingRecord) -> AugmentedState:
    """Original sətir vahidlərinə qaytarır (dual · scale, relaxation / scale)."""
    d1, d2 = scaling.row_scale_ineq, scaling.row_scale_eq
    out = state.copy()
    out.pi = state.pi * d1
    out.xi = state.xi * d1
    out.eta = state.eta * d2
    out.zeta = state.zeta * d2
    out.z = state.z / d1
    out.s = state.s / d1
    out.y = state.y / d2
    out.t_plus = state.t_plus / d2
    out.t_minus = state.t_minus / d2
    return out


def _unscale_certificate(
    original: CqpProblem,
    certificate: FarkasCertificate,
    scaling: ScalingRecord,
    tol_infeas: float,
) -> FarkasCertificate:
    """Certificate in original row units, re-tested against the original data."""
    pi_hat = certificate.pi_hat * scaling.row_scale_ineq
    omega_hat = certificate.omega_hat * scaling.row_scale_eq
    return FarkasCertificate.build(original, pi_hat, omega_hat, tol_infeas)


def solve(
    problem: CqpProblem,
    x0: Optional[np.ndarray] = None,
    options: Optional[SolveOptions] = None,
    penalty_settings: Optional[PenaltySettings] = None,
    base_settings: Optional[BaseIterationSettings] = None,
    qmin: Optional[int] = None,
) -> SolveReport:
    """
    Problemi infeasible-start penalty metodu ilə həll edir.

    Args:
        problem: CQP data (validated here)
        x0: arbitrary starting point; zeros (or a seeded normal draw when
            options.seed is set) when omitted
        options: stopping tolerances, iteration cap, φ₀ and toggles
        penalty_settings: σ1, σ2 and the γ floor
        base_settings: base-iteration constants
        qmin: override for the minimum reduced-set size (default qmin_factor·n)

    Returns:
        SolveReport with status optimal, infeasible, iteration_limit or failed

    Raises:
        ProblemValidationError: bad problem data or x0 shape
    """
    options = options or SolveOptions()
    penalty_settings = penalty_settings or PenaltySettings()
    base_settings = base_settings or BaseIterationSettings()
    diagnostics = DiagnosticLog()
    started = time.perf_counter()

    original = validate(problem, check_psd=options.check_psd, diagnostics=diagnostics)
    if options.normalize:
        scaled, scaling = normalize_rows(original)
    else:
        scaled, scaling = original, ScalingRecord.identity(original.m, original.p)

    if x0 is None:
        if options.seed is not None:
            x0 = np.random.Generator(np.random.PCG64(options.seed)).standard_normal(original.n)
        else:
            x0 = np.zeros(original.n)

    state = augment(scaled, x0)
    phi = options.phi0
    penalty = init_thresholds(
        PenaltyConfig.from_settings(phi, penalty_settings),
        state,
        kkt_residuals(scaled, state, phi),
        floor=penalty_settings.gamma_floor,
    )
    bvars = BaseIterationVars.initial(base_settings)
    active = np.arange(scaled.m, dtype=np.intp)

    logger.info(
        f"Solve started: n={original.n} m={original.m} p={original.p} "
        f"phi0={phi:g} tol={options.tol:g} reduction={options.constraint_reduction}"
    )

    trace = []
    k = 0
    phi_increases = 0
    err = np.inf
    status: Optional[SolveStatus] = None
    certificate: Optional[FarkasCertificate] = None
    last_accepted = True
    last_before = penalty_objective(scaled, state, phi)

    try:
        while True:
            err = optimality_error(scaled, state.x, state.pi, state.eta, state.zeta)
            mu = duality_measure(state)
            trace.append(TraceRow(
                iter=k,
                phi=phi,
                mu=mu,
                err=err,
                q_size=int(active.size),
                obj=scaled.objective(state.x),
                penalty_obj=penalty_objective(scaled, state, phi),
                z_inf_norm=state.relaxation_inf_norm(),
                accepted=last_accepted,
                penalty_obj_before=last_before,
            ))
            if logger.is_debug_enabled():
                logger.debug(f"iter {k}: phi={phi:.4g} mu={mu:.3e} err={err:.3e} |Q|={active.size}")

            if err <= options.tol:
                status = SolveStatus.OPTIMAL
                break

            candidate = certificate_candidate(scaled, state, phi, active, options.tol_infeas)
            if candidate.gain > np.sqrt(MACHINE_EPS):
                # valid only when it holds for the caller's (unscaled) data
                candidate = _unscale_certificate(original, candidate, scaling, options.tol_infeas)
                if candidate.valid:
                    status = SolveStatus.INFEASIBLE
                    certificate = candidate
                    break

            if k >= options.max_iter:
                status = SolveStatus.ITERATION_LIMIT
                break

            if options.adaptive_penalty:
                new_phi = update(penalty, state, kkt_residuals(scaled, state, phi))
                if new_phi > phi:
                    phi = new_phi
                    penalty = penalty.with_phi(phi)
                    phi_increases += 1
                    bvars.reset(base_settings)

            while True:
                result = step(
                    scaled, state, phi, bvars,
                    settings=base_settings,
                    reduction=options.constraint_reduction,
                    qmin=qmin,
                    diagnostics=diagnostics,
                )
                k += 1
                state = result.state
                if result.active.size:
                    active = result.active
                last_accepted = result.accepted
                last_before = result.penalty_obj_before
                if result.accepted or k >= options.max_iter:
                    break

    except (FactorizationFailure, StallError) as e:
        status = SolveStatus.FAILED
        diagnostics.report(DiagnosticLevel.ERROR, type(e).__name__, str(e), source="driver")

    result_state = _unscale_state(state, scaling)
    relaxation: Optional[RelaxationResult] = None
    if status is SolveStatus.INFEASIBLE:
        try:
            relaxation = extract_relaxation(original, result_state)
        except RelaxationError as e:
            diagnostics.report(DiagnosticLevel.ERROR, "Relaxation check failed", str(e), source="driver")

    elapsed = time.perf_counter() - started
    logger.info(
        f"Solve finished: status={status.value} iterations={k} phi={phi:.4g} "
        f"err={err:.3e} time={elapsed:.3f}s"
    )

    return SolveReport(
        status=status,
        x=result_state.x,
        pi=result_state.pi,
        eta=result_state.eta,
        zeta=result_state.zeta,
        z=result_state.z,
        y=result_state.y,
        iterations=k,
        phi_final=phi,
        phi_increases=phi_increases,
        err=float(err),
        objective=original.objective(result_state.x),
        certificate=certificate,
        relaxation=relaxation,
        trace=trace,
        diagnostics=diagnostics.to_list(),
        elapsed_seconds=elapsed,
    )
