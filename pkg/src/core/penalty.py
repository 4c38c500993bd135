"""
IsQP Penalty Update
Penalty parametri φ üçün üç addımlı yeniləmə qaydası.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from src.core.problem import AugmentedState, KktResiduals
from src.utils.config_models import PenaltySettings
from src.utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True)
class PenaltyConfig:
    """
    Current φ with the rule constants.

    gamma0..gamma3 are set once from the starting point (see
    `init_thresholds`) and stay fixed for the run.
    """
    phi: float
    sigma1: float = 1.0
    sigma2: float = 10.0
    gamma0: float = 1.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1.0

    @classmethod
    def from_settings(
        cls,
        phi0: float,
        settings: Optional[PenaltySettings] = None,
    ) -> 'PenaltyConfig':
        settings = settings or PenaltySettings()
        return cls(phi=phi0, sigma1=settings.sigma1, sigma2=settings.sigma2)

    def with_phi(self, phi: float) -> 'PenaltyConfig':
        return replace(self, phi=phi)


def init_thresholds(
    config: PenaltyConfig,
    state0: AugmentedState,
    residuals0: KktResiduals,
    floor: float = 1e-8,
) -> PenaltyConfig:
    """
    γ0 = ‖[z⁰; y⁰]‖∞ / φ₀ and γ1, γ2, γ3 = ‖G1⁰‖₂, ‖G2⁰‖₂, |G3⁰|.

    Values below `floor` are lifted to it.
    """
    return replace(
        config,
        gamma0=max(state0.relaxation_inf_norm() / config.phi, floor),
        gamma1=max(residuals0.g1_norm, floor),
        gamma2=max(residuals0.g2_norm, floor),
        gamma3=max(residuals0.g3_abs, floor),
    )


def update(config: PenaltyConfig, state: AugmentedState, residuals: KktResiduals) -> float:
    """
    Nondecreasing φ update.

    1. φ⁺ = φ
    2. ‖[z;y]‖∞ > γ0·φ  →  φ⁺ = (σ2/γ0)·‖[z;y]‖∞
    3. φ⁺ ≤ ‖[π; η−ζ]‖∞ + σ1 and ‖G1‖ ≤ γ1, ‖G2‖ ≤ γ2, |G3| ≤ γ3
       →  φ⁺ = σ2·(‖[π; η−ζ]‖∞ + σ1)
    """
    phi = config.phi
    phi_new = phi

    relax = state.relaxation_inf_norm()
    if relax > config.gamma0 * phi:
        phi_new = (config.sigma2 / config.gamma0) * relax

    multipliers = state.multiplier_inf_norm()
    if (
        phi_new <= multipliers + config.sigma1
        and residuals.g1_norm <= config.gamma1
        and residuals.g2_norm <= config.gamma2
        and residuals.g3_abs <= config.gamma3
    ):
        phi_new = config.sigma2 * (multipliers + config.sigma1)

    phi_new = max(phi_new, phi)
    if phi_new > phi:
        logger.debug(f"penalty: phi {phi:.6g} -> {phi_new:.6g} (|[z;y]|={relax:.3e}, |mult|={multipliers:.3e})")
    return phi_new
