"""
IsQP Configuration Models
Pydantic-based configuration validation models.
"""

from typing import Optional
from pydantic import BaseModel, Field, field_validator


class SolveOptions(BaseModel):
    """Master loop options"""
    tol: float = Field(default=1e-8, gt=0.0, lt=1.0)
    tol_infeas: float = Field(default=1e-6, gt=0.0, lt=1.0)
    max_iter: int = Field(default=300, ge=1, le=100000)
    phi0: float = Field(default=1.0, gt=0.0)
    constraint_reduction: bool = True
    normalize: bool = True
    check_psd: bool = False
    adaptive_penalty: bool = True
    seed: Optional[int] = None


class PenaltySettings(BaseModel):
    """Penalty-parameter updating rule constants"""
    sigma1: float = Field(default=1.0, gt=0.0)
    sigma2: float = Field(default=10.0)
    gamma_floor: float = Field(default=1e-8, gt=0.0)

    @field_validator('sigma2')
    @classmethod
    def validate_sigma2(cls, v):
        if v <= 1.0:
            raise ValueError(f"sigma2 must be > 1, got {v}")
        return v


class BaseIterationSettings(BaseModel):
    """Predictor-corrector base iteration settings"""
    delta_bar: float = Field(default=1.0, gt=0.0)
    delta_min: float = Field(default=1e-12, gt=0.0)
    qmin_factor: int = Field(default=3, ge=0, le=1000)
    frozen_iterations: int = Field(default=5, ge=0)
    centering_exponent: float = Field(default=3.0, gt=0.0)
    min_boundary_fraction: float = Field(default=0.995, gt=0.5, lt=1.0)
    max_backtracks: int = Field(default=20, ge=0, le=60)
    mu_floor: float = Field(default=1e-14, ge=0.0)
    monotone_rtol: float = Field(default=1e-12, ge=0.0, le=1e-6)


class BenchSettings(BaseModel):
    """Benchmark sweep settings"""
    workers: int = Field(default=1, ge=1, le=64)


class AppConfig(BaseModel):
    """Root configuration model"""
    app_name: str = "IsQP"
    version: str = "1.0.0"
    solver: SolveOptions = Field(default_factory=SolveOptions)
    penalty: PenaltySettings = Field(default_factory=PenaltySettings)
    base_iteration: BaseIterationSettings = Field(default_factory=BaseIterationSettings)
    bench: BenchSettings = Field(default_factory=BenchSettings)
