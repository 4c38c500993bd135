"""
Unit tests for configuration validation models
"""
import pytest
from pydantic import ValidationError


class TestSolveOptions:
    """Tests for SolveOptions model"""

    def test_default_values(self):
        """Test default values"""
        from src.utils.config_models import SolveOptions

        options = SolveOptions()
        assert options.tol == 1e-8
        assert options.tol_infeas == 1e-6
        assert options.max_iter == 300
        assert options.phi0 == 1.0
        assert options.constraint_reduction is True
        assert options.normalize is True
        assert options.adaptive_penalty is True
        assert options.seed is None

    def test_custom_values(self):
        """Test custom values"""
        from src.utils.config_models import SolveOptions

        options = SolveOptions(tol=1e-6, max_iter=50, constraint_reduction=False)
        assert options.tol == 1e-6
        assert options.max_iter == 50
        assert options.constraint_reduction is False

    def test_invalid_tolerance(self):
        """Test that a non-positive tolerance raises error"""
        from src.utils.config_models import SolveOptions

        with pytest.raises(ValidationError):
            SolveOptions(tol=0.0)

    def test_invalid_max_iter(self):
        """Test that max_iter < 1 raises error"""
        from src.utils.config_models import SolveOptions

        with pytest.raises(ValidationError):
            SolveOptions(max_iter=0)

    def test_invalid_phi0(self):
        from src.utils.config_models import SolveOptions

        with pytest.raises(ValidationError):
            SolveOptions(phi0=-1.0)


class TestPenaltySettings:
    """Tests for PenaltySettings model"""

    def test_default_values(self):
        from src.utils.config_models import PenaltySettings

        settings = PenaltySettings()
        assert settings.sigma1 == 1.0
        assert settings.sigma2 == 10.0
        assert settings.gamma_floor == 1e-8

    def test_sigma2_must_exceed_one(self):
        """Test that sigma2 <= 1 raises error"""
        from src.utils.config_models import PenaltySettings

        with pytest.raises(ValidationError):
            PenaltySettings(sigma2=1.0)

    def test_sigma1_positive(self):
        from src.utils.config_models import PenaltySettings

        with pytest.raises(ValidationError):
            PenaltySettings(sigma1=0.0)


class TestBaseIterationSettings:
    """Tests for BaseIterationSettings model"""

    def test_default_values(self):
        from src.utils.config_models import BaseIterationSettings

        settings = BaseIterationSettings()
        assert settings.delta_bar == 1.0
        assert settings.qmin_factor == 3
        assert settings.frozen_iterations == 5
        assert settings.centering_exponent == 3.0
        assert settings.min_boundary_fraction == 0.995
        assert settings.max_backtracks == 20

    def test_boundary_fraction_range(self):
        from src.utils.config_models import BaseIterationSettings

        with pytest.raises(ValidationError):
            BaseIterationSettings(min_boundary_fraction=1.0)


class TestAppConfig:
    """Tests for AppConfig model"""

    def test_default_values(self):
        """Test default values"""
        from src.utils.config_models import AppConfig

        config = AppConfig()
        assert config.app_name == "IsQP"
        assert config.solver.max_iter == 300
        assert config.bench.workers == 1

    def test_nested_config_override(self):
        """Test nested configuration override"""
        from src.utils.config_models import AppConfig

        config = AppConfig(solver={"tol": 1e-10}, penalty={"sigma2": 5.0})
        assert config.solver.tol == 1e-10
        assert config.penalty.sigma2 == 5.0
        assert config.solver.max_iter == 300

    def test_model_dump(self):
        """Test model serialization"""
        from src.utils.config_models import AppConfig

        data = AppConfig().model_dump()
        assert set(data) == {"app_name", "version", "solver", "penalty", "base_iteration", "bench"}

    def test_shipped_settings_file_is_valid(self):
        """config/settings.json validates without falling back"""
        from src.utils.config_models import AppConfig
        from src.utils.helpers import load_config

        raw = load_config()
        config = AppConfig(**raw)
        assert config.solver.tol == 1e-8
        assert config.penalty.sigma2 == 10.0
