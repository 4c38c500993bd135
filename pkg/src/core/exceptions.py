"""
IsQP Exceptions
Solver və köməkçi modulların xəta iyerarxiyası.
"""


class IsQpError(Exception):
    """Base class for all solver errors."""


class ProblemValidationError(IsQpError, ValueError):
    """Problem data fails a structural check."""


class DimensionMismatch(ProblemValidationError):
    """Declared sizes and array shapes disagree."""


class AsymmetricHessian(ProblemValidationError):
    """H differs from its transpose beyond the relative tolerance."""


class IndefiniteHessian(ProblemValidationError):
    """H + eps*I could not be Cholesky-factorized (PSD check enabled)."""


class ProblemFormatError(IsQpError, ValueError):
    """A problem JSON or SVM CSV file could not be parsed."""


class FactorizationFailure(IsQpError):
    """Reduced Newton matrix stayed singular after all perturbation retries."""

    def __init__(self, message: str, perturbation: float = 0.0):
        super().__init__(message)
        self.perturbation = perturbation


class StallError(IsQpError):
    """Base step neither kept the penalty objective monotone nor reduced mu."""


class RelaxationError(IsQpError, AssertionError):
    """Stopping iterate is not feasible for the relaxed constraint data."""


class SizeLimit(IsQpError, ValueError):
    """Problem exceeds the brute-force oracle size caps."""


class OracleError(IsQpError):
    """Enumeration produced no verdict (degenerate instance)."""
