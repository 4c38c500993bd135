# IsQP Core Module
# Problem data, KKT həlli, base iteration, penalty yeniləməsi, master loop,
# generatorlar, oracle və benchmark modullarını saxlayır

# Problem data
from .problem import (
    CqpProblem, ScalingRecord, AugmentedState, KktResiduals,
    validate, normalize_rows, augment, penalty_objective,
    optimality_error, kkt_residuals, load_problem, save_problem,
)

# Newton-KKT
from .kkt import KktWorkspace, KktRhs, Direction, StepKind, assemble, solve_step

# Base iteration
from .base_mpc import BaseIterationVars, StepResult, select_constraints, step, duality_measure

# Penalty
from .penalty import PenaltyConfig, update, init_thresholds

# Master loop
from .solver_types import SolveStatus, FarkasCertificate, RelaxationResult, TraceRow, SolveReport
from .driver import solve, certificate_candidate, extract_relaxation

# Generators
from .gen import (
    HessianKind, GenSpec, SvmData,
    random_feasible, random_infeasible, infeasible_start_point,
    svm_problem, svm_relaxed_problem, synthetic_svm_data, load_svm_csv,
)

# Oracle
from .oracle import OracleVerdict, TinyResult, FeasibilityResult, solve_tiny, feasibility_tiny

# Benchmark
from .benchmark import BenchConfig, sweep

# Exceptions
from .exceptions import (
    IsQpError, ProblemValidationError, DimensionMismatch, AsymmetricHessian,
    IndefiniteHessian, ProblemFormatError, FactorizationFailure, StallError,
    RelaxationError, SizeLimit, OracleError,
)

__all__ = [
    # Problem
    'CqpProblem', 'ScalingRecord', 'AugmentedState', 'KktResiduals',
    'validate', 'normalize_rows', 'augment', 'penalty_objective',
    'optimality_error', 'kkt_residuals', 'load_problem', 'save_problem',
    # KKT
    'KktWorkspace', 'KktRhs', 'Direction', 'StepKind', 'assemble', 'solve_step',
    # Base iteration
    'BaseIterationVars', 'StepResult', 'select_constraints', 'step', 'duality_measure',
    # Penalty
    'PenaltyConfig', 'update', 'init_thresholds',
    # Driver
    'SolveStatus', 'FarkasCertificate', 'RelaxationResult', 'TraceRow', 'SolveReport',
    'solve', 'certificate_candidate', 'extract_relaxation',
    # Generators
    'HessianKind', 'GenSpec', 'SvmData',
    'random_feasible', 'random_infeasible', 'infeasible_start_point',
    'svm_problem', 'svm_relaxed_problem', 'synthetic_svm_data', 'load_svm_csv',
    # Oracle
    'OracleVerdict', 'TinyResult', 'FeasibilityResult', 'solve_tiny', 'feasibility_tiny',
    # Benchmark
    'BenchConfig', 'sweep',
    # Exceptions
    'IsQpError', 'ProblemValidationError', 'DimensionMismatch', 'AsymmetricHessian',
    'IndefiniteHessian', 'ProblemFormatError', 'FactorizationFailure', 'StallError',
    'RelaxationError', 'SizeLimit', 'OracleError',
]
