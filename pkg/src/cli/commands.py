"""
IsQP Command Line
Subcommands: solve, gen, bench, svm.

stdout carries only the JSON report / CSV table; log lines go to stderr.
Exit codes: 0 optimal, 1 usage or I/O error, 2 infeasible,
3 iteration limit, 4 failed.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from src.core.benchmark import BENCH_COLUMNS, BenchConfig, sweep
from src.core.driver import solve
from src.core.exceptions import IsQpError
from src.core.gen import (
    GenSpec,
    HessianKind,
    load_svm_csv,
    random_feasible,
    random_infeasible,
    svm_problem,
    svm_relaxed_problem,
)
from src.core.problem import load_problem, save_problem
from src.core.solver_types import TRACE_COLUMNS, SolveStatus
from src.utils.config_models import AppConfig, PenaltySettings, SolveOptions
from src.utils.helpers import (
    dumps_json,
    format_csv,
    load_validated_config,
    parse_int_list,
    read_json,
    write_csv,
    write_json,
)
from src.utils.logger import LOG_LEVELS, get_logger

logger = get_logger()

EXIT_USAGE = 1


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 on usage errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# =============================================================================
# Parser
# =============================================================================

def build_parser() -> UsageParser:
    parser = UsageParser(prog="isqp", description="Infeasible-start CQP solver")
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None,
                        help="stderr log threshold (default: ISQP_LOG_LEVEL or info)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="Solve a problem JSON file")
    p_solve.add_argument("problem", help="problem JSON path")
    _add_solver_flags(p_solve)
    p_solve.add_argument("--x0", default="zeros", help="zeros | random:SEED | path to a JSON list")
    p_solve.add_argument("--trace", default=None, help="write the iteration trace CSV here")

    p_gen = sub.add_parser("gen", help="Generate a random instance")
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=int, default=0)
    p_gen.add_argument("--kind", choices=[k.value for k in HessianKind], default="sc")
    p_gen.add_argument("--infeasible", action="store_true")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", required=True, help="output problem JSON path")

    p_bench = sub.add_parser("bench", help="Run a size sweep and print a CSV table")
    p_bench.add_argument("--m", type=int, default=2000)
    p_bench.add_argument("--n", default="10,20,50,100", help="comma-separated sizes")
    p_bench.add_argument("--p", choices=["half", "0"], default="0")
    p_bench.add_argument("--kind", choices=[k.value for k in HessianKind], default="sc")
    p_bench.add_argument("--reps", type=int, default=20)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--infeasible", action="store_true")
    p_bench.add_argument("--no-cr", action="store_true", help="disable constraint reduction")
    p_bench.add_argument("--workers", type=int, default=None)
    p_bench.add_argument("--max-iter", type=int, default=None)
    p_bench.add_argument("-o", "--output", default=None, help="write CSV here instead of stdout")

    p_svm = sub.add_parser("svm", help="Train a linear SVM from a CSV file")
    p_svm.add_argument("data", help="CSV: features..., label (-1/+1)")
    p_svm.add_argument("--tau", type=float, default=1.0)
    p_svm.add_argument("--hard-only", action="store_true")
    _add_solver_flags(p_svm)

    return parser


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--tol-infeas", type=float, default=None)
    parser.add_argument("--max-iter", type=int, default=None)
    parser.add_argument("--phi0", type=float, default=None)
    parser.add_argument("--sigma1", type=float, default=None)
    parser.add_argument("--sigma2", type=float, default=None)
    parser.add_argument("--no-cr", action="store_true", help="disable constraint reduction")
    parser.add_argument("--no-normalize", action="store_true")


def _solve_options(config: AppConfig, args: argparse.Namespace) -> SolveOptions:
    overrides: Dict[str, Any] = {}
    for flag, key in (("tol", "tol"), ("tol_infeas", "tol_infeas"), ("max_iter", "max_iter"), ("phi0", "phi0")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "no_cr", False):
        overrides["constraint_reduction"] = False
    if getattr(args, "no_normalize", False):
        overrides["normalize"] = False
    return SolveOptions(**{**config.solver.model_dump(), **overrides})


def _penalty_settings(config: AppConfig, args: argparse.Namespace) -> PenaltySettings:
    overrides = {k: getattr(args, k) for k in ("sigma1", "sigma2") if getattr(args, k, None) is not None}
    return PenaltySettings(**{**config.penalty.model_dump(), **overrides})


def _starting_point(spec: str, n: int) -> np.ndarray:
    if spec == "zeros":
        return np.zeros(n)
    if spec.startswith("random:"):
        seed = int(spec.split(":", 1)[1])
        return np.random.Generator(np.random.PCG64(seed)).standard_normal(n)
    x0 = np.asarray(read_json(spec), dtype=np.float64).reshape(-1)
    if x0.shape != (n,):
        raise ValueError(f"x0 from {spec} has length {x0.size}, expected {n}")
    return x0


# =============================================================================
# Commands
# =============================================================================

def cmd_solve(args: argparse.Namespace, config: AppConfig) -> int:
    problem = load_problem(args.problem)
    x0 = _starting_point(args.x0, problem.n)
    report = solve(
        problem, x0,
        options=_solve_options(config, args),
        penalty_settings=_penalty_settings(config, args),
        base_settings=config.base_iteration,
    )
    if args.trace:
        write_csv(TRACE_COLUMNS, report.trace_rows(), args.trace)
    sys.stdout.write(dumps_json(report.to_dict()) + "\n")
    return report.status.exit_code


def cmd_gen(args: argparse.Namespace, config: AppConfig) -> int:
    spec = GenSpec(
        m=args.m, n=args.n, p=args.p,
        hessian_kind=HessianKind(args.kind),
        feasible=not args.infeasible,
        seed=args.seed,
    )
    if spec.feasible:
        problem, x_feas = random_feasible(spec)
        root, _ = os.path.splitext(args.output)
        write_json({"x_feas": x_feas}, f"{root}.xfeas.json")
    else:
        problem = random_infeasible(spec)
    save_problem(problem, args.output)
    logger.info(f"Instance written: {args.output} (m={spec.m} n={spec.n} p={spec.p} kind={spec.hessian_kind.value})")
    return 0


def cmd_bench(args: argparse.Namespace, config: AppConfig) -> int:
    options = config.solver.model_copy()
    if args.no_cr:
        options = options.model_copy(update={"constraint_reduction": False})
    if args.max_iter is not None:
        options = SolveOptions(**{**options.model_dump(), "max_iter": args.max_iter})
    bench = BenchConfig(
        m=args.m,
        ns=parse_int_list(args.n),
        p_rule=args.p,
        kind=HessianKind(args.kind),
        reps=args.reps,
        seed=args.seed,
        infeasible=args.infeasible,
        workers=args.workers or config.bench.workers,
        options=options,
        penalty=config.penalty,
        base=config.base_iteration,
    )
    rows = sweep(bench)
    if args.output:
        write_csv(BENCH_COLUMNS, rows, args.output)
    else:
        sys.stdout.write(format_csv(BENCH_COLUMNS, rows))
    return 0


def cmd_svm(args: argparse.Namespace, config: AppConfig) -> int:
    data = load_svm_csv(args.data)
    options = _solve_options(config, args)
    penalty = _penalty_settings(config, args)

    hard = svm_problem(data)
    report = solve(hard, np.zeros(hard.n), options, penalty, config.base_iteration)
    formulation = "hard"
    hard_report = report

    if report.status is SolveStatus.INFEASIBLE and not args.hard_only:
        logger.info("Hard-margin QP infeasible; solving the relaxed formulation")
        relaxed = svm_relaxed_problem(data, args.tau)
        report = solve(relaxed, np.zeros(relaxed.n), options, penalty, config.base_iteration)
        formulation = "relaxed"

    n_bar = data.n_features
    w = report.x[:n_bar]
    beta = float(report.x[n_bar])
    nu: Optional[float] = float(report.x[n_bar + 1]) if formulation == "relaxed" else None
    w_norm = float(np.linalg.norm(w))

    output = {
        "formulation": formulation,
        "status": report.status.value,
        "hard_margin_status": hard_report.status.value,
        "hard_margin_certificate": hard_report.certificate.to_dict() if hard_report.certificate else None,
        "w": w,
        "beta": beta,
        "nu": nu,
        "tau": args.tau if formulation == "relaxed" else None,
        "margin": 2.0 / w_norm if w_norm > 0.0 else None,
        "training_accuracy": data.accuracy(w, beta),
        "objective": report.objective,
        "report": report.to_dict(),
    }
    sys.stdout.write(dumps_json(output) + "\n")
    return report.status.exit_code


COMMANDS = {
    "solve": cmd_solve,
    "gen": cmd_gen,
    "bench": cmd_bench,
    "svm": cmd_svm,
}


def _check_usage(parser: UsageParser, args: argparse.Namespace) -> None:
    if args.command == "gen":
        if args.infeasible and args.m < 2:
            parser.error("--infeasible needs --m >= 2")
        if min(args.m, args.n) < 0 or args.p < 0 or args.n < 1:
            parser.error("sizes must be non-negative and n >= 1")
    elif args.command == "bench":
        if args.reps < 1:
            parser.error("--reps must be >= 1")
        if args.workers is not None and args.workers < 1:
            parser.error("--workers must be >= 1")
        try:
            parse_int_list(args.n)
        except ValueError as e:
            parser.error(f"--n: {e}")
        if args.infeasible and args.m < 2:
            parser.error("--infeasible needs --m >= 2")
    elif args.command == "svm" and args.tau <= 0.0:
        parser.error("--tau must be positive")


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_usage(parser, args)
    except SystemExit as e:
        return int(e.code or 0)

    if args.log_level:
        logger.set_console_level(args.log_level)

    config = load_validated_config()
    try:
        return COMMANDS[args.command](args, config)
    except ValidationError as e:
        logger.error(f"Invalid option value: {e}")
        return EXIT_USAGE
    except (IsQpError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE
