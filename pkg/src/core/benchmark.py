"""
IsQP Benchmark
Ölçü sweep-ləri: hər n üçün `reps` nümunə generasiya edib həll edir və
orta göstəriciləri cədvəl sətirləri kimi qaytarır.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.core.driver import solve
from src.core.gen import GenSpec, HessianKind, generate, infeasible_start_point
from src.core.solver_types import SolveStatus
from src.utils.config_models import BaseIterationSettings, PenaltySettings, SolveOptions
from src.utils.helpers import format_seconds
from src.utils.logger import get_logger

logger = get_logger()

BENCH_COLUMNS = (
    "kind", "m", "n", "p", "reps",
    "mean_iters", "mean_time_ms", "failures",
    "mean_phi_increases", "false_positive_count",
)


@dataclass
class BenchConfig:
    """Sweep parametrləri."""
    m: int
    ns: Sequence[int]
    p_rule: str = "0"
    kind: HessianKind = HessianKind.STRONGLY_CONVEX
    reps: int = 20
    seed: int = 0
    infeasible: bool = False
    workers: int = 1
    options: SolveOptions = field(default_factory=SolveOptions)
    penalty: PenaltySettings = field(default_factory=PenaltySettings)
    base: BaseIterationSettings = field(default_factory=BaseIterationSettings)

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if self.p_rule not in ("half", "0"):
            raise ValueError(f"p must be 'half' or '0', got {self.p_rule!r}")
        if self.infeasible and self.m < 2:
            raise ValueError("infeasible sweeps need m >= 2")

    def p_for(self, n: int) -> int:
        return n // 2 if self.p_rule == "half" else 0


@dataclass(frozen=True)
class InstanceOutcome:
    n: int
    rep: int
    status: SolveStatus
    iterations: int
    elapsed_seconds: float
    phi_increases: int


def instance_seeds(seed: int, n: int, rep: int) -> Tuple[int, int]:
    """(problem seed, start-point seed) derived from SeedSequence((seed, n, rep))."""
    state = np.random.SeedSequence((seed, n, rep)).generate_state(2, dtype=np.uint64)
    return int(state[0]), int(state[1])


def run_instance(config: BenchConfig, n: int, rep: int) -> InstanceOutcome:
    problem_seed, start_seed = instance_seeds(config.seed, n, rep)
    spec = GenSpec(
        m=config.m, n=n, p=config.p_for(n),
        hessian_kind=config.kind,
        feasible=not config.infeasible,
        seed=problem_seed,
    )
    problem, _ = generate(spec)
    x0 = infeasible_start_point(problem, start_seed)
    report = solve(problem, x0, config.options, config.penalty, config.base)
    return InstanceOutcome(
        n=n,
        rep=rep,
        status=report.status,
        iterations=report.iterations,
        elapsed_seconds=report.elapsed_seconds,
        phi_increases=report.phi_increases,
    )


def summarize(config: BenchConfig, n: int, outcomes: List[InstanceOutcome]) -> Dict[str, object]:
    expected = SolveStatus.INFEASIBLE if config.infeasible else SolveStatus.OPTIMAL
    false_positives = 0
    if not config.infeasible:
        false_positives = sum(1 for o in outcomes if o.status is SolveStatus.INFEASIBLE)
    return {
        "kind": config.kind.value,
        "m": config.m,
        "n": n,
        "p": config.p_for(n),
        "reps": len(outcomes),
        "mean_iters": float(np.mean([o.iterations for o in outcomes])),
        "mean_time_ms": 1000.0 * float(np.mean([o.elapsed_seconds for o in outcomes])),
        "failures": sum(1 for o in outcomes if o.status is not expected),
        "mean_phi_increases": float(np.mean([o.phi_increases for o in outcomes])),
        "false_positive_count": false_positives,
    }


def sweep(config: BenchConfig) -> List[Dict[str, object]]:
    """
    Bütün (n, rep) cütlərini həll edir.

    Instances run in a thread pool of `config.workers`; rows come back
    sorted by n regardless of completion order.
    """
    jobs = [(n, rep) for n in config.ns for rep in range(config.reps)]
    logger.info(
        f"Bench started: m={config.m} n={list(config.ns)} p={config.p_rule} "
        f"kind={config.kind.value} reps={config.reps} infeasible={config.infeasible} "
        f"workers={config.workers}"
    )

    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        outcomes = list(executor.map(lambda job: run_instance(config, *job), jobs))

    rows = []
    for n in sorted(set(config.ns)):
        group = sorted((o for o in outcomes if o.n == n), key=lambda o: o.rep)
        rows.append(summarize(config, n, group))
        logger.info(f"Bench n={n}: mean_iters={rows[-1]['mean_iters']:.2f} failures={rows[-1]['failures']}")
    logger.info(f"Bench finished: {len(jobs)} solves in {format_seconds(time.perf_counter() - started)}")
    return rows
