"""Multi-seed execution and summary statistics."""

from __future__ import annotations

import logging
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from ..core.exceptions import DivergenceError, OracleFault
from ..game import load_game
from ..kkt import KktSystem, assemble
from ..observability import RunLoggerAdapter
from ..solvers import Trace, loglog_slope, solve_first_order, solve_zero_order
from .models import RunConfig

logger = logging.getLogger(__name__)

SLOPE_WINDOW = (1_000.0, 10_000.0)
CHECKPOINT_T = 1_000


@dataclass
class SeedResult:
    """Outcome of one seed (or of the single first-order run)."""

    seed: int | None
    trace_path: Path | None = None
    iterations: int = 0
    final_gap: float = float("nan")
    final_x_dist: float | None = None
    x_dist_at_checkpoint: float | None = None
    stop_reason: str = ""
    error: str | None = None
    error_code: str | None = None
    ts: np.ndarray = field(default_factory=lambda: np.empty(0))
    gaps: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def diverged(self) -> bool:
        return self.error_code == "DIVERGED"

    @property
    def converged(self) -> bool:
        """False for a first-order run that spent its budget above stop_gap."""
        return self.ok and self.stop_reason != "max_iters"


class SolveSummary(BaseModel):
    """Statistics over the seeds of one solve."""

    method: str
    runs: int
    diverged: list[int | None]
    faulted: list[int | None] = []
    unconverged: list[int | None] = []
    iterations: list[int]
    gap_median: float | None = None
    gap_min: float | None = None
    gap_max: float | None = None
    x_dist_median: float | None = None
    x_dist_min: float | None = None
    x_dist_max: float | None = None
    x_dist_median_at_checkpoint: float | None = None
    mean_gap_slope: float | None = None


def trace_filename(method: str, seed: int | None) -> str:
    return f"{method}.csv" if seed is None else f"{method}-seed{seed}.csv"


def _finish(result: SeedResult, trace: Trace, cfg: RunConfig) -> SeedResult:
    result.iterations = trace.iterations
    result.final_gap = trace.final.F
    result.final_x_dist = trace.final.x_dist
    checkpoint = trace.at(CHECKPOINT_T)
    result.x_dist_at_checkpoint = checkpoint.x_dist if checkpoint else None
    result.stop_reason = trace.stop_reason
    result.ts = trace.column("t")
    result.gaps = trace.column("F")
    result.trace_path = trace.write_csv(cfg.trace.dir / trace_filename(cfg.method, result.seed), cfg.trace.every)
    return result


def run_one(cfg: RunConfig, seed: int | None) -> SeedResult:
    """Solve once and write the trace.

    Divergence and player-oracle faults are recorded on the result so the
    other seeds still run.
    """
    run_id = f"{cfg.method}-seed{seed}" if seed is not None else cfg.method
    log = RunLoggerAdapter(logger, run_id)
    game = load_game(cfg.game)
    sys: KktSystem = assemble(game)
    result = SeedResult(seed=seed)
    try:
        if cfg.method == "first-order":
            _, trace = solve_first_order(sys, None, cfg.fo_config(), run_id=run_id)
        else:
            assert seed is not None
            _, trace = solve_zero_order(
                game, sys, None, cfg.zo_config(seed, sys), reference=cfg.reference, run_id=run_id
            )
    except (DivergenceError, OracleFault) as e:
        log.warning("Run failed: %s", e)
        result.error = str(e)
        result.error_code = e.code
        return result
    return _finish(result, trace, cfg)


def run_seeds(cfg: RunConfig) -> list[SeedResult]:
    """Run every seed, in a process pool when cfg.workers > 1.

    Results come back in seed order.
    """
    seeds: list[int | None] = list(cfg.seeds) if cfg.method == "zero-order" else [None]
    if cfg.workers <= 1 or len(seeds) == 1:
        return [run_one(cfg, seed) for seed in seeds]

    logger.info("Dispatching %d seeds to %d workers", len(seeds), cfg.workers)
    context = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=cfg.workers, mp_context=context) as pool:
        return list(pool.map(run_one, [cfg] * len(seeds), seeds))


def _stats(values: list[float]) -> tuple[float | None, float | None, float | None]:
    if not values:
        return None, None, None
    arr = np.asarray(values)
    return float(np.median(arr)), float(arr.min()), float(arr.max())


def summarize(results: list[SeedResult], method: str) -> SolveSummary:
    """Median/min/max of the final gap and distance, and the rate slope.

    The slope is fitted to the gap averaged over seeds on t in [1e3, 1e4];
    it is omitted when the traces do not cover that window.
    """
    ok = [r for r in results if r.ok]
    gap_med, gap_min, gap_max = _stats([r.final_gap for r in ok])
    dist_med, dist_min, dist_max = _stats([r.final_x_dist for r in ok if r.final_x_dist is not None])
    checkpoint = [r.x_dist_at_checkpoint for r in ok if r.x_dist_at_checkpoint is not None]

    slope = None
    if ok and all(len(r.gaps) == len(ok[0].gaps) for r in ok):
        ts = ok[0].ts
        mean_gap = np.mean(np.stack([r.gaps for r in ok]), axis=0)
        if ts.size and ts[-1] >= SLOPE_WINDOW[1]:
            slope = loglog_slope(ts, mean_gap, *SLOPE_WINDOW)

    return SolveSummary(
        method=method,
        runs=len(results),
        diverged=[r.seed for r in results if r.diverged],
        faulted=[r.seed for r in results if not r.ok and not r.diverged],
        unconverged=[r.seed for r in results if r.ok and not r.converged],
        iterations=[r.iterations for r in ok],
        gap_median=gap_med,
        gap_min=gap_min,
        gap_max=gap_max,
        x_dist_median=dist_med,
        x_dist_min=dist_min,
        x_dist_max=dist_max,
        x_dist_median_at_checkpoint=float(np.median(checkpoint)) if checkpoint else None,
        mean_gap_slope=slope,
    )
