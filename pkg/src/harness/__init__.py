"""Command-line harness: run configs, multi-seed runner and the typer app."""

from .models import PAPER_SCHEDULE_PRESET, RunConfig, TraceOptions, load_run_config
from .runner import SeedResult, SolveSummary, run_one, run_seeds, summarize

__all__ = [
    "PAPER_SCHEDULE_PRESET",
    "RunConfig",
    "SeedResult",
    "SolveSummary",
    "TraceOptions",
    "load_run_config",
    "run_one",
    "run_seeds",
    "summarize",
]
