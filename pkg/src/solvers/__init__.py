"""Exact-gradient and zero-order solvers, and their traces."""

from .first_order import FoConfig, default_budget, pl_iteration_bound, solve_first_order
from .trace import (
    DIVERGENCE_FACTOR,
    Trace,
    TraceRecord,
    format_float,
    gap_blew_up,
    loglog_slope,
    read_trace_csv,
)
from .zero_order import (
    AggregatorBus,
    EstimatorRound,
    GlobalSchedule,
    PerCoordinateSchedule,
    PlayerRound,
    RoundDraws,
    StepRule,
    StepSchedule,
    ZoConfig,
    aggregate,
    build_query_points,
    default_global_schedule,
    draw_round,
    estimate,
    estimator_round,
    paper_example_schedule,
    player_round,
    solve_zero_order,
)

__all__ = [
    "DIVERGENCE_FACTOR",
    "AggregatorBus",
    "EstimatorRound",
    "FoConfig",
    "GlobalSchedule",
    "PerCoordinateSchedule",
    "PlayerRound",
    "RoundDraws",
    "StepRule",
    "StepSchedule",
    "Trace",
    "TraceRecord",
    "ZoConfig",
    "aggregate",
    "build_query_points",
    "default_budget",
    "default_global_schedule",
    "draw_round",
    "estimate",
    "estimator_round",
    "format_float",
    "gap_blew_up",
    "loglog_slope",
    "paper_example_schedule",
    "pl_iteration_bound",
    "player_round",
    "read_trace_csv",
    "solve_first_order",
    "solve_zero_order",
]
