"""Distributed zero-order procedure.

One synchronous round at iterate (x, lambda):

1. every player i draws xi_x^i, xi_lambda^i, eta^i from its own seeded streams;
2. the four joint query points are formed and played;
3. player i reads its Lagrangian value and constraint residual at those points
   through its PlayerOracle and forms the differences Delta_1..3 and the
   increments S_1, S_2;
4. the aggregator sums the scalar contributions into (S, D) and broadcasts;
5. player i builds (zeta_x^i, zeta_lambda^i) and takes a diminishing step.

Every function here accepts a leading batch axis on the random draws so the
Monte-Carlo audits run through the same code as the solver.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Annotated, Literal

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, Field

from ..config import settings
from ..core.exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    DivergenceError,
    OracleFault,
    ProtocolError,
)
from ..game import PlayerOracle, QuadraticGame, eval_lagrangian, player_oracle
from ..kkt import BlockLayout, KktSystem, PrimalDual, gap
from ..numerics import RngStream
from ..observability import RunLoggerAdapter
from .trace import Trace, TraceRecord, gap_blew_up

logger = logging.getLogger(__name__)

# Spawn-key roles of the per-player streams.
ROLE_XI_X = 0
ROLE_XI_LAMBDA = 1
ROLE_ETA = 2

PROGRESS_EVERY = 1000


# ============================================================================
# Configuration
# ============================================================================


class StepRule(BaseModel):
    """gamma(t) = c / (t + t0)."""

    c: float = Field(..., gt=0, allow_inf_nan=False)
    t0: float = Field(0.0, ge=0, allow_inf_nan=False)

    def at(self, t: int) -> float:
        return self.c / (t + self.t0)


class GlobalSchedule(BaseModel):
    """One step g / (t + t0) for every coordinate of (x, lambda)."""

    kind: Literal["global"] = "global"
    g: float = Field(..., gt=0, allow_inf_nan=False)
    t0: float = Field(0.0, ge=0, allow_inf_nan=False)

    def steps(self, t: int, size: int) -> np.ndarray:
        return np.full(size, self.g / (t + self.t0))

    def check(self, sys: KktSystem) -> None:
        if self.g * sys.mu_F <= 1.0:
            logger.warning(
                "global step constant g = %.6g is not above 1/mu_F = %.6g; O(1/t) rate not guaranteed",
                self.g,
                1.0 / sys.mu_F,
            )


class PerCoordinateSchedule(BaseModel):
    """One rule per coordinate of (x, lambda), x first in joint order."""

    kind: Literal["per-coordinate"] = "per-coordinate"
    rules: list[StepRule] = Field(..., min_length=1)

    def steps(self, t: int, size: int) -> np.ndarray:
        return np.array([rule.at(t) for rule in self.rules])

    def check(self, sys: KktSystem) -> None:
        if len(self.rules) != sys.size:
            raise ConfigurationError(
                f"per-coordinate schedule has {len(self.rules)} rules, iterate has {sys.size} coordinates"
            )


StepSchedule = Annotated[GlobalSchedule | PerCoordinateSchedule, Field(discriminator="kind")]

# Steps of the bundled two-player example, in joint (coordinate-major) order.
PAPER_EXAMPLE_X_STEPS = (0.006, 0.005, 0.015, 0.009)
PAPER_EXAMPLE_X_OFFSET = 500.0
PAPER_EXAMPLE_LAMBDA_STEP = 0.001
PAPER_EXAMPLE_LAMBDA_OFFSET = 1000.0


def paper_example_schedule(dim_lambda: int = 3) -> PerCoordinateSchedule:
    """Per-coordinate preset for the bundled example (size 4 + dim_lambda)."""
    rules = [StepRule(c=c, t0=PAPER_EXAMPLE_X_OFFSET) for c in PAPER_EXAMPLE_X_STEPS]
    rules += [
        StepRule(c=PAPER_EXAMPLE_LAMBDA_STEP, t0=PAPER_EXAMPLE_LAMBDA_OFFSET)
        for _ in range(dim_lambda)
    ]
    return PerCoordinateSchedule(rules=rules)


def default_global_schedule(sys: KktSystem, t0: float = 100.0) -> GlobalSchedule:
    """g = 2 / mu_F, so that g > 1 / mu_F."""
    return GlobalSchedule(g=2.0 / sys.mu_F, t0=t0)


class ZoConfig(BaseModel):
    """Zero-order solver settings."""

    sigma: float = Field(
        default_factory=lambda: settings.sigma, gt=0, allow_inf_nan=False, description="Smoothing radius"
    )
    delta: float = Field(
        default_factory=lambda: settings.delta, gt=0, allow_inf_nan=False, description="Second-pair offset"
    )
    schedule: StepSchedule | None = Field(
        None, description="Step schedule; None means Global g = 2/mu_F, t0 = 100"
    )
    max_iters: int = Field(default_factory=lambda: settings.max_iters, ge=1, description="Number of rounds T")
    seed: int = Field(
        default_factory=lambda: settings.seed, description="Base seed of every player stream (GNE_SEED)"
    )

    def resolved_schedule(self, sys: KktSystem) -> GlobalSchedule | PerCoordinateSchedule:
        schedule = self.schedule if self.schedule is not None else default_global_schedule(sys)
        schedule.check(sys)
        return schedule


# ============================================================================
# Sampling and query points
# ============================================================================


@dataclass(frozen=True)
class RoundDraws:
    """Gaussian draws of one round, scattered into joint layout.

    Shapes are (..., nd), (..., m) and (..., nd).
    """

    xi_x: np.ndarray
    xi_lambda: np.ndarray
    eta: np.ndarray


def draw_round(
    rng: RngStream, layout: BlockLayout, t: int, batch: int | None = None
) -> RoundDraws:
    """Draw round t's vectors, each player from streams keyed (seed, t, i, role).

    Adding a player leaves the other players' draws unchanged.
    """
    lead = () if batch is None else (batch,)
    xi_x = np.empty((*lead, layout.dim_x))
    eta = np.empty((*lead, layout.dim_x))
    xi_lambda = np.empty((*lead, layout.dim_lambda))
    for i in range(layout.n):
        idx = layout.x_indices[i]
        xi_x[..., idx] = rng.child(t, i, ROLE_XI_X).standard_normal((*lead, layout.d))
        m_i = layout.m_i(i)
        if m_i:
            xi_lambda[..., layout.lambda_slices[i]] = rng.child(t, i, ROLE_XI_LAMBDA).standard_normal(
                (*lead, m_i)
            )
        eta[..., idx] = rng.child(t, i, ROLE_ETA).standard_normal((*lead, layout.d))
    return RoundDraws(xi_x=xi_x, xi_lambda=xi_lambda, eta=eta)


def build_query_points(
    x: ArrayLike, sigma: float, delta: float, xi_x: ArrayLike, eta: ArrayLike
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four joint actions played in one round.

    x1 = x - sigma*eta, x2 = x + sigma*eta,
    x3 = x + delta*xi_x - sigma*eta, x4 = x + delta*xi_x + sigma*eta.
    """
    x = np.asarray(x, dtype=np.float64)
    shift = sigma * np.asarray(eta, dtype=np.float64)
    moved = x + delta * np.asarray(xi_x, dtype=np.float64)
    return x - shift, x + shift, moved - shift, moved + shift


# ============================================================================
# Player side
# ============================================================================


@dataclass(frozen=True)
class PlayerRound:
    """What player i computes from its own observations in one round."""

    player: int
    delta1: np.ndarray | float
    delta2: np.ndarray | float
    delta3: np.ndarray | float
    s1: np.ndarray | float
    s2: np.ndarray | float
    share: np.ndarray | float

    @property
    def contribution(self) -> tuple[np.ndarray | float, np.ndarray | float]:
        """(1/2 (S_2 - d S_1), Delta_3), the pair sent to the aggregator."""
        return self.share, self.delta3


def _squared_residual(oracle: PlayerOracle, x: np.ndarray) -> np.ndarray | float:
    res = oracle.residual(x)
    value = np.einsum("...i,...i->...", res, res)
    return float(value) if np.ndim(value) == 0 else value


def player_round(
    oracle: PlayerOracle,
    lambda_i: ArrayLike,
    points: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray],
    xi_lambda_i: ArrayLike,
    eta_i: ArrayLike,
    sigma: float,
    delta: float,
    d: int,
) -> PlayerRound:
    """Two-point differences and squared increments of player i.

    Only ``oracle`` values are used; the game matrices are never touched.

    Raises:
        OracleFault: If any observed value is not finite.
    """
    x1, x2, x3, x4 = points
    lam = np.asarray(lambda_i, dtype=np.float64)
    lam_moved = lam + delta * np.asarray(xi_lambda_i, dtype=np.float64)

    l1 = eval_lagrangian(oracle, x1, lam)
    l2 = eval_lagrangian(oracle, x2, lam)
    l3 = eval_lagrangian(oracle, x3, lam_moved)
    l4 = eval_lagrangian(oracle, x4, lam_moved)
    c1 = _squared_residual(oracle, x1)
    c2 = _squared_residual(oracle, x2)

    delta1 = (l2 - l1) / (2.0 * sigma)
    delta2 = (l4 - l3) / (2.0 * sigma)
    delta3 = (c2 - c1) / (2.0 * sigma)
    s1 = (delta2 * delta2 - delta1 * delta1) / delta
    eta_sq = np.einsum("...i,...i->...", np.asarray(eta_i), np.asarray(eta_i))
    s2 = s1 * eta_sq
    share = 0.5 * (s2 - d * s1)

    if not (np.all(np.isfinite(share)) and np.all(np.isfinite(delta3))):
        raise OracleFault(oracle.index, "non-finite value observed")
    return PlayerRound(oracle.index, delta1, delta2, delta3, s1, s2, share)


def estimate(
    S: ArrayLike,
    D: ArrayLike,
    s1_i: ArrayLike,
    s2_i: ArrayLike,
    xi_x_i: ArrayLike,
    eta_i: ArrayLike,
    xi_lambda_i: ArrayLike,
    d: int,
) -> tuple[np.ndarray, np.ndarray]:
    """zeta_x^i = S xi_x^i + D eta^i and zeta_lambda^i = 1/2 (S_2 - d S_1) xi_lambda^i."""
    S = np.asarray(S, dtype=np.float64)[..., None]
    D = np.asarray(D, dtype=np.float64)[..., None]
    share = 0.5 * (np.asarray(s2_i) - d * np.asarray(s1_i))[..., None]
    zeta_x = S * np.asarray(xi_x_i) + D * np.asarray(eta_i)
    zeta_lambda = share * np.asarray(xi_lambda_i)
    return zeta_x, zeta_lambda


# ============================================================================
# Aggregator
# ============================================================================


class AggregatorBus:
    """Collects one contribution per player, then broadcasts (S, D)."""

    def __init__(self, n: int) -> None:
        self.n = n
        self._inbox: dict[int, tuple[np.ndarray | float, np.ndarray | float]] = {}
        self.broadcast: tuple[np.ndarray | float, np.ndarray | float] | None = None

    def submit(self, player: int, contribution: tuple[np.ndarray | float, np.ndarray | float]) -> None:
        if not 0 <= player < self.n:
            raise ProtocolError(player, f"unknown player (bus has {self.n})")
        if player in self._inbox:
            raise ProtocolError(player, "duplicate contribution in one round")
        self._inbox[player] = contribution

    @property
    def missing(self) -> list[int]:
        return [j for j in range(self.n) if j not in self._inbox]

    def reduce(self) -> tuple[np.ndarray | float, np.ndarray | float]:
        """Sum in player-index order, independent of arrival order."""
        missing = self.missing
        if missing:
            raise ProtocolError(missing[0], f"no contribution received (missing players {missing})")
        S: np.ndarray | float = 0.0
        D: np.ndarray | float = 0.0
        for j in range(self.n):
            share, delta3 = self._inbox[j]
            S = S + share
            D = D + delta3
        self.broadcast = (S, D)
        return S, D

    def clear(self) -> None:
        self._inbox.clear()
        self.broadcast = None


def aggregate(bus: AggregatorBus) -> tuple[np.ndarray | float, np.ndarray | float]:
    """(S, D) = (sum_j 1/2 (S_2^j - d S_1^j), sum_j Delta_3^j).

    Raises:
        ProtocolError: If a player has not contributed.
    """
    return bus.reduce()


# ============================================================================
# One round and the solver loop
# ============================================================================


@dataclass(frozen=True)
class EstimatorRound:
    """Everything produced in one round (optionally batched)."""

    draws: RoundDraws
    players: tuple[PlayerRound, ...]
    S: np.ndarray | float
    D: np.ndarray | float
    zeta_x: np.ndarray
    zeta_lambda: np.ndarray

    @property
    def zeta(self) -> np.ndarray:
        """[zeta_x, zeta_lambda] in the layout of z."""
        return np.concatenate([self.zeta_x, self.zeta_lambda], axis=-1)


def estimator_round(
    oracles: Sequence[PlayerOracle],
    layout: BlockLayout,
    x: ArrayLike,
    lam: ArrayLike,
    draws: RoundDraws,
    sigma: float,
    delta: float,
    player_order: Sequence[int] | None = None,
) -> EstimatorRound:
    """Run one synchronous round at the frozen iterate (x, lam).

    ``player_order`` only changes the order in which players compute and
    submit; the broadcast is the same for any order.
    """
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    d = layout.d
    order = list(range(layout.n)) if player_order is None else list(player_order)

    points = build_query_points(x, sigma, delta, draws.xi_x, draws.eta)
    bus = AggregatorBus(layout.n)
    rounds: dict[int, PlayerRound] = {}
    for i in order:
        idx, sl = layout.x_indices[i], layout.lambda_slices[i]
        result = player_round(
            oracles[i], lam[sl], points, draws.xi_lambda[..., sl], draws.eta[..., idx], sigma, delta, d
        )
        rounds[i] = result
        bus.submit(i, result.contribution)
    S, D = aggregate(bus)

    zeta_x = np.empty_like(draws.xi_x)
    zeta_lambda = np.empty_like(draws.xi_lambda)
    for i in order:
        idx, sl = layout.x_indices[i], layout.lambda_slices[i]
        zx, zl = estimate(
            S,
            D,
            rounds[i].s1,
            rounds[i].s2,
            draws.xi_x[..., idx],
            draws.eta[..., idx],
            draws.xi_lambda[..., sl],
            d,
        )
        zeta_x[..., idx] = zx
        zeta_lambda[..., sl] = zl

    return EstimatorRound(
        draws=draws,
        players=tuple(rounds[i] for i in range(layout.n)),
        S=S,
        D=D,
        zeta_x=zeta_x,
        zeta_lambda=zeta_lambda,
    )


def solve_zero_order(
    game: QuadraticGame,
    sys: KktSystem,
    z0: PrimalDual | None = None,
    cfg: ZoConfig | None = None,
    reference: ArrayLike | None = None,
    player_order: Sequence[int] | None = None,
    run_id: str | None = None,
) -> tuple[PrimalDual, Trace]:
    """Run T rounds of the zero-order procedure from z0 (zeros by default).

    The system is used only to record F_t in the trace; players see their
    oracles and the broadcast sums.

    Args:
        game: Game that backs the player oracles.
        sys: Its assembled KKT system.
        z0: Starting point.
        cfg: Solver settings.
        reference: Reference x for the distance column; defaults to the
            game's reference solution when it has one.
        player_order: Processing order of players within a round.
        run_id: Tag stamped on log records.

    Returns:
        Final iterate and the trace (t, gamma_ref, F, x_dist, lambda_norm),
        where gamma_ref is the largest step applied at t.

    Raises:
        ConfigurationError: If the schedule does not fit the iterate.
        DimensionMismatchError: If the reference is not an n*d vector.
        DivergenceError: If an iterate becomes non-finite or F_t exceeds
            DIVERGENCE_FACTOR * (1 + F_0).
    """
    cfg = cfg or ZoConfig()
    log = RunLoggerAdapter(logger, run_id or f"zero-order-seed{cfg.seed}")
    layout = sys.layout
    nd = layout.dim_x
    schedule = cfg.resolved_schedule(sys)

    if reference is None and game.reference_x is not None:
        reference = game.reference_x
    x_ref = None if reference is None else np.asarray(reference, dtype=np.float64)
    if x_ref is not None and x_ref.shape != (nd,):
        raise DimensionMismatchError("solve_zero_order reference", (nd,), x_ref.shape)

    oracles = [player_oracle(game, i) for i in range(game.n)]
    rng = RngStream(cfg.seed)
    start = z0 or sys.zeros()
    x, lam = start.x.copy(), start.lam.copy()

    def record(t: int, gamma_ref: float | None) -> TraceRecord:
        f = float(gap(sys, np.concatenate([x, lam])))
        dist = None if x_ref is None else float(np.linalg.norm(x - x_ref))
        return TraceRecord(t=t, F=f, gamma_ref=gamma_ref, x_dist=dist, lambda_norm=float(np.linalg.norm(lam)))

    trace = Trace(kind="zero-order")
    trace.append(record(0, None))
    f0 = trace.final.F
    log.info(
        "Zero-order start: T=%d, sigma=%.4g, delta=%.4g, schedule=%s, F_0=%.6g",
        cfg.max_iters,
        cfg.sigma,
        cfg.delta,
        schedule.kind,
        trace.final.F,
    )

    for t in range(1, cfg.max_iters + 1):
        draws = draw_round(rng, layout, t)
        rnd = estimator_round(oracles, layout, x, lam, draws, cfg.sigma, cfg.delta, player_order)
        steps = schedule.steps(t, sys.size)
        x = x - steps[:nd] * rnd.zeta_x
        lam = lam - steps[nd:] * rnd.zeta_lambda
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(lam))):
            raise DivergenceError(t, "iterate is not finite")
        trace.append(record(t, float(steps.max())))
        if gap_blew_up(trace.final.F, f0):
            raise DivergenceError(t, f"gap {trace.final.F:.3g} blew up from F_0 = {f0:.3g}")
        if t % PROGRESS_EVERY == 0:
            row = trace.final
            log.debug("t=%d F=%.6g x_dist=%s", t, row.F, row.x_dist)

    trace.stop_reason = "completed"
    final = trace.final
    log.info("Zero-order stop at t=%d: F=%.6g, x_dist=%s", final.t, final.F, final.x_dist)
    return PrimalDual(x, lam, layout), trace
