"""Independent oracles and statistical audits.

Every audit owns its RngStream and returns a CheckReport; none of them
raises on a failed comparison.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..config import settings
from ..core.exceptions import ConfigurationError
from ..game import QuadraticGame, player_oracle
from ..kkt import KktSystem, PrimalDual, gap, gap_gradient
from ..numerics import (
    RngStream,
    gaussian_identity_check,
    kernel_dimension,
    min_norm_least_squares,
    rank_tolerance,
)
from ..solvers import ZoConfig, draw_round, estimator_round
from .report import CheckItem, CheckReport

logger = logging.getLogger(__name__)

FD_REL_TOL = 1e-6
MIN_AUDIT_ROUNDS = 10_000
AUDIT_CHUNK = 10_000
MIN_IDENTITY_SAMPLES = 100_000
DEFAULT_IDENTITY_DIMS: tuple[tuple[int, int], ...] = ((1, 1), (2, 1), (2, 2), (3, 2))


# ============================================================================
# Finite differences and PL inequality
# ============================================================================


def fd_gradient_check(
    sys: KktSystem,
    points: int,
    h: float,
    rng: RngStream,
    at: Sequence[ArrayLike] = (),
) -> CheckReport:
    """Central differences of the gap versus gap_gradient.

    The relative error |fd - grad| / max(1, |grad|) must stay below 1e-6, so
    near a minimizer the comparison is effectively absolute.

    Args:
        sys: Assembled system.
        points: Number of random N(0, I) points.
        h: Difference step.
        rng: Stream for the random points.
        at: Extra points to check (e.g. a known minimizer).
    """
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    size = sys.size
    zs = [np.asarray(z, dtype=np.float64) for z in at]
    if points:
        zs.extend(rng.standard_normal((points, size)))

    basis = h * np.eye(size)
    report = CheckReport(check="fd_gradient", details={"h": h, "points": len(zs)})
    for p, z in enumerate(zs):
        forward = np.asarray(gap(sys, z + basis))
        backward = np.asarray(gap(sys, z - basis))
        fd = (forward - backward) / (2.0 * h)
        exact = gap_gradient(sys, z)
        error = float(np.linalg.norm(fd - exact))
        scale = max(1.0, float(np.linalg.norm(exact)))
        report.items.append(CheckItem.compare(f"point {p} relative error", error / scale, 0.0, FD_REL_TOL))
    return report


def pl_inequality_check(sys: KktSystem, points: int, rng: RngStream, tol: float = 1e-9) -> CheckReport:
    """|grad F(z)|^2 >= 2 mu_F F(z) - tol * scale at random points."""
    zs = rng.standard_normal((points, sys.size)) * 10.0
    f = np.asarray(gap(sys, zs))
    g = gap_gradient(sys, zs)
    lhs = np.einsum("ij,ij->i", g, g)
    rhs = 2.0 * sys.mu_F * f
    slack = np.minimum(lhs - rhs, 0.0)
    scale = 1.0 + np.maximum(lhs, rhs)
    worst = int(np.argmin(slack / scale))
    item = CheckItem.compare(
        "worst relative PL slack", float(slack[worst] / scale[worst]), 0.0, tol
    )
    return CheckReport(check="pl_inequality", items=[item], details={"points": points, "mu_F": sys.mu_F})


# ============================================================================
# Estimator audit
# ============================================================================


def estimator_audit(
    game: QuadraticGame,
    sys: KktSystem,
    z: PrimalDual | ArrayLike,
    cfg: ZoConfig,
    rounds: int,
    rng: RngStream | None = None,
    bands: float = 4.0,
) -> CheckReport:
    """Monte-Carlo mean of zeta at a frozen z versus the exact gap gradient.

    Also reports the empirical second moments E|zeta_x^i|^2 and
    E|zeta_lambda^i|^2 per player (descriptive only).

    Args:
        game: Game backing the oracles.
        sys: Its KKT system (exact gradient comparator).
        z: Frozen primal-dual point.
        cfg: Supplies sigma, delta and the default seed.
        rounds: Number of independent rounds N (at least 10^4).
        rng: Stream of the draws; defaults to RngStream(cfg.seed).
        bands: Width of the acceptance band in standard errors.
    """
    if rounds < MIN_AUDIT_ROUNDS:
        raise ConfigurationError(f"estimator audit needs at least {MIN_AUDIT_ROUNDS} rounds, got {rounds}")
    rng = rng or RngStream(cfg.seed)
    layout = sys.layout
    vec = z.vector if isinstance(z, PrimalDual) else np.asarray(z, dtype=np.float64)
    x, lam = vec[: layout.dim_x], vec[layout.dim_x :]
    oracles = [player_oracle(game, i) for i in range(game.n)]

    total = np.zeros(sys.size)
    total_sq = np.zeros(sys.size)
    moment_x = np.zeros(game.n)
    moment_lambda = np.zeros(game.n)

    done = 0
    chunk_index = 0
    while done < rounds:
        size = min(AUDIT_CHUNK, rounds - done)
        chunk_index += 1
        draws = draw_round(rng, layout, chunk_index, batch=size)
        rnd = estimator_round(oracles, layout, x, lam, draws, cfg.sigma, cfg.delta)
        zeta = rnd.zeta
        total += zeta.sum(axis=0)
        total_sq += (zeta * zeta).sum(axis=0)
        for i in range(game.n):
            zx = rnd.zeta_x[:, layout.x_indices[i]]
            zl = rnd.zeta_lambda[:, layout.lambda_slices[i]]
            moment_x[i] += float(np.sum(zx * zx))
            moment_lambda[i] += float(np.sum(zl * zl))
        done += size

    mean = total / rounds
    var = np.maximum(total_sq / rounds - mean**2, 0.0) * rounds / (rounds - 1)
    stderr = np.sqrt(var / rounds)
    exact = gap_gradient(sys, vec)

    report = CheckReport(
        check="estimator_unbiasedness",
        details={
            "rounds": rounds,
            "sigma": cfg.sigma,
            "delta": cfg.delta,
            "second_moment_x": [float(v) for v in moment_x / rounds],
            "second_moment_lambda": [float(v) for v in moment_lambda / rounds],
        },
    )
    for k in range(sys.size):
        label = f"dF/dx[{k}]" if k < layout.dim_x else f"dF/dlambda[{k - layout.dim_x}]"
        report.items.append(CheckItem.compare(label, mean[k], exact[k], bands * stderr[k]))
    if not report.passed:
        logger.warning("Estimator audit: %d of %d components outside %.1f stderr", len(report.failures), sys.size, bands)
    return report


# ============================================================================
# Gaussian identities
# ============================================================================


def identity_audit(
    dims: Sequence[tuple[int, int]],
    samples: int,
    rng: RngStream,
    bands: float = 5.0,
) -> CheckReport:
    """Check the four moment identities on every (n, d, j) cell of the grid.

    Vectors a, b, q are drawn at random per cell; q is supported on block i.
    """
    if samples < MIN_IDENTITY_SAMPLES:
        raise ConfigurationError(f"identity audit needs at least {MIN_IDENTITY_SAMPLES} samples, got {samples}")
    report = CheckReport(check="gaussian_identities", details={"samples": samples, "dims": [list(c) for c in dims]})
    for n, d in dims:
        for j in range(n):
            vectors = rng.child(n, d, j, 0).standard_normal((3, n * d))
            a, b, q = vectors
            i = (j + 1) % n
            q[: i * d] = 0.0
            q[(i + 1) * d :] = 0.0
            estimates = gaussian_identity_check(a, b, j, d, n, samples, rng.child(n, d, j, 1), q=q, block_i=i)
            for est in estimates:
                for k, (value, closed, err) in enumerate(zip(est.estimate, est.closed_form, est.stderr, strict=True)):
                    report.items.append(
                        CheckItem.compare(f"{est.name} n={n} d={d} j={j} [{k}]", value, closed, bands * err)
                    )
    return report


# ============================================================================
# Solution oracle
# ============================================================================


@dataclass(frozen=True)
class SolutionOracleResult:
    """Min-norm least-squares solution of G z = -e and the existence verdict."""

    z_bar: PrimalDual
    residual: float
    kernel_dim: int
    threshold: float
    x_pinned: bool

    @property
    def exists(self) -> bool:
        """True iff G z = -e is consistent, i.e. a GNE exists."""
        return self.residual <= self.threshold


def solution_oracle(sys: KktSystem) -> SolutionOracleResult:
    """Solve G z = -e in the min-norm least-squares sense.

    ``x_pinned`` reports whether the kernel of G leaves the x-block
    unchanged, in which case every GNE shares the x of z_bar.
    """
    z = min_norm_least_squares(sys.G, -sys.e)
    residual = float(gap(sys, z))
    kdim = kernel_dimension(sys.G)

    x_pinned = True
    if kdim:
        _, s, vt = np.linalg.svd(sys.G)
        null = vt[s <= rank_tolerance(sys.G, float(s[0]))]
        x_pinned = bool(np.linalg.norm(null[:, : sys.layout.dim_x]) <= 1e-8)

    result = SolutionOracleResult(
        z_bar=PrimalDual.from_vector(sys.layout, z),
        residual=residual,
        kernel_dim=kdim,
        threshold=settings.oracle_threshold(float(sys.e @ sys.e)),
        x_pinned=x_pinned,
    )
    logger.info(
        "Solution oracle: residual=%.3g, kernel_dim=%d, exists=%s", residual, kdim, result.exists
    )
    return result
