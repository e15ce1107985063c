"""Exact-gradient descent on the gap function.

With step 1/L_F the PL inequality gives F_{t+1} <= (1 - mu_F / L_F) F_t, so
the iterates converge geometrically to a GNE primal-dual pair.
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, Field

from ..core.exceptions import ConfigurationError, DivergenceError
from ..kkt import KktSystem, PrimalDual, gap, gap_gradient
from ..observability import RunLoggerAdapter
from .trace import Trace, TraceRecord, gap_blew_up

logger = logging.getLogger(__name__)

# Slack on top of the PL bound when max_iters is left to the solver
BUDGET_MARGIN = 0.05
BUDGET_EXTRA = 100


class FoConfig(BaseModel):
    """First-order solver settings."""

    step: float | None = Field(None, gt=0, description="Constant step; None means 1/L_F")
    dual_step: float | None = Field(
        None, gt=0, description="Separate constant step for the duals; None means same as step"
    )
    max_iters: int | None = Field(
        None, ge=0, description="Iteration budget; None means the PL bound for the step, plus a margin"
    )
    stop_gap: float = Field(1e-12, gt=0, description="Stop once F <= stop_gap")


def pl_iteration_bound(f0: float, target: float, mu_f: float, l_f: float) -> int:
    """Iterations that guarantee F <= target from F_0 at step 1/L_F."""
    if f0 <= target:
        return 0
    rate = 1.0 - mu_f / l_f
    if rate <= 0.0:
        return 1
    return math.ceil(math.log(f0 / target) / math.log(1.0 / rate))


def default_budget(sys: KktSystem, f0: float, step: float, stop_gap: float) -> int:
    """PL iteration bound at ``step`` (<= 1/L_F), padded by a small margin.

    For step s <= 1/L_F the gap contracts by at least 1 - mu_F * s per
    iteration, which is the bound with L_F replaced by 1/s.
    """
    bound = pl_iteration_bound(f0, stop_gap, sys.mu_F, 1.0 / step)
    return math.ceil(bound * (1.0 + BUDGET_MARGIN)) + BUDGET_EXTRA


def solve_first_order(
    sys: KktSystem,
    z0: PrimalDual | None = None,
    cfg: FoConfig | None = None,
    run_id: str = "first-order",
) -> tuple[PrimalDual, Trace]:
    """Run z_{t+1} = z_t - step * grad F(z_t) until F <= stop_gap.

    Args:
        sys: Assembled system.
        z0: Starting point; zeros when omitted.
        cfg: Solver settings.
        run_id: Tag stamped on log records.

    Returns:
        Final iterate and the trace (t, F, grad_norm).

    Raises:
        ConfigurationError: If step exceeds 1/L_F.
        DivergenceError: If the gap becomes non-finite or blows up.
    """
    cfg = cfg or FoConfig()
    log = RunLoggerAdapter(logger, run_id)

    step = cfg.step if cfg.step is not None else 1.0 / sys.L_F
    if step > (1.0 / sys.L_F) * (1.0 + 1e-12):
        raise ConfigurationError(f"step {step:.6g} exceeds 1/L_F = {1.0 / sys.L_F:.6g}")
    dual_step = cfg.dual_step if cfg.dual_step is not None else step
    if dual_step > 1.0 / sys.L_F:
        log.warning("dual step %.6g exceeds 1/L_F = %.6g; geometric rate not guaranteed", dual_step, 1.0 / sys.L_F)

    nd = sys.layout.dim_x
    steps = np.full(sys.size, step)
    steps[nd:] = dual_step

    z = (z0 or sys.zeros()).vector
    f = float(gap(sys, z))
    g = gap_gradient(sys, z)
    trace = Trace(kind="first-order")
    trace.append(TraceRecord(t=0, F=f, grad_norm=float(np.linalg.norm(g))))
    f0 = f
    max_iters = cfg.max_iters if cfg.max_iters is not None else default_budget(sys, f0, step, cfg.stop_gap)
    log.info(
        "First-order start: F_0=%.6g, step=%.6g, dual_step=%.6g, max_iters=%d", f, step, dual_step, max_iters
    )

    t = 0
    while f > cfg.stop_gap and t < max_iters:
        z = z - steps * g
        t += 1
        f = float(gap(sys, z))
        if gap_blew_up(f, f0):
            raise DivergenceError(t, f"gap {f:.3g} blew up from F_0 = {f0:.3g} (step too large?)")
        g = gap_gradient(sys, z)
        trace.append(TraceRecord(t=t, F=f, grad_norm=float(np.linalg.norm(g))))

    trace.stop_reason = "stop_gap" if f <= cfg.stop_gap else "max_iters"
    if trace.stop_reason == "max_iters":
        log.warning("First-order budget of %d iterations spent with F=%.6g > %.3g", t, f, cfg.stop_gap)
    else:
        log.info("First-order stop after %d iterations: F=%.6g", t, f)
    return PrimalDual.from_vector(sys.layout, z), trace
