"""GNE certification of a primal-dual candidate."""

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, Field

from ..config import settings
from .system import KktSystem, PrimalDual, gap, kkt_residual


class GneCertificate(BaseModel):
    """Per-player KKT residuals and the accept/reject verdict."""

    gap: float
    tol: float
    accepted: bool
    stationarity_norms: list[float] = Field(
        ..., description="|H_i x + r_i^i + A_i(i,:)^T lambda^i| per player"
    )
    residual_norms: list[float] = Field(..., description="|A_i x - b_i| per player")


def default_tolerance(sys: KktSystem) -> float:
    """Configured certification tolerance scaled by 1 + |e|^2."""
    return settings.certification_tolerance(float(sys.e @ sys.e))


def certify_gne(
    sys: KktSystem, z: PrimalDual | ArrayLike, tol: float | None = None
) -> GneCertificate:
    """Accept z as a GNE primal-dual pair iff F(z) <= tol.

    Args:
        sys: Assembled system.
        z: Candidate [x, lambda].
        tol: Gap tolerance; defaults to :func:`default_tolerance`.

    Returns:
        Certificate with the gap and per-player norms.
    """
    if tol is None:
        tol = default_tolerance(sys)
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    res = kkt_residual(sys, z)
    n = sys.layout.n
    stationarity = [float(np.linalg.norm(res[sys.stationarity_rows(i)])) for i in range(n)]
    feasibility = [float(np.linalg.norm(res[sys.feasibility_rows(i)])) for i in range(n)]
    value = float(gap(sys, z))
    return GneCertificate(
        gap=value,
        tol=tol,
        accepted=value <= tol,
        stationarity_norms=stationarity,
        residual_norms=feasibility,
    )
