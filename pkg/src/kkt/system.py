"""KKT reformulation: F(z) = |G z + e|^2 and its exact derivatives.

Row layout of G (and e):

    rows [i*d, (i+1)*d)       stationarity of player i: H_i x + r_i^i + A_i(i,:)^T lambda^i
    rows nd + lambda_slice(i)  feasibility of player i:  A_i x - b_i

Column layout: the joint action x (nd entries, in the game's joint ordering)
followed by the stacked duals [lambda^1, ..., lambda^n].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..core.exceptions import DimensionMismatchError
from ..game import QuadraticGame, require_valid
from ..numerics import DenseMatrix, DenseVector, singular_values_extreme

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockLayout:
    """Where each player's primal and dual entries live inside z."""

    n: int
    d: int
    x_indices: tuple[np.ndarray, ...]
    lambda_slices: tuple[slice, ...]

    @property
    def dim_x(self) -> int:
        return self.n * self.d

    @property
    def dim_lambda(self) -> int:
        return self.lambda_slices[-1].stop if self.lambda_slices else 0

    @property
    def size(self) -> int:
        return self.dim_x + self.dim_lambda

    def m_i(self, i: int) -> int:
        s = self.lambda_slices[i]
        return s.stop - s.start

    @classmethod
    def from_game(cls, game: QuadraticGame) -> BlockLayout:
        return cls(
            n=game.n,
            d=game.d,
            x_indices=tuple(game.player_indices(i) for i in range(game.n)),
            lambda_slices=tuple(game.lambda_slice(i) for i in range(game.n)),
        )


@dataclass
class PrimalDual:
    """z = [x, lambda] with per-player block views."""

    x: DenseVector
    lam: DenseVector
    layout: BlockLayout

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=np.float64)
        self.lam = np.asarray(self.lam, dtype=np.float64)
        if self.x.shape != (self.layout.dim_x,):
            raise DimensionMismatchError("PrimalDual.x", (self.layout.dim_x,), self.x.shape)
        if self.lam.shape != (self.layout.dim_lambda,):
            raise DimensionMismatchError("PrimalDual.lam", (self.layout.dim_lambda,), self.lam.shape)

    def x_block(self, i: int) -> DenseVector:
        """x^i (a copy)."""
        return self.x[self.layout.x_indices[i]]

    def lambda_block(self, i: int) -> DenseVector:
        """lambda^i (a copy)."""
        return self.lam[self.layout.lambda_slices[i]]

    @property
    def vector(self) -> DenseVector:
        """Concatenated [x, lambda]."""
        return np.concatenate([self.x, self.lam])

    def copy(self) -> PrimalDual:
        return PrimalDual(self.x.copy(), self.lam.copy(), self.layout)

    @classmethod
    def zeros(cls, layout: BlockLayout) -> PrimalDual:
        return cls(np.zeros(layout.dim_x), np.zeros(layout.dim_lambda), layout)

    @classmethod
    def from_vector(cls, layout: BlockLayout, v: ArrayLike) -> PrimalDual:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (layout.size,):
            raise DimensionMismatchError("PrimalDual.from_vector", (layout.size,), v.shape)
        return cls(v[: layout.dim_x].copy(), v[layout.dim_x :].copy(), layout)


@dataclass(frozen=True)
class KktSystem:
    """Assembled reformulation of a game."""

    G: DenseMatrix
    e: DenseVector
    h_blocks: tuple[DenseMatrix, ...]
    layout: BlockLayout
    sigma_max: float
    sigma_min_positive: float

    @property
    def mu_F(self) -> float:
        """PL constant 2 * sigma_min_positive(G)^2."""
        return 2.0 * self.sigma_min_positive**2

    @property
    def L_F(self) -> float:
        """Gradient Lipschitz constant 2 * sigma_max(G)^2."""
        return 2.0 * self.sigma_max**2

    @property
    def size(self) -> int:
        return self.layout.size

    def stationarity_rows(self, i: int) -> slice:
        d = self.layout.d
        return slice(i * d, (i + 1) * d)

    def feasibility_rows(self, i: int) -> slice:
        s = self.layout.lambda_slices[i]
        off = self.layout.dim_x
        return slice(off + s.start, off + s.stop)

    def zeros(self) -> PrimalDual:
        return PrimalDual.zeros(self.layout)


# ============================================================================
# Assembly
# ============================================================================


def build_h_blocks(game: QuadraticGame) -> list[DenseMatrix]:
    """H_i: rows of 1/2 (Q_i + Q_i^T) at player i's coordinates (d x nd each)."""
    return [game.own_gradient_rows(i) for i in range(game.n)]


def assemble(game: QuadraticGame) -> KktSystem:
    """Build G, e and the constants mu_F, L_F.

    Args:
        game: Game to reformulate; it is validated first.

    Returns:
        Immutable KktSystem.

    Raises:
        InvalidGameError: If the game fails validation.
        ZeroMatrixError: If G is numerically zero.
    """
    require_valid(game)
    layout = BlockLayout.from_game(game)
    nd, size = layout.dim_x, layout.size
    d = game.d

    h_blocks = build_h_blocks(game)
    G = np.zeros((size, size))
    e = np.zeros(size)
    for i, p in enumerate(game.players):
        idx = layout.x_indices[i]
        rows = slice(i * d, (i + 1) * d)
        lam = layout.lambda_slices[i]
        G[rows, :nd] = h_blocks[i]
        G[rows, nd + lam.start : nd + lam.stop] = game.own_constraint_columns(i).T
        e[rows] = p.r[idx]
        G[nd + lam.start : nd + lam.stop, :nd] = p.A
        e[nd + lam.start : nd + lam.stop] = -p.b

    sigma_max, sigma_min = singular_values_extreme(G)
    system = KktSystem(
        G=G,
        e=e,
        h_blocks=tuple(h_blocks),
        layout=layout,
        sigma_max=sigma_max,
        sigma_min_positive=sigma_min,
    )
    logger.info(
        "Assembled KKT system for %s: size=%d, mu_F=%.6g, L_F=%.6g",
        game.name,
        size,
        system.mu_F,
        system.L_F,
    )
    return system


# ============================================================================
# Evaluation
# ============================================================================


def _as_z(sys: KktSystem, z: PrimalDual | ArrayLike) -> np.ndarray:
    v = z.vector if isinstance(z, PrimalDual) else np.asarray(z, dtype=np.float64)
    if v.ndim == 0 or v.shape[-1] != sys.size:
        raise DimensionMismatchError("KKT evaluation", f"trailing dimension {sys.size}", v.shape)
    return v


def kkt_residual(sys: KktSystem, z: PrimalDual | ArrayLike) -> np.ndarray:
    """G z + e (batched over leading axes)."""
    return _as_z(sys, z) @ sys.G.T + sys.e


def gap(sys: KktSystem, z: PrimalDual | ArrayLike) -> np.ndarray | float:
    """F(z) = |G z + e|^2; zero exactly at KKT points."""
    res = kkt_residual(sys, z)
    value = np.einsum("...i,...i->...", res, res)
    return float(value) if np.ndim(value) == 0 else value


def gap_gradient(sys: KktSystem, z: PrimalDual | ArrayLike) -> np.ndarray:
    """grad F(z) = 2 G^T (G z + e)."""
    return 2.0 * kkt_residual(sys, z) @ sys.G


def gap_partials(
    sys: KktSystem, z: PrimalDual | ArrayLike, i: int
) -> tuple[DenseVector, DenseVector]:
    """Player i's blocks of the gap gradient.

    Returns:
        Tuple (dF/dx^i of length d, dF/dlambda^i of length m_i).

    Raises:
        IndexError: If i is not a player index.
    """
    if not 0 <= i < sys.layout.n:
        raise IndexError(f"player index {i} out of range [0, {sys.layout.n})")
    grad = gap_gradient(sys, z)
    nd = sys.layout.dim_x
    lam = sys.layout.lambda_slices[i]
    return grad[..., sys.layout.x_indices[i]], grad[..., nd + lam.start : nd + lam.stop]


def local_terms(sys: KktSystem, z: PrimalDual | ArrayLike, i: int) -> tuple[float, float]:
    """f_i = h_i + c_i split into stationarity and feasibility parts.

    h_i = |H_i x + r_i^i + A_i(i,:)^T lambda^i|^2 and c_i = |A_i x - b_i|^2;
    summing both over all players gives F.
    """
    res = kkt_residual(sys, z)
    s = res[..., sys.stationarity_rows(i)]
    c = res[..., sys.feasibility_rows(i)]
    return float(np.sum(s * s)), float(np.sum(c * c))


def local_gradient_x(sys: KktSystem, z: PrimalDual | ArrayLike, i: int, j: int) -> DenseVector:
    """grad_{x^i} h_j = 2 (H_j^{(:,i)})^T grad_{x^j} L_j."""
    res = kkt_residual(sys, z)
    s_j = res[sys.stationarity_rows(j)]
    h_ji = sys.h_blocks[j][:, sys.layout.x_indices[i]]
    return 2.0 * h_ji.T @ s_j
