"""Value oracles: the only view of the game a zero-order player gets.

All evaluations accept either a single joint action of shape (nd,) or a
batch of shape (..., nd); batched calls return one value per leading index.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike

from ..core.exceptions import DimensionMismatchError
from .models import PlayerData, QuadraticGame


def _check_action(x: np.ndarray, dim: int, operation: str) -> None:
    if x.ndim == 0 or x.shape[-1] != dim:
        raise DimensionMismatchError(operation, f"trailing dimension {dim}", x.shape)


def _cost(p: PlayerData, x: np.ndarray) -> np.ndarray | float:
    value = 0.5 * np.einsum("...i,ij,...j->...", x, p.Q, x) + x @ p.r + p.k
    return float(value) if np.ndim(value) == 0 else value


def _residual(p: PlayerData, x: np.ndarray) -> np.ndarray:
    return x @ p.A.T - p.b


def eval_cost(game: QuadraticGame, i: int, x: ArrayLike) -> np.ndarray | float:
    """J_i(x) = 1/2 x^T Q_i x + r_i^T x + k_i.

    Raises:
        DimensionMismatchError: If x does not have trailing dimension n*d.
    """
    x = np.asarray(x, dtype=np.float64)
    _check_action(x, game.dim, "eval_cost")
    return _cost(game.players[i], x)


def eval_residual(game: QuadraticGame, i: int, x: ArrayLike) -> np.ndarray:
    """A_i x - b_i, of length m_i.

    Raises:
        DimensionMismatchError: If x does not have trailing dimension n*d.
    """
    x = np.asarray(x, dtype=np.float64)
    _check_action(x, game.dim, "eval_residual")
    return _residual(game.players[i], x)


class PlayerOracle:
    """Query handle for one player.

    Exposes exactly two queries, the local cost value and the local
    constraint residual at a joint action. The game matrices live only in
    the closures and are not reachable as attributes.
    """

    __slots__ = ("index", "dim", "m", "_cost", "_residual")

    def __init__(
        self,
        index: int,
        dim: int,
        m: int,
        cost: Callable[[np.ndarray], np.ndarray | float],
        residual: Callable[[np.ndarray], np.ndarray],
    ) -> None:
        self.index = index
        self.dim = dim
        self.m = m
        self._cost = cost
        self._residual = residual

    def cost(self, x: ArrayLike) -> np.ndarray | float:
        """Observed J_i at a query point (or batch of query points)."""
        x = np.asarray(x, dtype=np.float64)
        _check_action(x, self.dim, f"player {self.index} cost query")
        return self._cost(x)

    def residual(self, x: ArrayLike) -> np.ndarray:
        """Observed A_i x - b_i at a query point (or batch)."""
        x = np.asarray(x, dtype=np.float64)
        _check_action(x, self.dim, f"player {self.index} residual query")
        return self._residual(x)

    def __repr__(self) -> str:
        return f"PlayerOracle(index={self.index}, dim={self.dim}, m={self.m})"


def player_oracle(game: QuadraticGame, i: int) -> PlayerOracle:
    """Build the restricted oracle of player i."""
    p = game.players[i]
    return PlayerOracle(
        index=i,
        dim=game.dim,
        m=p.m,
        cost=lambda x: _cost(p, x),
        residual=lambda x: _residual(p, x),
    )


def eval_lagrangian(
    oracle: PlayerOracle, x: ArrayLike, lambda_i: ArrayLike
) -> np.ndarray | float:
    """L_i(x, lambda_i) = J_i(x) + <lambda_i, A_i x - b_i>, through the oracle only.

    ``lambda_i`` may carry the same leading batch shape as ``x``.

    Raises:
        DimensionMismatchError: If lambda_i does not have trailing dimension m_i.
    """
    lam = np.asarray(lambda_i, dtype=np.float64)
    if lam.ndim == 0 or lam.shape[-1] != oracle.m:
        raise DimensionMismatchError("eval_lagrangian", f"lambda of length {oracle.m}", lam.shape)
    residual = oracle.residual(x)
    value = oracle.cost(x) + np.sum(lam * residual, axis=-1)
    return float(value) if np.ndim(value) == 0 else value
