"""Pseudo-gradient monotonicity diagnosis."""

import numpy as np
from pydantic import BaseModel

from ..numerics import symmetric_min_eigenvalue
from .models import QuadraticGame

MONOTONE_TOL = 1e-10


class MonotonicityReport(BaseModel):
    """Smallest eigenvalue of the symmetric part of the pseudo-gradient Jacobian."""

    mu: float
    is_monotone: bool

    @property
    def strongly_monotone(self) -> bool:
        """Monotone with a strictly positive modulus."""
        return self.is_monotone and self.mu > MONOTONE_TOL


def pseudo_gradient_jacobian(game: QuadraticGame) -> np.ndarray:
    """Jacobian of M(x) = [grad_{x^1} J_1, ..., grad_{x^n} J_n] in joint ordering.

    Row k belongs to the player that owns coordinate k.
    """
    jac = np.zeros((game.dim, game.dim))
    for i in range(game.n):
        jac[game.player_indices(i), :] = game.own_gradient_rows(i)
    return jac


def pseudo_gradient_monotonicity(game: QuadraticGame) -> MonotonicityReport:
    """Monotonicity modulus of the (affine) pseudo-gradient.

    Args:
        game: Validated game.

    Returns:
        Report with mu = lambda_min of the symmetric Jacobian part.
    """
    jac = pseudo_gradient_jacobian(game)
    mu = symmetric_min_eigenvalue(jac)
    scale = max(1.0, float(np.max(np.abs(jac))))
    return MonotonicityReport(mu=mu, is_monotone=mu >= -MONOTONE_TOL * scale)
