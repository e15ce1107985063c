"""Structural checks for quadratic games.

``validate`` never raises: every problem becomes a ValidationIssue naming the
player it belongs to.
"""

from typing import Literal

import numpy as np
from pydantic import BaseModel, Field

from ..core.exceptions import InvalidGameError
from .models import QuadraticGame

SYMMETRY_TOL = 1e-12
CONVEXITY_TOL = 1e-10

IssueKind = Literal["count", "dimension", "finite", "symmetry", "convexity"]


class ValidationIssue(BaseModel):
    """A single violated requirement."""

    player: int | None = Field(None, description="Player index, None for game-level issues")
    kind: IssueKind
    message: str

    def __str__(self) -> str:
        where = "game" if self.player is None else f"player {self.player}"
        return f"{where}: {self.kind}: {self.message}"


class ValidationReport(BaseModel):
    """Outcome of :func:`validate`."""

    issues: list[ValidationIssue] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        """True when no issue was found."""
        return not self.issues

    def players_with(self, kind: IssueKind) -> set[int | None]:
        """Players that have at least one issue of the given kind."""
        return {issue.player for issue in self.issues if issue.kind == kind}


def _scale(q: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(q)))) if q.size else 1.0


def validate(game: QuadraticGame) -> ValidationReport:
    """Check dimensions, finiteness, symmetry and own-block convexity.

    Args:
        game: Game to check.

    Returns:
        Report listing every violation.
    """
    report = ValidationReport()
    add = report.issues.append

    if game.n < 1 or game.d < 1:
        add(ValidationIssue(kind="count", message=f"need n >= 1 and d >= 1, got n={game.n}, d={game.d}"))
        return report
    if len(game.players) != game.n:
        add(ValidationIssue(kind="count", message=f"expected {game.n} players, got {len(game.players)}"))
        return report

    dim = game.dim
    for i, p in enumerate(game.players):
        shapes_ok = True
        if p.Q.shape != (dim, dim):
            add(ValidationIssue(player=i, kind="dimension", message=f"Q has shape {p.Q.shape}, expected ({dim}, {dim})"))
            shapes_ok = False
        if p.r.shape != (dim,):
            add(ValidationIssue(player=i, kind="dimension", message=f"r has shape {p.r.shape}, expected ({dim},)"))
        if p.A.ndim != 2 or p.A.shape[1] != dim:
            add(ValidationIssue(player=i, kind="dimension", message=f"A has shape {p.A.shape}, expected (m_i, {dim})"))
        elif p.b.shape != (p.A.shape[0],):
            add(ValidationIssue(player=i, kind="dimension", message=f"b has shape {p.b.shape}, expected ({p.A.shape[0]},)"))

        arrays = {"Q": p.Q, "r": p.r, "A": p.A, "b": p.b}
        for name, arr in arrays.items():
            if not np.all(np.isfinite(arr)):
                add(ValidationIssue(player=i, kind="finite", message=f"{name} has non-finite entries"))
        if not np.isfinite(p.k):
            add(ValidationIssue(player=i, kind="finite", message="k is not finite"))

        if not shapes_ok or not np.all(np.isfinite(p.Q)):
            continue

        scale = _scale(p.Q)
        asym = float(np.max(np.abs(p.Q - p.Q.T)))
        if asym > SYMMETRY_TOL * scale:
            add(ValidationIssue(player=i, kind="symmetry", message=f"Q is asymmetric (max |Q - Q^T| = {asym:.3g})"))

        idx = game.player_indices(i)
        sym = 0.5 * (p.Q + p.Q.T)
        own = sym[np.ix_(idx, idx)]
        lam_min = float(np.linalg.eigvalsh(own)[0])
        if lam_min < -CONVEXITY_TOL * scale:
            add(
                ValidationIssue(
                    player=i,
                    kind="convexity",
                    message=f"own block of Q is not positive semidefinite (min eigenvalue {lam_min:.6g})",
                )
            )

    return report


def require_valid(game: QuadraticGame) -> None:
    """Raise InvalidGameError unless the game validates.

    Raises:
        InvalidGameError: If :func:`validate` reports any issue.
    """
    report = validate(game)
    if not report.valid:
        raise InvalidGameError([str(issue) for issue in report.issues])
