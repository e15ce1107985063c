"""Game documents and the in-memory quadratic game.

The pydantic models mirror the JSON/YAML game document; ``QuadraticGame`` is
the immutable numeric form every other module works with.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..numerics import DenseMatrix, DenseVector

Layout = Literal["player-major", "coordinate-major"]

# ============================================================================
# Documents
# ============================================================================


def _rectangular(rows: list[list[float]], name: str) -> list[list[float]]:
    widths = {len(row) for row in rows}
    if len(widths) > 1:
        raise ValueError(f"{name} rows have different lengths: {sorted(widths)}")
    return rows


class PlayerDocument(BaseModel):
    """One player's cost and constraint data."""

    Q: list[list[float]] = Field(..., description="Cost Hessian (nd x nd, row-major)")
    r: list[float] = Field(..., description="Linear cost term (nd)")
    k: float = Field(0.0, description="Constant cost term")
    A: list[list[float]] = Field(
        default_factory=list, description="Constraint matrix (m_i x nd); empty for none"
    )
    b: list[float] = Field(default_factory=list, description="Constraint right-hand side (m_i)")

    @field_validator("Q", "A")
    @classmethod
    def validate_rectangular(cls, v: list[list[float]], info) -> list[list[float]]:
        """Reject ragged nested arrays."""
        return _rectangular(v, info.field_name)


class ReferenceDocument(BaseModel):
    """Known solution shipped with a game, used for distance traces."""

    x: list[float] = Field(..., description="Reference joint action")
    lambda_: list[float] | None = Field(None, alias="lambda", description="Reference duals")

    model_config = {"populate_by_name": True}


class GameDocument(BaseModel):
    """Complete game document."""

    name: str = Field("game", description="Human-readable game name")
    description: str = Field("", description="Free-form description")
    n: int = Field(..., ge=1, description="Number of players")
    d: int = Field(..., ge=1, description="Per-player action dimension")
    layout: Layout = Field(
        "player-major",
        description="Which joint coordinates each player owns",
    )
    players: list[PlayerDocument] = Field(..., description="Per-player data")
    reference: ReferenceDocument | None = Field(None, description="Known GNE, optional")

    @model_validator(mode="after")
    def validate_player_count(self) -> GameDocument:
        """Ensure one entry per player."""
        if len(self.players) != self.n:
            raise ValueError(f"expected {self.n} players, got {len(self.players)}")
        return self

    @model_validator(mode="after")
    def validate_reference_length(self) -> GameDocument:
        """A reference holds one entry per joint coordinate and per multiplier."""
        if self.reference is None:
            return self
        if len(self.reference.x) != self.n * self.d:
            raise ValueError(f"reference x has {len(self.reference.x)} entries, expected n*d = {self.n * self.d}")
        m = sum(len(p.b) for p in self.players)
        if self.reference.lambda_ is not None and len(self.reference.lambda_) != m:
            raise ValueError(f"reference lambda has {len(self.reference.lambda_)} entries, expected {m}")
        return self


# ============================================================================
# Numeric game
# ============================================================================


@dataclass(frozen=True)
class PlayerData:
    """Cost J_i(x) = 1/2 x^T Q x + r^T x + k and constraints A x = b."""

    Q: DenseMatrix
    r: DenseVector
    k: float
    A: DenseMatrix
    b: DenseVector

    @property
    def m(self) -> int:
        """Number of equality constraints of this player."""
        return int(self.A.shape[0])


def player_indices_for(layout: Layout, n: int, d: int, i: int) -> np.ndarray:
    """Joint coordinates owned by player i under a layout."""
    if layout == "player-major":
        return np.arange(i * d, (i + 1) * d)
    return np.arange(d) * n + i


@dataclass(frozen=True)
class QuadraticGame:
    """Quadratic game with individual linear equality constraints.

    Immutable after construction; dimensions are not checked here, see
    :func:`src.game.validation.validate`.
    """

    n: int
    d: int
    players: tuple[PlayerData, ...]
    layout: Layout = "player-major"
    name: str = "game"
    reference_x: DenseVector | None = field(default=None, compare=False)
    reference_lambda: DenseVector | None = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        """Joint action dimension n*d."""
        return self.n * self.d

    @property
    def m_sizes(self) -> tuple[int, ...]:
        """Constraint count per player."""
        return tuple(p.m for p in self.players)

    @property
    def m(self) -> int:
        """Total number of constraints."""
        return sum(self.m_sizes)

    def player_indices(self, i: int) -> np.ndarray:
        """Joint coordinates owned by player i."""
        if not 0 <= i < self.n:
            raise IndexError(f"player index {i} out of range [0, {self.n})")
        return player_indices_for(self.layout, self.n, self.d, i)

    def lambda_slice(self, i: int) -> slice:
        """Position of player i's duals inside the stacked dual vector."""
        start = sum(self.m_sizes[:i])
        return slice(start, start + self.m_sizes[i])

    def own_gradient_rows(self, i: int) -> DenseMatrix:
        """H_i: rows of 1/2 (Q_i + Q_i^T) at player i's coordinates (d x nd)."""
        q = self.players[i].Q
        return 0.5 * (q + q.T)[self.player_indices(i), :]

    def own_constraint_columns(self, i: int) -> DenseMatrix:
        """Columns of A_i at player i's coordinates (m_i x d)."""
        return self.players[i].A[:, self.player_indices(i)]


def game_from_document(doc: GameDocument, sym_tol: float = 1e-12) -> QuadraticGame:
    """Convert a parsed document into a QuadraticGame.

    Q matrices whose asymmetry is within ``sym_tol`` (relative) are
    symmetrized; larger asymmetry is kept so validation reports it.
    """
    dim = doc.n * doc.d
    players = []
    for p in doc.players:
        q = np.asarray(p.Q, dtype=np.float64)
        if q.ndim == 2 and q.shape[0] == q.shape[1]:
            scale = max(1.0, float(np.max(np.abs(q)))) if q.size else 1.0
            if np.max(np.abs(q - q.T), initial=0.0) <= sym_tol * scale:
                q = 0.5 * (q + q.T)
        # An unconstrained player still gets a (0 x nd) matrix
        a = np.asarray(p.A, dtype=np.float64) if p.A else np.zeros((0, dim))
        players.append(
            PlayerData(
                Q=q,
                r=np.asarray(p.r, dtype=np.float64),
                k=float(p.k),
                A=a,
                b=np.asarray(p.b, dtype=np.float64),
            )
        )

    ref_x = ref_l = None
    if doc.reference is not None:
        ref_x = np.asarray(doc.reference.x, dtype=np.float64)
        if doc.reference.lambda_ is not None:
            ref_l = np.asarray(doc.reference.lambda_, dtype=np.float64)

    return QuadraticGame(
        n=doc.n,
        d=doc.d,
        players=tuple(players),
        layout=doc.layout,
        name=doc.name,
        reference_x=ref_x,
        reference_lambda=ref_l,
    )
