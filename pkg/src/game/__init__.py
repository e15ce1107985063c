"""Quadratic games, their validation and the players' value oracles."""

from .loader import FIXTURES_DIR, PRESETS, GameLoader, load_game, resolve_game_path
from .models import (
    GameDocument,
    Layout,
    PlayerData,
    PlayerDocument,
    QuadraticGame,
    game_from_document,
    player_indices_for,
)
from .monotonicity import (
    MonotonicityReport,
    pseudo_gradient_jacobian,
    pseudo_gradient_monotonicity,
)
from .oracle import (
    PlayerOracle,
    eval_cost,
    eval_lagrangian,
    eval_residual,
    player_oracle,
)
from .validation import ValidationIssue, ValidationReport, require_valid, validate

__all__ = [
    "FIXTURES_DIR",
    "PRESETS",
    "GameDocument",
    "GameLoader",
    "Layout",
    "MonotonicityReport",
    "PlayerData",
    "PlayerDocument",
    "PlayerOracle",
    "QuadraticGame",
    "ValidationIssue",
    "ValidationReport",
    "eval_cost",
    "eval_lagrangian",
    "eval_residual",
    "game_from_document",
    "load_game",
    "player_indices_for",
    "player_oracle",
    "pseudo_gradient_jacobian",
    "pseudo_gradient_monotonicity",
    "require_valid",
    "resolve_game_path",
    "validate",
]
