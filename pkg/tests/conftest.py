"""Shared pytest fixtures for the test suite.

Provides the bundled games, their assembled KKT systems and a helper for
writing ad-hoc game documents.
"""

# Add project root to path
import json
import sys
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.game import QuadraticGame, load_game  # noqa: E402
from src.kkt import KktSystem, assemble  # noqa: E402
from src.numerics import RngStream  # noqa: E402

PAPER_X = np.array([1.0, 2.0, 3.0, 4.0])


@pytest.fixture
def paper_game() -> QuadraticGame:
    """Two-player example, coordinate-major, GNE at x = (1, 2, 3, 4)."""
    return load_game("paper")


@pytest.fixture
def paper_player_major() -> QuadraticGame:
    """Same matrices with contiguous per-player blocks."""
    return load_game("paper-player-major")


@pytest.fixture
def single_player() -> QuadraticGame:
    """J(x) = x^2 - 2x, unconstrained."""
    return load_game("single-player")


@pytest.fixture
def infeasible_game() -> QuadraticGame:
    """One scalar player with x = 0 and x = 1."""
    return load_game("infeasible")


@pytest.fixture
def non_monotone_game() -> QuadraticGame:
    """Scalar two-player game with pseudo-gradient Jacobian [[1, 3], [3, 1]]."""
    return load_game("non-monotone")


@pytest.fixture
def paper_system(paper_game: QuadraticGame) -> KktSystem:
    return assemble(paper_game)


@pytest.fixture
def single_system(single_player: QuadraticGame) -> KktSystem:
    return assemble(single_player)


@pytest.fixture
def infeasible_system(infeasible_game: QuadraticGame) -> KktSystem:
    return assemble(infeasible_game)


@pytest.fixture
def rng() -> RngStream:
    """Fixed-seed stream for tests."""
    return RngStream(1234)


@pytest.fixture
def write_game(tmp_path: Path) -> Callable[[dict], Path]:
    """Write a game document to a temporary JSON file.

    Returns:
        Function taking the document dict and returning its path.
    """
    counter = {"n": 0}

    def _write(document: dict) -> Path:
        counter["n"] += 1
        path = tmp_path / f"game_{counter['n']}.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write
