"""Tests for the CLI in src/harness/cli.py.

Tests cover:
- validate command
- reformulate command
- solve command (first-order, zero-order, run configs, exit codes)
- audit command
"""

import logging
from collections.abc import Callable, Iterator
from pathlib import Path

import pytest
import yaml
from typer.testing import CliRunner

from src.harness.cli import EXIT_DIVERGED, EXIT_FAILED, EXIT_IO, EXIT_OK, app
from src.solvers import read_trace_csv

runner = CliRunner()

NON_CONVEX = {
    "n": 2,
    "d": 1,
    "players": [
        {"Q": [[-1, 0], [0, 0]], "r": [0, 0]},
        {"Q": [[0, 0], [0, 1]], "r": [0, 0]},
    ],
}


@pytest.fixture(autouse=True)
def reset_logging() -> Iterator[None]:
    """The app callback installs handlers on the captured streams."""
    yield
    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(logging.WARNING)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for var in ("GNE_SEED", "GNE_SEEDS", "GNE_MAX_ITERS", "GNE_TRACE_DIR", "GNE_WORKERS", "GNE_LOG_FILE"):
        monkeypatch.delenv(var, raising=False)


class TestValidateCommand:
    """Test validate command."""

    def test_valid_preset(self) -> None:
        """Bundled game validates."""
        result = runner.invoke(app, ["validate", "paper"])
        assert result.exit_code == EXIT_OK
        assert "2 players" in result.stdout

    def test_invalid_game(self, write_game: Callable[[dict], Path]) -> None:
        """Issues exit 1 and name the kind."""
        result = runner.invoke(app, ["validate", str(write_game(NON_CONVEX))])
        assert result.exit_code == EXIT_FAILED
        assert "convexity" in result.stdout

    def test_missing_file(self, tmp_path: Path) -> None:
        """Unreadable input exits 2."""
        result = runner.invoke(app, ["validate", str(tmp_path / "missing.json")])
        assert result.exit_code == EXIT_IO


class TestReformulateCommand:
    """Test reformulate command."""

    def test_single_player(self) -> None:
        """Prints mu_F = L_F = 8 and the minimizer."""
        result = runner.invoke(app, ["reformulate", "single-player"])
        assert result.exit_code == EXIT_OK
        assert "GNE exists: x = (1)" in result.stdout
        assert "8" in result.stdout

    def test_infeasible(self) -> None:
        """Inconsistent systems are reported, not an error."""
        result = runner.invoke(app, ["reformulate", "infeasible"])
        assert result.exit_code == EXIT_OK
        assert "no GNE" in result.stdout

    def test_non_monotone_diagnosis(self) -> None:
        """The pseudo-gradient verdict is printed."""
        result = runner.invoke(app, ["reformulate", "non-monotone"])
        assert result.exit_code == EXIT_OK
        assert "non-monotone" in result.stdout

    def test_invalid_game(self, write_game: Callable[[dict], Path]) -> None:
        """Games that fail validation exit 1."""
        result = runner.invoke(app, ["reformulate", str(write_game(NON_CONVEX))])
        assert result.exit_code == EXIT_FAILED


class TestSolveCommand:
    """Test solve command."""

    def test_first_order(self, tmp_path: Path) -> None:
        """Writes first-order.csv."""
        result = runner.invoke(
            app, ["solve", "single-player", "--method", "first-order", "--trace-dir", str(tmp_path)]
        )
        assert result.exit_code == EXIT_OK, result.stdout
        columns = read_trace_csv(tmp_path / "first-order.csv")
        assert list(columns["t"]) == [0, 1]

    def test_zero_order_seeds_and_stride(self, tmp_path: Path) -> None:
        """One file per seed; stride 7 over T = 20 keeps 0, 7, 14, 20."""
        args = [
            "solve", "paper", "--seeds", "2", "--seed", "5", "--T", "20",
            "--schedule", "paper-example", "--trace-every", "7", "--trace-dir", str(tmp_path),
        ]
        result = runner.invoke(app, args)
        assert result.exit_code == EXIT_OK, result.stdout
        for seed in (5, 6):
            columns = read_trace_csv(tmp_path / f"zero-order-seed{seed}.csv")
            assert list(columns["t"]) == [0, 7, 14, 20]

    def test_reruns_are_byte_identical(self, tmp_path: Path) -> None:
        """Same seed, same file."""
        texts = []
        for name in ("a", "b"):
            args = [
                "solve", "paper", "--seeds", "1", "--seed", "3", "--T", "15",
                "--schedule", "paper-example", "--trace-dir", str(tmp_path / name),
            ]
            assert runner.invoke(app, args).exit_code == EXIT_OK
            texts.append((tmp_path / name / "zero-order-seed3.csv").read_bytes())
        assert texts[0] == texts[1]

    def test_json_summary(self, tmp_path: Path) -> None:
        """--json prints the summary model."""
        args = [
            "solve", "paper", "--seeds", "1", "--T", "5", "--schedule", "paper-example",
            "--trace-dir", str(tmp_path), "--json",
        ]
        result = runner.invoke(app, args)
        assert result.exit_code == EXIT_OK
        assert '"method": "zero-order"' in result.stdout

    def test_run_config_file(self, tmp_path: Path) -> None:
        """A YAML run document replaces the flags."""
        config = tmp_path / "run.yaml"
        config.write_text(
            yaml.safe_dump(
                {
                    "game": "paper",
                    "method": "zero-order",
                    "params": {"max_iters": 10, "schedule": "paper-example"},
                    "seeds": [11],
                    "trace": {"dir": str(tmp_path / "out"), "every": 1},
                }
            ),
            encoding="utf-8",
        )
        result = runner.invoke(app, ["solve", "--config", str(config)])
        assert result.exit_code == EXIT_OK, result.stdout
        assert (tmp_path / "out" / "zero-order-seed11.csv").exists()

    def test_divergence_exits_3(self, tmp_path: Path) -> None:
        """A diverging first-order run is reported with exit 3."""
        args = ["solve", "paper", "--method", "first-order", "--dual-step", "1000", "--trace-dir", str(tmp_path)]
        result = runner.invoke(app, args)
        assert result.exit_code == EXIT_DIVERGED
        assert "diverged" in result.stdout

    def test_zero_order_divergence_exits_3(self, tmp_path: Path) -> None:
        """A zero-order run whose gap explodes under an oversized global step exits 3."""
        config = tmp_path / "run.yaml"
        config.write_text(
            yaml.safe_dump(
                {
                    "game": "paper",
                    "params": {"max_iters": 20, "schedule": {"kind": "global", "g": 1e8, "t0": 1}},
                    "seeds": [1],
                    "trace": {"dir": str(tmp_path / "out"), "every": 1},
                }
            ),
            encoding="utf-8",
        )
        result = runner.invoke(app, ["solve", "--config", str(config)])
        assert result.exit_code == EXIT_DIVERGED
        assert "diverged" in result.stdout

    def test_first_order_budget_spent_exits_1(self, tmp_path: Path) -> None:
        """A first-order run stopped by --max-iters above stop_gap is not a success."""
        args = ["solve", "paper", "--method", "first-order", "--max-iters", "3", "--trace-dir", str(tmp_path)]
        result = runner.invoke(app, args)
        assert result.exit_code == EXIT_FAILED
        assert "not converged" in result.stdout

    def test_unknown_method(self) -> None:
        """Bad method names are configuration errors."""
        result = runner.invoke(app, ["solve", "paper", "--method", "newton"])
        assert result.exit_code == EXIT_IO

    def test_missing_game(self) -> None:
        """Neither a game nor a config."""
        result = runner.invoke(app, ["solve"])
        assert result.exit_code == EXIT_IO

    def test_unknown_schedule(self, tmp_path: Path) -> None:
        """Only the named preset is accepted on the command line."""
        result = runner.invoke(app, ["solve", "paper", "--schedule", "fast", "--trace-dir", str(tmp_path)])
        assert result.exit_code == EXIT_IO


class TestAuditCommand:
    """Test audit command."""

    def test_oracle_paper(self) -> None:
        """Prints the unique solution."""
        result = runner.invoke(app, ["audit", "oracle", "--game", "paper"])
        assert result.exit_code == EXIT_OK
        assert "x = (1, 2, 3, 4)" in result.stdout

    def test_oracle_infeasible(self) -> None:
        """No GNE exits 1."""
        result = runner.invoke(app, ["audit", "oracle", "--game", "infeasible"])
        assert result.exit_code == EXIT_FAILED
        assert "no GNE" in result.stdout

    def test_fd(self) -> None:
        """Finite differences pass on the bundled game."""
        result = runner.invoke(app, ["audit", "fd", "--points", "3", "--json"])
        assert result.exit_code == EXIT_OK
        assert '"passed": true' in result.stdout

    def test_pl(self) -> None:
        """PL inequality passes on the bundled game."""
        result = runner.invoke(app, ["audit", "pl", "--points", "50"])
        assert result.exit_code == EXIT_OK

    def test_estimator_rejects_few_rounds(self) -> None:
        """Below 10^4 rounds is a configuration error."""
        result = runner.invoke(app, ["audit", "estimator", "--rounds", "100"])
        assert result.exit_code == EXIT_IO

    def test_identities_rejects_few_samples(self) -> None:
        """Below 10^5 samples is a configuration error."""
        result = runner.invoke(app, ["audit", "identities", "--samples", "10"])
        assert result.exit_code == EXIT_IO
