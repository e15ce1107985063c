"""Tests for src/harness: run documents, the seed runner and summaries."""

from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.exceptions import ConfigurationError, GameLoadError, OracleFault
from src.harness import RunConfig, SeedResult, TraceOptions, load_run_config, run_one, run_seeds, summarize
from src.harness.runner import trace_filename
from src.kkt import KktSystem
from src.solvers import PerCoordinateSchedule


class TestRunConfig:
    """Tests for RunConfig."""

    def test_zero_order_needs_seeds(self) -> None:
        """An empty seed list is rejected."""
        with pytest.raises(ValidationError, match="seed"):
            RunConfig(game="paper", method="zero-order")

    def test_params_are_checked(self) -> None:
        """Unknown or invalid solver parameters fail early."""
        with pytest.raises(ValidationError):
            RunConfig(game="paper", method="first-order", params={"step": -1.0})
        with pytest.raises(ValidationError):
            RunConfig(game="paper", seeds=[1], params={"sigma": 0.0})

    def test_preset_schedule_expanded(self, paper_system: KktSystem) -> None:
        """'paper-example' becomes a per-coordinate schedule sized to z."""
        cfg = RunConfig(game="paper", seeds=[4], params={"schedule": "paper-example"})
        zo = cfg.zo_config(4, paper_system)
        assert zo.seed == 4
        assert isinstance(zo.schedule, PerCoordinateSchedule)
        assert len(zo.schedule.rules) == 7

    def test_preset_needs_four_coordinates(self, single_system: KktSystem) -> None:
        """The preset only fits games with a 4-coordinate action."""
        cfg = RunConfig(game="single-player", seeds=[1], params={"schedule": "paper-example"})
        with pytest.raises(ConfigurationError):
            cfg.zo_config(1, single_system)

    def test_reference_length_checked(self) -> None:
        """A reference that is not an n*d vector fails validation."""
        with pytest.raises(ValidationError, match="reference"):
            RunConfig(game="paper", seeds=[1], reference=[1.0, 2.0])
        assert RunConfig(game="paper", seeds=[1], reference=[1.0, 2.0, 3.0, 4.0]).reference is not None

    def test_trace_defaults(self) -> None:
        """Trace options fall back to settings."""
        options = TraceOptions()
        assert options.every >= 1


class TestLoadRunConfig:
    """Tests for load_run_config."""

    def test_yaml_document(self, tmp_path: Path) -> None:
        """Loads a YAML run document."""
        path = tmp_path / "run.yaml"
        path.write_text("game: paper\nmethod: first-order\nparams:\n  max_iters: 5\n", encoding="utf-8")
        cfg = load_run_config(path)
        assert cfg.method == "first-order"
        assert cfg.fo_config().max_iters == 5

    def test_missing(self, tmp_path: Path) -> None:
        """Missing files are load errors."""
        with pytest.raises(GameLoadError):
            load_run_config(tmp_path / "none.yaml")

    def test_parse_error(self, tmp_path: Path) -> None:
        """Malformed YAML is a load error."""
        path = tmp_path / "run.yaml"
        path.write_text("game: [paper\n", encoding="utf-8")
        with pytest.raises(GameLoadError, match="parse error"):
            load_run_config(path)

    def test_schema_error(self, tmp_path: Path) -> None:
        """Schema violations are configuration errors."""
        path = tmp_path / "run.yaml"
        path.write_text("game: paper\nmethod: newton\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_run_config(path)


class TestRunner:
    """Tests for run_one and run_seeds."""

    def test_trace_filename(self) -> None:
        """First-order has one file; zero-order one per seed."""
        assert trace_filename("first-order", None) == "first-order.csv"
        assert trace_filename("zero-order", 7) == "zero-order-seed7.csv"

    def test_first_order_run(self, tmp_path: Path) -> None:
        """A first-order run writes its trace and reports the final gap."""
        cfg = RunConfig(game="single-player", method="first-order", trace=TraceOptions(dir=tmp_path, every=1))
        result = run_one(cfg, None)
        assert result.ok
        assert result.trace_path == tmp_path / "first-order.csv"
        assert result.final_gap == pytest.approx(0.0, abs=1e-20)
        assert result.stop_reason == "stop_gap"

    def test_seeds_in_order(self, tmp_path: Path) -> None:
        """Results follow the seed list."""
        cfg = RunConfig(
            game="paper",
            seeds=[3, 1, 2],
            params={"max_iters": 5, "schedule": "paper-example"},
            trace=TraceOptions(dir=tmp_path, every=1),
            workers=1,
        )
        results = run_seeds(cfg)
        assert [r.seed for r in results] == [3, 1, 2]
        assert all(r.iterations == 5 for r in results)
        assert results[0].final_x_dist is not None

    def test_divergence_reported(self, tmp_path: Path) -> None:
        """Divergence becomes an error string, not an exception."""
        cfg = RunConfig(
            game="paper",
            method="first-order",
            params={"dual_step": 1000.0},
            trace=TraceOptions(dir=tmp_path, every=1),
        )
        with np.errstate(all="ignore"):
            result = run_one(cfg, None)
        assert not result.ok
        assert "DIVERGED" in (result.error or "")

    def test_zero_order_divergence_reported(self, tmp_path: Path) -> None:
        """A zero-order seed whose gap explodes is recorded as diverged; the other seeds still run."""
        cfg = RunConfig(
            game="paper",
            seeds=[1, 2],
            params={"max_iters": 20, "schedule": {"kind": "global", "g": 1e8, "t0": 1}},
            trace=TraceOptions(dir=tmp_path, every=1),
            workers=1,
        )
        results = run_seeds(cfg)
        assert [r.seed for r in results] == [1, 2]
        assert all(r.diverged and r.error_code == "DIVERGED" for r in results)
        assert summarize(results, "zero-order").diverged == [1, 2]

    def test_oracle_fault_reported(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        """An oracle fault is a failed seed, not a crash, and is not counted as divergence."""

        def faulty(*args: object, **kwargs: object) -> None:
            raise OracleFault(1, "cost is nan")

        monkeypatch.setattr("src.harness.runner.solve_zero_order", faulty)
        cfg = RunConfig(game="paper", seeds=[5], trace=TraceOptions(dir=tmp_path, every=1))
        result = run_one(cfg, 5)
        assert not result.ok
        assert result.error_code == "ORACLE_FAULT"
        summary = summarize([result], "zero-order")
        assert summary.faulted == [5]
        assert summary.diverged == []

    def test_first_order_budget_spent(self, tmp_path: Path) -> None:
        """A first-order run that stops above stop_gap is listed as unconverged."""
        cfg = RunConfig(
            game="paper",
            method="first-order",
            params={"max_iters": 3},
            trace=TraceOptions(dir=tmp_path, every=1),
        )
        result = run_one(cfg, None)
        assert result.ok
        assert not result.converged
        assert summarize([result], "first-order").unconverged == [None]


class TestSummarize:
    """Tests for summarize."""

    def _result(self, seed: int, scale: float) -> SeedResult:
        ts = np.arange(0, 10_001, dtype=float)
        gaps = scale * 5.0 / np.maximum(ts, 1.0)
        return SeedResult(
            seed=seed,
            iterations=10_000,
            final_gap=float(gaps[-1]),
            final_x_dist=scale,
            x_dist_at_checkpoint=2 * scale,
            ts=ts,
            gaps=gaps,
        )

    def test_statistics(self) -> None:
        """Median, extremes and the O(1/t) slope."""
        results = [self._result(s, scale) for s, scale in ((1, 1.0), (2, 2.0), (3, 3.0))]
        summary = summarize(results, "zero-order")
        assert summary.runs == 3
        assert summary.diverged == []
        assert summary.x_dist_median == pytest.approx(2.0)
        assert summary.x_dist_min == pytest.approx(1.0)
        assert summary.x_dist_max == pytest.approx(3.0)
        assert summary.x_dist_median_at_checkpoint == pytest.approx(4.0)
        assert summary.mean_gap_slope == pytest.approx(-1.0)

    def test_diverged_seeds_excluded(self) -> None:
        """Failed seeds are listed and left out of the statistics."""
        results = [self._result(1, 1.0), SeedResult(seed=2, error="[DIVERGED] at 3", error_code="DIVERGED")]
        summary = summarize(results, "zero-order")
        assert summary.diverged == [2]
        assert summary.iterations == [10_000]

    def test_short_runs_have_no_slope(self) -> None:
        """Traces that stop before t = 1e4 get no slope."""
        short = SeedResult(seed=1, final_gap=1.0, ts=np.arange(5.0), gaps=np.ones(5))
        assert summarize([short], "zero-order").mean_gap_slope is None
