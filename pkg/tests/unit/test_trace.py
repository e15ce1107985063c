"""Tests for src/solvers/trace.py."""

from pathlib import Path

import numpy as np
import pytest

from src.solvers import Trace, TraceRecord, format_float, loglog_slope, read_trace_csv


def _zero_order_trace(t_max: int) -> Trace:
    trace = Trace(kind="zero-order")
    trace.append(TraceRecord(t=0, F=30.0, x_dist=np.sqrt(30.0), lambda_norm=0.0))
    for t in range(1, t_max + 1):
        trace.append(TraceRecord(t=t, F=1.0 / t, gamma_ref=0.1 / t, x_dist=2.0 / t, lambda_norm=0.5))
    return trace


class TestFormatFloat:
    """Tests for format_float."""

    def test_round_trips_exactly(self) -> None:
        """17 significant digits recover the double."""
        value = 0.1 + 0.2
        assert float(format_float(value)) == value

    def test_missing_is_empty(self) -> None:
        """None renders as an empty cell."""
        assert format_float(None) == ""


class TestTrace:
    """Tests for Trace."""

    def test_columns_by_kind(self) -> None:
        """Each solver has its own header."""
        assert Trace(kind="first-order").columns == ("t", "F", "grad_norm")
        assert Trace(kind="zero-order").columns == ("t", "gamma_ref", "F", "x_dist", "lambda_norm")

    def test_iterations_and_lookup(self) -> None:
        """iterations is the last t; at() finds kept rows."""
        trace = _zero_order_trace(10)
        assert trace.iterations == 10
        assert trace.at(4).F == pytest.approx(0.25)
        assert trace.at(11) is None

    def test_column_missing_as_nan(self) -> None:
        """The initial row has no step."""
        gammas = _zero_order_trace(3).column("gamma_ref")
        assert np.isnan(gammas[0])
        assert gammas[1] == pytest.approx(0.1)

    def test_subsample_keeps_final_row(self) -> None:
        """every = 7 over t = 0..20 keeps 0, 7, 14 and 20."""
        rows = _zero_order_trace(20).subsample(7)
        assert [r.t for r in rows] == [0, 7, 14, 20]

    def test_subsample_final_not_duplicated(self) -> None:
        """A final row on the grid appears once."""
        rows = _zero_order_trace(21).subsample(7)
        assert [r.t for r in rows] == [0, 7, 14, 21]

    def test_subsample_rejects_zero(self) -> None:
        """every must be positive."""
        with pytest.raises(ValueError):
            _zero_order_trace(3).subsample(0)

    def test_csv_text(self) -> None:
        """Header, empty initial step and LF endings."""
        text = _zero_order_trace(2).to_csv()
        lines = text.split("\n")
        assert lines[0] == "t,gamma_ref,F,x_dist,lambda_norm"
        assert lines[1].startswith("0,,30,")
        assert "\r" not in text
        assert text.endswith("\n")

    def test_write_and_read(self, tmp_path: Path) -> None:
        """Written files load back into column arrays."""
        path = _zero_order_trace(5).write_csv(tmp_path / "traces" / "run.csv")
        columns = read_trace_csv(path)
        assert list(columns["t"]) == [0, 1, 2, 3, 4, 5]
        assert columns["F"][5] == 0.2
        assert np.isnan(columns["gamma_ref"][0])


class TestLoglogSlope:
    """Tests for loglog_slope."""

    def test_inverse_t(self) -> None:
        """5/t has slope -1."""
        ts = np.arange(1, 10_001, dtype=float)
        assert loglog_slope(ts, 5.0 / ts, 1e3, 1e4) == pytest.approx(-1.0)

    def test_skips_non_positive(self) -> None:
        """Zeros and NaN inside the window are ignored."""
        ts = np.array([10.0, 20.0, 40.0, 80.0])
        values = np.array([1.0, 0.0, np.nan, 1.0 / 8.0])
        assert loglog_slope(ts, values, 1, 100) == pytest.approx(-1.0)

    def test_too_few_samples(self) -> None:
        """One usable sample is not enough."""
        with pytest.raises(ValueError):
            loglog_slope(np.array([1.0, 2.0]), np.array([1.0, 0.5]), 2, 3)
