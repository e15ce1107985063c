"""Per-iteration solver traces and their CSV form."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

TraceKind = Literal["first-order", "zero-order"]

COLUMNS: dict[TraceKind, tuple[str, ...]] = {
    "first-order": ("t", "F", "grad_norm"),
    "zero-order": ("t", "gamma_ref", "F", "x_dist", "lambda_norm"),
}


# A gap above this multiple of (1 + F_0) counts as divergence.
DIVERGENCE_FACTOR = 1e12


def gap_blew_up(f: float, f0: float, factor: float = DIVERGENCE_FACTOR) -> bool:
    """True when F is non-finite or above factor * (1 + F_0)."""
    return not math.isfinite(f) or f > factor * (1.0 + f0)


def format_float(value: float | None) -> str:
    """17 significant digits, empty for missing values."""
    if value is None:
        return ""
    return f"{value:.17g}"


@dataclass(frozen=True)
class TraceRecord:
    """State after iteration t (t = 0 is the initial point)."""

    t: int
    F: float
    gamma_ref: float | None = None
    grad_norm: float | None = None
    x_dist: float | None = None
    lambda_norm: float | None = None

    def cells(self, columns: tuple[str, ...]) -> list[str]:
        out = []
        for name in columns:
            value = getattr(self, name)
            out.append(str(value) if name == "t" else format_float(value))
        return out


@dataclass
class Trace:
    """Ordered records of one solver run."""

    kind: TraceKind
    records: list[TraceRecord] = field(default_factory=list)
    stop_reason: str = "max_iters"

    def append(self, record: TraceRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def columns(self) -> tuple[str, ...]:
        return COLUMNS[self.kind]

    @property
    def final(self) -> TraceRecord:
        return self.records[-1]

    @property
    def iterations(self) -> int:
        """Number of updates performed."""
        return self.final.t if self.records else 0

    def column(self, name: str) -> np.ndarray:
        """One column as a float array (missing values become NaN)."""
        values = [getattr(r, name) for r in self.records]
        return np.array([np.nan if v is None else v for v in values], dtype=np.float64)

    def at(self, t: int) -> TraceRecord | None:
        """Record of iteration t, if it was kept."""
        for record in self.records:
            if record.t == t:
                return record
        return None

    def subsample(self, every: int) -> list[TraceRecord]:
        """Rows at multiples of ``every`` plus the final row."""
        if every < 1:
            raise ValueError(f"every must be >= 1, got {every}")
        rows = [r for r in self.records if r.t % every == 0]
        if self.records and (not rows or rows[-1] is not self.records[-1]):
            rows.append(self.records[-1])
        return rows

    def to_csv(self, every: int = 1) -> str:
        """Render the trace as CSV text (LF line endings)."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for record in self.subsample(every):
            writer.writerow(record.cells(self.columns))
        return buffer.getvalue()

    def write_csv(self, path: Path | str, every: int = 1) -> Path:
        """Write the trace to ``path`` as UTF-8 CSV."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(self.to_csv(every))
        return path


def read_trace_csv(path: Path | str) -> dict[str, np.ndarray]:
    """Load a trace CSV into column arrays (empty cells become NaN)."""
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        rows = list(reader)
        names = reader.fieldnames or []
    return {
        name: np.array([float(row[name]) if row[name] != "" else np.nan for row in rows])
        for name in names
    }


def loglog_slope(ts: np.ndarray, values: np.ndarray, lo: float, hi: float) -> float:
    """Least-squares slope of log(value) against log(t) for lo <= t <= hi.

    Non-positive or non-finite values inside the window are skipped.
    """
    ts = np.asarray(ts, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    mask = (ts >= lo) & (ts <= hi) & np.isfinite(values) & (values > 0) & (ts > 0)
    if np.count_nonzero(mask) < 2:
        raise ValueError(f"need at least two positive samples in [{lo}, {hi}]")
    slope, _ = np.polyfit(np.log(ts[mask]), np.log(values[mask]), 1)
    return float(slope)
