"""Plot gap and distance versus t (log-log) from solver trace CSVs.

Usage:
    uv run python scripts/plot_convergence.py traces/ -o convergence.png

Zero-order traces of several seeds are combined into a median curve with a
min/max band; a first-order trace, if present, is drawn on the gap panel.
Needs the ``plot`` extra (matplotlib).
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import typer  # noqa: E402

from src.solvers import read_trace_csv  # noqa: E402

app = typer.Typer(add_completion=False)


def _stack(traces: list[dict[str, np.ndarray]], column: str) -> tuple[np.ndarray, np.ndarray]:
    length = min(len(tr["t"]) for tr in traces)
    ts = traces[0]["t"][:length]
    values = np.stack([tr[column][:length] for tr in traces])
    return ts, values


@app.command()
def plot(
    trace_dir: Path = typer.Argument(..., help="Directory with trace CSVs"),
    output: Path = typer.Option(Path("convergence.png"), "--output", "-o"),
):
    """Render the convergence figure."""
    zero_order = [read_trace_csv(p) for p in sorted(trace_dir.glob("zero-order-seed*.csv"))]
    first_order_path = trace_dir / "first-order.csv"
    if not zero_order and not first_order_path.exists():
        typer.echo(f"no traces in {trace_dir}")
        raise typer.Exit(code=2)

    plt.close("all")
    fig, (ax_gap, ax_dist) = plt.subplots(1, 2, figsize=(11, 4))

    if zero_order:
        ts, gaps = _stack(zero_order, "F")
        keep = ts > 0
        ax_gap.loglog(ts[keep], np.median(gaps, axis=0)[keep], label="zero-order (median)")
        ax_gap.fill_between(ts[keep], gaps.min(axis=0)[keep], gaps.max(axis=0)[keep], alpha=0.2)
        ax_gap.loglog(ts[keep], gaps[:, keep].mean(axis=0)[0] * ts[keep][0] / ts[keep], "k--", lw=0.8, label="O(1/t)")

        _, dists = _stack(zero_order, "x_dist")
        if np.isfinite(dists).any():
            ax_dist.loglog(ts[keep], np.median(dists, axis=0)[keep], label="zero-order (median)")
            ax_dist.fill_between(ts[keep], dists.min(axis=0)[keep], dists.max(axis=0)[keep], alpha=0.2)

    if first_order_path.exists():
        fo = read_trace_csv(first_order_path)
        keep = fo["t"] > 0
        ax_gap.loglog(fo["t"][keep], fo["F"][keep], label="first-order")

    ax_gap.set_xlabel("t")
    ax_gap.set_ylabel("F(z_t)")
    ax_gap.grid(True, which="both", alpha=0.3)
    ax_gap.legend()
    ax_dist.set_xlabel("t")
    ax_dist.set_ylabel("|x_t - x*|")
    ax_dist.grid(True, which="both", alpha=0.3)
    if ax_dist.lines:
        ax_dist.legend()

    fig.tight_layout()
    fig.savefig(output, dpi=150)
    plt.close(fig)
    typer.echo(f"wrote {output}")


if __name__ == "__main__":
    app()
