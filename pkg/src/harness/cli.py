"""CLI for solving and auditing quadratic GNE problems."""

import sys
from enum import Enum
from pathlib import Path

import numpy as np
import typer
from rich.console import Console
from rich.table import Table

from ..config import GneSettings
from ..core.exceptions import ConfigurationError, GameLoadError, InvalidGameError, ZeroMatrixError
from ..game import QuadraticGame, load_game, pseudo_gradient_monotonicity
from ..game import validate as validate_game
from ..kkt import KktSystem, assemble
from ..numerics import RngStream
from ..observability import setup_logging
from ..solvers import ZoConfig
from ..verification import (
    DEFAULT_IDENTITY_DIMS,
    CheckReport,
    estimator_audit,
    fd_gradient_check,
    identity_audit,
    pl_inequality_check,
    solution_oracle,
)
from .models import PAPER_SCHEDULE_PRESET, RunConfig, TraceOptions, load_run_config
from .runner import run_seeds, summarize

# Ensure UTF-8 output on Windows console
if sys.platform == "win32":
    import codecs

    sys.stdout = codecs.getwriter("utf-8")(sys.stdout.buffer, "replace")
    sys.stderr = codecs.getwriter("utf-8")(sys.stderr.buffer, "replace")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_IO = 2
EXIT_DIVERGED = 3

app = typer.Typer(
    name="gne",
    help="GNE solver for quadratic games with linear equality constraints",
    add_completion=False,
)
console = Console()


class AuditKind(str, Enum):
    fd = "fd"
    estimator = "estimator"
    identities = "identities"
    oracle = "oracle"
    pl = "pl"


class AuditPoint(str, Enum):
    zero = "zero"
    solution = "solution"
    random = "random"


@app.callback()
def _configure(
    log_level: str | None = typer.Option(None, "--log-level", help="Logging level"),
    log_json: bool | None = typer.Option(None, "--log-json/--no-log-json", help="JSON log lines"),
):
    """Set up logging before any command runs."""
    current = GneSettings()
    setup_logging(
        level=log_level or current.log_level,
        json_format=current.log_json if log_json is None else log_json,
        log_file=current.log_file,
    )


def _load_system(game: str) -> tuple[QuadraticGame, KktSystem]:
    """Load and assemble, mapping failures to exit codes."""
    try:
        g = load_game(game)
        return g, assemble(g)
    except GameLoadError as e:
        console.print(f"[red][FAIL] Cannot load game:[/red]\n{e}")
        raise typer.Exit(code=EXIT_IO) from None
    except (InvalidGameError, ZeroMatrixError) as e:
        console.print(f"[red][FAIL] Invalid game:[/red]\n{e}")
        raise typer.Exit(code=EXIT_FAILED) from None


def _print_report(report: CheckReport, as_json: bool) -> None:
    if as_json:
        console.print_json(report.to_json())
        return
    status = "[green][PASS][/green]" if report.passed else "[red][FAIL][/red]"
    console.print(f"{status} {report.check}: {len(report.items) - len(report.failures)}/{len(report.items)} items")
    table = Table(title=report.check)
    table.add_column("Item", style="cyan")
    table.add_column("Observed", justify="right")
    table.add_column("Expected", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("OK")
    for item in report.items:
        table.add_row(
            item.name,
            f"{item.observed:.6g}",
            f"{item.expected:.6g}",
            f"{item.tolerance:.3g}",
            "[green]yes[/green]" if item.passed else "[red]no[/red]",
        )
    console.print(table)
    for key, value in report.details.items():
        console.print(f"[dim]{key}:[/dim] {value}")


# ============================================================================
# Validate Command
# ============================================================================


@app.command()
def validate(
    game: str = typer.Argument(..., help="Game document path or preset name"),
):
    """Validate a game document."""
    console.print(f"[bold]Validating game:[/bold] {game}")
    try:
        g = load_game(game)
    except GameLoadError as e:
        console.print(f"[red][FAIL] Cannot load game:[/red]\n{e}")
        raise typer.Exit(code=EXIT_IO) from None

    report = validate_game(g)
    if report.valid:
        console.print(f"[green][OK] {g.name}: {g.n} players, d={g.d}, m={g.m}, layout={g.layout}[/green]")
        return

    table = Table(title="Validation issues")
    table.add_column("Player", style="cyan")
    table.add_column("Kind", style="yellow")
    table.add_column("Message")
    for issue in report.issues:
        table.add_row("-" if issue.player is None else str(issue.player), issue.kind, issue.message)
    console.print(table)
    console.print(f"[red][FAIL] {len(report.issues)} issue(s)[/red]")
    raise typer.Exit(code=EXIT_FAILED)


# ============================================================================
# Reformulate Command
# ============================================================================


@app.command()
def reformulate(
    game: str = typer.Argument(..., help="Game document path or preset name"),
):
    """Print the KKT reformulation constants and the existence verdict."""
    g, sys_ = _load_system(game)
    mono = pseudo_gradient_monotonicity(g)
    oracle = solution_oracle(sys_)

    table = Table(title=f"KKT reformulation of {g.name}")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("players n / d / m", f"{g.n} / {g.d} / {g.m}")
    table.add_row("size of z", str(sys_.size))
    table.add_row("mu_F", f"{sys_.mu_F:.10g}")
    table.add_row("L_F", f"{sys_.L_F:.10g}")
    table.add_row("L_F / mu_F", f"{sys_.L_F / sys_.mu_F:.6g}")
    verdict = "monotone" if mono.is_monotone else "non-monotone"
    table.add_row("pseudo-gradient", f"{verdict} (mu = {mono.mu:.6g})")
    table.add_row("oracle residual", f"{oracle.residual:.3g}")
    table.add_row("kernel dimension", str(oracle.kernel_dim))
    console.print(table)

    if oracle.exists:
        x = ", ".join(f"{v:.10g}" for v in oracle.z_bar.x)
        pinned = "" if oracle.x_pinned else " (one of a family)"
        console.print(f"[green]GNE exists[/green]: x = ({x}){pinned}")
    else:
        console.print("[yellow]no GNE (G z = -e has no solution)[/yellow]")


# ============================================================================
# Solve Command
# ============================================================================


def _config_from_options(
    game: str | None,
    method: str,
    seeds: int | None,
    seed: int | None,
    max_iters: int | None,
    sigma: float | None,
    delta: float | None,
    schedule: str | None,
    step: float | None,
    dual_step: float | None,
    stop_gap: float | None,
    trace_dir: Path | None,
    trace_every: int | None,
    workers: int | None,
) -> RunConfig:
    current = GneSettings()
    if game is None:
        raise ConfigurationError("a game (or --config) is required")
    params: dict = {}
    if method == "first-order":
        for key, value in (("step", step), ("dual_step", dual_step), ("stop_gap", stop_gap), ("max_iters", max_iters)):
            if value is not None:
                params[key] = value
        seed_list: list[int] = []
    else:
        params = {
            "sigma": sigma if sigma is not None else current.sigma,
            "delta": delta if delta is not None else current.delta,
            "max_iters": max_iters if max_iters is not None else current.max_iters,
        }
        if schedule is not None:
            if schedule != PAPER_SCHEDULE_PRESET:
                raise ConfigurationError(f"unknown schedule preset '{schedule}'")
            params["schedule"] = schedule
        base = seed if seed is not None else current.seed
        seed_list = [base + k for k in range(seeds if seeds is not None else current.seeds)]
    return RunConfig(
        game=game,
        method=method,
        params=params,
        seeds=seed_list,
        trace=TraceOptions(
            dir=trace_dir if trace_dir is not None else Path(current.trace_dir),
            every=trace_every if trace_every is not None else current.trace_every,
        ),
        workers=workers if workers is not None else current.workers,
    )


@app.command()
def solve(
    game: str | None = typer.Argument(None, help="Game document path or preset name"),
    config: Path | None = typer.Option(None, "--config", "-c", help="Run config document"),
    method: str = typer.Option("zero-order", "--method", "-m", help="first-order or zero-order"),
    seeds: int | None = typer.Option(None, "--seeds", help="Number of seeds"),
    seed: int | None = typer.Option(None, "--seed", help="First seed (GNE_SEED)"),
    max_iters: int | None = typer.Option(None, "--max-iters", "--T", help="Iterations"),
    sigma: float | None = typer.Option(None, "--sigma", help="Smoothing radius"),
    delta: float | None = typer.Option(None, "--delta", help="Second-pair offset"),
    schedule: str | None = typer.Option(None, "--schedule", help=f"Step preset ({PAPER_SCHEDULE_PRESET})"),
    step: float | None = typer.Option(None, "--step", help="First-order step"),
    dual_step: float | None = typer.Option(None, "--dual-step", help="First-order dual step"),
    stop_gap: float | None = typer.Option(None, "--stop-gap", help="First-order stop gap"),
    trace_dir: Path | None = typer.Option(None, "--trace-dir", help="Trace directory"),
    trace_every: int | None = typer.Option(None, "--trace-every", help="Trace stride"),
    workers: int | None = typer.Option(None, "--workers", "-w", help="Worker processes"),
    as_json: bool = typer.Option(False, "--json", help="Print the summary as JSON"),
):
    """Run a solver over one or more seeds and write CSV traces."""
    try:
        if config is not None:
            cfg = load_run_config(config)
        else:
            if method not in ("first-order", "zero-order"):
                raise ConfigurationError(f"unknown method '{method}'")
            cfg = _config_from_options(
                game, method, seeds, seed, max_iters, sigma, delta, schedule,
                step, dual_step, stop_gap, trace_dir, trace_every, workers,
            )
        _load_system(cfg.game)
        results = run_seeds(cfg)
    except (GameLoadError, ConfigurationError) as e:
        console.print(f"[red][FAIL] {e}[/red]")
        raise typer.Exit(code=EXIT_IO) from None
    except ValueError as e:
        console.print(f"[red][FAIL] Invalid configuration:[/red]\n{e}")
        raise typer.Exit(code=EXIT_IO) from None

    summary = summarize(results, cfg.method)
    if as_json:
        console.print_json(summary.model_dump_json())
    else:
        table = Table(title=f"{cfg.method} on {cfg.game}")
        table.add_column("Seed", style="cyan")
        table.add_column("Iterations", justify="right")
        table.add_column("Final gap", justify="right")
        table.add_column("|x - x_ref|", justify="right")
        table.add_column("Trace")
        for r in results:
            if r.ok:
                dist = "-" if r.final_x_dist is None else f"{r.final_x_dist:.4g}"
                table.add_row("-" if r.seed is None else str(r.seed), str(r.iterations), f"{r.final_gap:.4g}", dist, str(r.trace_path))
            else:
                label = "diverged" if r.diverged else "oracle fault"
                table.add_row("-" if r.seed is None else str(r.seed), "-", f"[red]{label}[/red]", "-", r.error or "")
        console.print(table)
        if summary.gap_median is not None:
            console.print(
                f"gap median {summary.gap_median:.4g} (min {summary.gap_min:.4g}, max {summary.gap_max:.4g})"
            )
        if summary.x_dist_median is not None:
            console.print(f"|x - x_ref| median {summary.x_dist_median:.4g}")
        if summary.x_dist_median_at_checkpoint is not None:
            console.print(f"|x - x_ref| median at t=1000: {summary.x_dist_median_at_checkpoint:.4g}")
        if summary.mean_gap_slope is not None:
            console.print(f"log-log slope of mean gap on [1e3, 1e4]: {summary.mean_gap_slope:.3f}")
        if summary.unconverged:
            console.print("[yellow]not converged: iteration budget spent above stop_gap[/yellow]")

    if summary.diverged:
        raise typer.Exit(code=EXIT_DIVERGED)
    if summary.faulted or summary.unconverged:
        raise typer.Exit(code=EXIT_FAILED)


# ============================================================================
# Audit Command
# ============================================================================


def _audit_point(kind: AuditPoint, sys_: KktSystem, rng: RngStream) -> np.ndarray:
    if kind is AuditPoint.zero:
        return np.zeros(sys_.size)
    if kind is AuditPoint.solution:
        return solution_oracle(sys_).z_bar.vector
    return rng.child(99).standard_normal(sys_.size)


@app.command()
def audit(
    kind: AuditKind = typer.Argument(..., help="fd, estimator, identities, oracle or pl"),
    game: str = typer.Option("paper", "--game", "-g", help="Game document path or preset name"),
    point: AuditPoint = typer.Option(AuditPoint.zero, "--point", help="Estimator audit point"),
    rounds: int = typer.Option(200_000, "--rounds", help="Estimator audit rounds"),
    samples: int = typer.Option(1_000_000, "--samples", help="Identity audit samples"),
    points: int = typer.Option(20, "--points", help="Random points for fd / pl"),
    h: float = typer.Option(1e-4, "--h", help="Finite-difference step"),
    sigma: float | None = typer.Option(None, "--sigma", help="Smoothing radius"),
    delta: float | None = typer.Option(None, "--delta", help="Second-pair offset"),
    seed: int | None = typer.Option(None, "--seed", help="Audit seed (GNE_SEED)"),
    retry: bool = typer.Option(True, "--retry/--no-retry", help="Retry a failed estimator audit once"),
    as_json: bool = typer.Option(False, "--json", help="Print the report as JSON"),
):
    """Run one of the verification audits; exit 0 iff it passes."""
    current = GneSettings()
    base_seed = seed if seed is not None else current.seed
    rng = RngStream(base_seed)

    try:
        if kind is AuditKind.identities:
            report = identity_audit(DEFAULT_IDENTITY_DIMS, samples, rng)
        else:
            g, sys_ = _load_system(game)
            if kind is AuditKind.fd:
                report = fd_gradient_check(sys_, points, h, rng)
            elif kind is AuditKind.pl:
                report = pl_inequality_check(sys_, points, rng)
            elif kind is AuditKind.oracle:
                result = solution_oracle(sys_)
                x = ", ".join(f"{v:.10g}" for v in result.z_bar.x)
                console.print(f"x = ({x})")
                console.print(f"kernel dimension {result.kernel_dim}, residual {result.residual:.3g}")
                if not result.exists:
                    console.print("[yellow]no GNE (G z = -e has no solution)[/yellow]")
                    raise typer.Exit(code=EXIT_FAILED)
                console.print("[green][PASS] GNE exists[/green]")
                return
            else:
                cfg = ZoConfig(
                    sigma=sigma if sigma is not None else current.sigma,
                    delta=delta if delta is not None else current.delta,
                    seed=base_seed,
                )
                z = _audit_point(point, sys_, rng)
                report = estimator_audit(g, sys_, z, cfg, rounds)
                if not report.passed and retry:
                    console.print("[yellow]Estimator audit failed; retrying once with a fresh seed[/yellow]")
                    cfg = cfg.model_copy(update={"seed": base_seed + 1})
                    report = estimator_audit(g, sys_, z, cfg, rounds)
    except ConfigurationError as e:
        console.print(f"[red][FAIL] {e}[/red]")
        raise typer.Exit(code=EXIT_IO) from None

    _print_report(report, as_json)
    if not report.passed:
        raise typer.Exit(code=EXIT_FAILED)


# ============================================================================
# Main
# ============================================================================


def main():
    """CLI entry point."""
    app()


if __name__ == "__main__":
    main()
