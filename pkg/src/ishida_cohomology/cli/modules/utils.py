"""Shared helpers for CLI commands: fan loading, error reporting, rendering."""
from __future__ import annotations

import json
import sys
from typing import Any, NoReturn

import typer  # type: ignore[import-not-found]
from loguru import logger
from rich.console import Console  # type: ignore[import-not-found]
from rich.table import Table  # type: ignore[import-not-found]

from ishida_cohomology.config import get_settings
from ishida_cohomology.pydantic_models import CohomologyTable, FanFile, RunConfig, VerificationReport
from ishida_cohomology.services.polyhedral.main import Fan


def configure_logging(verbose: bool) -> None:
    """Single stderr sink; stdout is reserved for command output."""
    logger.remove()
    level = "DEBUG" if verbose else get_settings().log_level
    logger.add(sys.stderr, level=level, format="{level: <8} | {name}:{function} - {message}")


def fail(message: str) -> NoReturn:
    typer.echo(f"✗ Error: {message}", err=True)
    raise typer.Exit(1)


def load_fan(source: str, command: str, **options: Any) -> tuple[Fan, RunConfig]:
    """Resolve a path or builder spec into a validated fan, exiting 1 on any error."""
    try:
        config = RunConfig.from_source(command, source, **options)
        return config.load_fan(), config
    except ValueError as e:
        fail(str(e))


def fan_by_ray_index(fan: Fan, index: int) -> tuple[int, ...]:
    if not 0 <= index < len(fan.rays):
        fail(f"Ray index {index} out of range; the fan has {len(fan.rays)} rays")
    return fan.rays[index]


def echo_fan(fan: Fan) -> None:
    typer.echo(FanFile.from_fan(fan).to_json(), nl=False)


def echo_json(payload: dict[str, Any]) -> None:
    typer.echo(json.dumps(payload, indent=2))


def table_payload(table: CohomologyTable) -> dict[str, Any]:
    return table.model_dump(mode="json", by_alias=True, exclude_none=True)


def render_table(table: CohomologyTable, console: Console | None = None) -> None:
    """Plain-text (p, q) grid with the Betti row and note underneath."""
    console = console or Console(highlight=False, soft_wrap=True)
    grid = Table(title=f"H^q(Δ, Λ^p), r={table.rank}")
    grid.add_column("p \\ q")
    for q in range(table.rank + 1):
        grid.add_column(str(q), justify="right")
    for p in table.p_values:
        grid.add_row(str(p), *[str(table.group(p, q)) for q in range(table.rank + 1)])
    console.print(grid)
    if table.betti is not None:
        console.print("betti: " + " ".join(str(b) for b in table.betti))
    if table.note:
        console.print(table.note)


def render_report(report: VerificationReport) -> None:
    console = Console(highlight=False, soft_wrap=True)
    console.print(f"regime: {report.regime}")
    console.print(f"verdict: {report.verdict.value}")
    for check in report.checks:
        mark = "✓" if check.passed else "✗"
        console.print(f"{mark} {check.name}" + (f": {check.detail}" if check.detail else ""), markup=False)
    if report.table is not None:
        render_table(report.table, console)


__all__ = [
    "configure_logging",
    "echo_fan",
    "echo_json",
    "fail",
    "fan_by_ray_index",
    "load_fan",
    "render_report",
    "render_table",
    "table_payload",
]
