"""Randomized property run over seeded simplicial fans."""
from __future__ import annotations

from pathlib import Path
import sys

import typer  # type: ignore[import-not-found]

from ishida_cohomology.services.fuzz.main import run_fuzz

from .utils import echo_json, fail


def fuzz(
    seed: int = typer.Option(0, "--seed", help="Run seed; fan i uses the seed string '<seed>-<i>'"),
    count: int = typer.Option(50, "--count", help="Number of random fans"),
    rank: int = typer.Option(2, "--rank", help="Lattice rank of the random fans"),
    out_dir: Path | None = typer.Option(None, "--out-dir", help="Where reproducer fan files go"),
) -> None:
    """Check the coboundary, Euler and invariance properties on random fans."""
    try:
        summary = run_fuzz(
            seed=seed,
            count=count,
            rank=rank,
            failures_dir=out_dir,
            show_progress=sys.stderr.isatty(),
        )
    except ValueError as e:
        fail(str(e))
    echo_json(summary.model_dump(mode="json"))
    if not summary.ok:
        for failure in summary.failures:
            typer.echo(f"✗ fan {failure.index} ({failure.check}): reproducer {failure.reproducer}", err=True)
        raise typer.Exit(1)
