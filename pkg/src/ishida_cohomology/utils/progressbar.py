"""Live progress of a fuzz run on stderr, using Rich."""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

from loguru import logger
from rich.console import Console  # type: ignore[import-not-found]
from rich.progress import (  # type: ignore[import-not-found]
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
)

from ishida_cohomology.pydantic_models import FuzzSummary


@dataclass
class FuzzProgress:
    progress: Progress
    task: TaskID
    summary: FuzzSummary
    checked: int = 0

    def advance(self) -> None:
        """Count one more checked fan and refresh the pass/fail tally from the summary."""
        self.checked += 1
        self.progress.update(
            self.task,
            advance=1,
            passed=self.summary.passed,
            failing=self.checked - self.summary.passed,
        )


@contextmanager
def fuzz_progress(summary: FuzzSummary, console: Console | None = None) -> Iterator[FuzzProgress]:
    """
    Progress bar over the fans of a fuzz run with running pass and fail counts.

    Warnings logged while the bar is live (one per failed check) are printed
    above it; the temporary loguru sink is removed on exit.

    Example:
        >>> with fuzz_progress(summary) as bar:
        ...     for i in range(summary.count):
        ...         check(i)
        ...         bar.advance()
    """
    console = console or Console(stderr=True)
    handler_id = logger.add(
        lambda msg: console.print(msg, end="", markup=False, highlight=False),
        format="{time:HH:mm:ss} | {level: <8} | {message}",
        level="WARNING",
    )
    try:
        with Progress(
            SpinnerColumn(),
            TextColumn("[bold blue]rank {task.fields[rank]} seed {task.fields[seed]}"),
            BarColumn(),
            MofNCompleteColumn(),
            TextColumn("[green]{task.fields[passed]} passed"),
            TextColumn("[red]{task.fields[failing]} failing"),
            TimeElapsedColumn(),
            console=console,
        ) as progress:
            task = progress.add_task(
                "fuzz",
                total=summary.count,
                rank=summary.rank,
                seed=summary.seed,
                passed=0,
                failing=0,
            )
            yield FuzzProgress(progress=progress, task=task, summary=summary)
    finally:
        logger.remove(handler_id)
