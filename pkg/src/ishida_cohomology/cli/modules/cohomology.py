"""Fan validation and cohomology table commands."""
from __future__ import annotations

from pathlib import Path

import typer  # type: ignore[import-not-found]
from loguru import logger

from ishida_cohomology.enums import OutputFormat
from ishida_cohomology.pydantic_models import ComplexDump, FanFile, parse_p_range
from ishida_cohomology.services.homology.main import cohomology_table
from ishida_cohomology.services.ishida.main import build_ishida

from .utils import echo_json, fail, load_fan, render_table, table_payload


def validate(
    fan_file: Path = typer.Argument(..., help="Fan file (.json, .yaml or .yml)"),
) -> None:
    """Check the fan axioms and print a one-line summary."""
    try:
        fan = FanFile.from_path(fan_file).to_fan()
    except ValueError as e:
        fail(str(e))
    typer.echo(fan.describe())


def cohomology(
    source: str = typer.Argument(..., help="Fan file or builder spec such as pr:2"),
    p: str | None = typer.Option(None, "--p", help="Range of p, 'a..b' or 'a' (default: 0..r)"),
    output_format: OutputFormat = typer.Option(OutputFormat.JSON, "--format", case_sensitive=False),
    force: bool = typer.Option(False, "--force", help="Assemble Betti numbers for non-simplicial fans too"),
    emit_complex: bool = typer.Option(False, "--emit-complex", help="Include coboundary matrices and block tables"),
) -> None:
    """Print H^q(Δ, Λ^p) with free rank and torsion, plus the Betti row."""
    try:
        p_values = parse_p_range(p) if p else None
    except ValueError as e:
        fail(str(e))
    fan, config = load_fan(
        source,
        "cohomology",
        p_values=p_values,
        output_format=output_format,
        force=force,
        emit_complex=emit_complex,
    )
    try:
        values = config.resolve_p_values(fan.rank)
    except ValueError as e:
        fail(str(e))
    if force and not fan.is_simplicial:
        logger.warning("Assembling Betti numbers of a non-simplicial fan")

    table = cohomology_table(fan, values, force=force)
    complexes = [ComplexDump.from_complex(build_ishida(fan, p)) for p in values] if emit_complex else None

    if output_format is OutputFormat.TABLE:
        render_table(table)
        if complexes is not None:
            echo_json({"complexes": [c.model_dump(mode="json") for c in complexes]})
        return
    payload = table_payload(table)
    if complexes is not None:
        payload["complexes"] = [c.model_dump(mode="json") for c in complexes]
    echo_json(payload)
