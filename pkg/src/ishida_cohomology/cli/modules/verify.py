"""Theorem verification command. Exit codes: 0 PASS, 1 FAIL, 2 hypothesis violation."""
from __future__ import annotations

import typer  # type: ignore[import-not-found]

from ishida_cohomology.constants import THEOREM_REGIMES, VERDICT_EXIT_CODES
from ishida_cohomology.enums import OutputFormat, Regime, Theorem
from ishida_cohomology.pydantic_models import ComplexDump, VerificationReport
from ishida_cohomology.services.ishida.main import build_ishida
from ishida_cohomology.services.polyhedral.main import Fan, FanError, eta_from_values, make_cone
from ishida_cohomology.services.verification.main import (
    verify_double_complex,
    verify_phi_transfer,
    verify_star_removal,
    verify_vanishing,
)

from .utils import fail, fan_by_ray_index, load_fan, render_report


def _run(fan: Fan, theorem: Theorem, ray: int | None, eta: str | None) -> VerificationReport:
    if theorem is Theorem.DOUBLE_COMPLEX:
        return verify_double_complex(fan)
    if theorem is Theorem.GRAPH_TRANSFER:
        if not eta:
            return verify_phi_transfer(fan)
        try:
            values = eta_from_values(fan, [int(v) for v in eta.split(",") if v.strip()])
        except ValueError as e:
            fail(str(e))
        return verify_phi_transfer(fan, values)
    regime = THEOREM_REGIMES[theorem]
    if regime is Regime.STAR_REMOVAL and ray is not None:
        rho = make_cone([fan_by_ray_index(fan, ray)], fan.rank)
        return verify_star_removal(fan, rho)
    return verify_vanishing(fan, regime)


def verify(
    source: str = typer.Argument(..., help="Fan file or builder spec such as pr:2"),
    theorem: Theorem = typer.Option(..., "--theorem", help="Which vanishing statement to check"),
    ray: int | None = typer.Option(
        None, "--ray", help="thm4.2: the input is the complete fan and this ray index (sorted order) is removed"
    ),
    eta: str | None = typer.Option(None, "--eta", help="lem4.3: integer values on the rays of the base fan"),
    output_format: OutputFormat = typer.Option(OutputFormat.JSON, "--format", case_sensitive=False),
    emit_complex: bool = typer.Option(False, "--emit-complex", help="Attach the Ishida complexes of the input fan"),
) -> None:
    """Verify a vanishing theorem on a fan and exit with its verdict."""
    fan, _ = load_fan(source, "verify", output_format=output_format, emit_complex=emit_complex)
    try:
        report = _run(fan, theorem, ray, eta)
    except FanError as e:
        fail(str(e))
    if emit_complex:
        report.complexes = [ComplexDump.from_complex(build_ishida(fan, p)) for p in range(fan.rank + 1)]

    if output_format is OutputFormat.TABLE:
        render_report(report)
    else:
        typer.echo(report.to_json(), nl=False)
    raise typer.Exit(VERDICT_EXIT_CODES[report.verdict])
