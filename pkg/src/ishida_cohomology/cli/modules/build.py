"""Fan builder commands. Every builder prints a normalized JSON fan file."""
from __future__ import annotations

from pathlib import Path

import typer  # type: ignore[import-not-found]

from ishida_cohomology.config import get_settings
from ishida_cohomology.paths import graph_fan_paths
from ishida_cohomology.pydantic_models import FanFile
from ishida_cohomology.services.polyhedral.builders import (
    gamma_pi,
    hirzebruch_fan,
    parse_rays,
    product_fan,
    projective_space_fan,
)
from ishida_cohomology.services.polyhedral.main import (
    FanError,
    complete_from_convex,
    eta_from_values,
    graph_fans,
    make_cone,
    star_removal,
)

from .utils import echo_fan, fail, fan_by_ray_index, load_fan


app = typer.Typer(help="Build standard fans and fans derived from an input fan")


@app.command("pr")
def pr(rank: int = typer.Argument(..., help="Rank r of projective space P^r")) -> None:
    """Fan of projective space."""
    try:
        echo_fan(projective_space_fan(rank))
    except FanError as e:
        fail(str(e))


@app.command("hirzebruch")
def hirzebruch(a: int = typer.Argument(..., help="Twist a of the Hirzebruch surface F_a")) -> None:
    """Fan of the Hirzebruch surface F_a."""
    echo_fan(hirzebruch_fan(a))


@app.command("product")
def product(
    left: str = typer.Argument(..., help="First factor: fan file or builder spec"),
    right: str = typer.Argument(..., help="Second factor: fan file or builder spec"),
) -> None:
    """Product of two fans."""
    f1, _ = load_fan(left, "build")
    f2, _ = load_fan(right, "build")
    echo_fan(product_fan(f1, f2))


@app.command("gamma")
def gamma(
    rays: str = typer.Option(..., "--rays", help="Generators of the cone, e.g. '1,0,0;0,1,0'"),
) -> None:
    """Face fan of a single cone."""
    try:
        echo_fan(gamma_pi(make_cone(parse_rays(rays))))
    except FanError as e:
        fail(str(e))


@app.command("graph")
def graph(
    base: str = typer.Option(..., "--base", help="Complete simplicial base fan: file or builder spec"),
    eta: str | None = typer.Option(None, "--eta", help="Integer values on the base rays, e.g. '0,1'"),
    out_dir: Path | None = typer.Option(None, "--out-dir", help="Directory for the three fan files"),
) -> None:
    """Write the graph fans phi_tilde, phi and phi_flat over a base fan."""
    sigma_bar, _ = load_fan(base, "build")
    try:
        values = eta_from_values(sigma_bar, [int(v) for v in eta.split(",") if v.strip()]) if eta else None
        fans = graph_fans(sigma_bar, values)
    except ValueError as e:
        fail(str(e))
    target = out_dir if out_dir is not None else get_settings().fan_output_dir
    for path, fan in zip(graph_fan_paths(target).values(), fans):
        FanFile.from_fan(fan).write(path)
        typer.echo(str(path))


@app.command("complete-from-convex")
def complete_from_convex_cmd(
    source: str = typer.Argument(..., help="Simplicial fan with convex full-dimensional support"),
) -> None:
    """Complete a convex fan by coning its boundary over one new ray."""
    delta, _ = load_fan(source, "build")
    try:
        tilde, _ = complete_from_convex(delta)
    except FanError as e:
        fail(str(e))
    echo_fan(tilde)


@app.command("star-removal")
def star_removal_cmd(
    source: str = typer.Argument(..., help="Fan file or builder spec"),
    ray: int = typer.Option(..., "--ray", help="Index of the ray to remove, in the fan's sorted ray order"),
) -> None:
    """Remove the star of a ray."""
    tilde, _ = load_fan(source, "build")
    rho = make_cone([fan_by_ray_index(tilde, ray)], tilde.rank)
    echo_fan(star_removal(tilde, rho))
