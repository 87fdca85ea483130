"""Ishida cohomology CLI - Main entry point."""
from __future__ import annotations

import typer  # type: ignore[import-not-found]

from ishida_cohomology.cli.modules import build, cohomology, fuzz, verify
from ishida_cohomology.cli.modules.utils import configure_logging


app = typer.Typer(
    name="ishida",
    help="Ishida cohomology of toric fans: build fans, compute H^q(Δ, Λ^p), verify vanishing theorems",
    no_args_is_help=True,
)


@app.callback()
def setup(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging on stderr"),
) -> None:
    configure_logging(verbose)


# Register subcommands
app.add_typer(build.app, name="build")
app.command("validate")(cohomology.validate)
app.command("cohomology")(cohomology.cohomology)
app.command("verify")(verify.verify)
app.command("fuzz")(fuzz.fuzz)


def main() -> None:
    """CLI entry point."""
    app()


if __name__ == "__main__":
    main()
