from __future__ import annotations

from pathlib import Path

"""
Centralized path helpers/constants for this repo.
"""


# Relative directory names (under repo root)
DATA_DIRNAME = "data"
FANS_DIRNAME = "fans"
FUZZ_FAILURES_DIRNAME = "fuzz-failures"

FAN_FILE_SUFFIXES = {".json", ".yaml", ".yml"}


def repo_root() -> Path:
    """
    Return the repository root directory.

    Assumes this file lives at: <repo>/src/ishida_cohomology/paths.py
    """
    return Path(__file__).resolve().parents[2]


def data_dir() -> Path:
    return repo_root() / DATA_DIRNAME


def fan_output_dir() -> Path:
    return data_dir() / FANS_DIRNAME


def fuzz_failures_dir() -> Path:
    return data_dir() / FUZZ_FAILURES_DIRNAME


def fuzz_reproducer_path(root: Path, seed: int, index: int) -> Path:
    """
    Path of the fan file written for a failing fuzz case.

    Example:
        fuzz_reproducer_path(Path("data/fuzz-failures"), 1, 7)
        -> data/fuzz-failures/seed1-fan007.json
    """
    return root / f"seed{seed}-fan{index:03d}.json"


def graph_fan_paths(out_dir: Path) -> dict[str, Path]:
    """The three files written by the graph-fan builder."""
    return {
        "phi_tilde": out_dir / "phi_tilde.json",
        "phi": out_dir / "phi.json",
        "phi_flat": out_dir / "phi_flat.json",
    }


def is_fan_file(path: Path) -> bool:
    return path.suffix.lower() in FAN_FILE_SUFFIXES
