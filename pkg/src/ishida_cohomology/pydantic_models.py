from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import yaml  # type: ignore[import-untyped]
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator  # type: ignore

from ishida_cohomology.enums import OutputFormat, Verdict
from ishida_cohomology.paths import is_fan_file
from ishida_cohomology.services.ishida.main import CochainComplex, coboundary_rows
from ishida_cohomology.services.polyhedral.builders import fan_from_spec
from ishida_cohomology.services.polyhedral.main import Fan, fan_from_cones, make_cone


class FanFileError(ValueError):
    """A fan file could not be read; the message carries path and line/field context."""


########################################################
# Fan files
########################################################


class FanFile(BaseModel):
    """
    On-disk fan: rays by coordinates and maximal cones by ray index.

    The zero cone is implicit, so an empty cone list describes the fan {0}.
    """

    rank: int = Field(ge=0)
    rays: list[list[int]] = []
    cones: list[list[int]] = []

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_indices(self) -> "FanFile":
        for i, ray in enumerate(self.rays):
            if len(ray) != self.rank:
                raise ValueError(f"rays[{i}] has length {len(ray)}, expected rank {self.rank}")
            if not any(ray):
                raise ValueError(f"rays[{i}] is the zero vector")
        for i, cone in enumerate(self.cones):
            bad = [j for j in cone if not 0 <= j < len(self.rays)]
            if bad:
                raise ValueError(f"cones[{i}] refers to missing rays {bad}")
        return self

    @classmethod
    def from_path(cls, path: Path) -> "FanFile":
        """
        Load a fan file written as JSON or YAML.

        Raises:
            FanFileError: With line information for syntax errors and the
                failing field for schema errors
        """
        if not path.exists():
            raise FanFileError(f"Fan file not found: {path}")
        if not path.is_file():
            raise FanFileError(f"Path is not a file: {path}")
        if not is_fan_file(path):
            raise FanFileError(f"Fan file must be .json, .yaml or .yml, got: {path.suffix}")

        text = path.read_text()
        try:
            if path.suffix.lower() == ".json":
                data = json.loads(text)
            else:
                data = yaml.safe_load(text)
        except json.JSONDecodeError as e:
            raise FanFileError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark is not None else str(path)
            raise FanFileError(f"{where}: {e}") from e

        if not isinstance(data, dict):
            raise FanFileError(f"{path}: expected a mapping with rank, rays and cones")
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first["loc"]) or "<root>"
            raise FanFileError(f"{path}: field {field}: {first['msg']}") from e

    @classmethod
    def from_fan(cls, fan: Fan) -> "FanFile":
        index = {ray: i for i, ray in enumerate(fan.rays)}
        cones = sorted(sorted(index[r] for r in c.rays) for c in fan.maximal_cones if not c.is_zero)
        return cls(rank=fan.rank, rays=[list(r) for r in fan.rays], cones=cones)

    def to_fan(self) -> Fan:
        """Build and validate the fan. Rays no cone uses are ignored with a warning."""
        cones = [make_cone([self.rays[j] for j in cone], self.rank) for cone in self.cones]
        fan = fan_from_cones(self.rank, cones)
        fan_rays = set(fan.rays)
        unused = [ray for ray in self.rays if tuple(ray) not in fan_rays]
        if unused:
            logger.warning("Ignoring {n} rays that are not rays of the fan: {rays}", n=len(unused), rays=unused)
        return fan

    def to_json(self) -> str:
        """Deterministic JSON rendering with one key per line."""
        return (
            "{\n"
            f'  "rank": {self.rank},\n'
            f'  "rays": {json.dumps(self.rays)},\n'
            f'  "cones": {json.dumps(self.cones)}\n'
            "}\n"
        )

    def write(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.suffix.lower() in {".yaml", ".yml"}:
            path.write_text(yaml.safe_dump(self.model_dump(), default_flow_style=None, sort_keys=False))
        else:
            path.write_text(self.to_json())
        return path


########################################################
# Cohomology
########################################################


class CohomologyGroup(BaseModel):
    """Z^free_rank ⊕ Z/t_1 ⊕ ... with t_1 | t_2 | ..."""

    free_rank: int = Field(ge=0, serialization_alias="rank")
    torsion: list[int] = []

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_torsion(self) -> "CohomologyGroup":
        if any(t <= 1 for t in self.torsion):
            raise ValueError(f"Torsion coefficients must exceed 1, got {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"Torsion coefficients must form a divisibility chain, got {self.torsion}")
        return self

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}" if self.free_rank > 1 else "Z"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def entry_key(p: int, q: int) -> str:
    return f"{p},{q}"


class CohomologyTable(BaseModel):
    """H^q(Δ, Λ^p) for a range of p, with the Betti row when it is meaningful."""

    rank: int
    p_values: list[int]
    entries: dict[str, CohomologyGroup]
    betti: list[int] | None = None
    simplicial: bool = True
    note: str | None = None

    def group(self, p: int, q: int) -> CohomologyGroup:
        return self.entries.get(entry_key(p, q), CohomologyGroup(free_rank=0))

    def rank_of(self, p: int, q: int) -> int:
        return self.group(p, q).free_rank

    def diagonal(self) -> list[int]:
        return [self.rank_of(p, p) for p in self.p_values]

    def off_diagonal(self, allowed: set[int] | None = None) -> dict[str, int]:
        """Nonzero rational ranks at (p, q) with q - p outside the allowed offsets (default {0})."""
        allowed = {0} if allowed is None else allowed
        return {
            entry_key(p, q): self.rank_of(p, q)
            for p in self.p_values
            for q in range(self.rank + 1)
            if q - p not in allowed and self.rank_of(p, q)
        }


########################################################
# Reports
########################################################


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class ComplexBlock(BaseModel):
    degree: int
    rays: list[list[int]]
    start: int
    stop: int


class ComplexDump(BaseModel):
    """Degree ranks, coboundary matrices and the cone block table of one complex."""

    rank: int
    p: int
    degrees: list[int]
    coboundaries: list[list[list[int]]]
    blocks: list[ComplexBlock]

    @classmethod
    def from_complex(cls, cx: CochainComplex) -> "ComplexDump":
        blocks = [
            ComplexBlock(degree=q, rays=[list(r) for r in sigma.rays], start=start, stop=stop)
            for (q, sigma), (start, stop) in cx.component_index.items()
        ]
        return cls(
            rank=cx.rank,
            p=cx.p,
            degrees=list(cx.degrees),
            coboundaries=[coboundary_rows(D) for D in cx.coboundaries],
            blocks=blocks,
        )


class VerificationReport(BaseModel):
    regime: str
    verdict: Verdict
    table: CohomologyTable | None = None
    betti: list[int] | None = None
    checks: list[CheckResult] = []
    complexes: list[ComplexDump] | None = None

    @classmethod
    def from_checks(
        cls,
        regime: str,
        checks: list[CheckResult],
        table: CohomologyTable | None = None,
    ) -> "VerificationReport":
        verdict = Verdict.PASS if all(c.passed for c in checks) else Verdict.FAIL
        return cls(regime=regime, verdict=verdict, table=table, betti=table.betti if table else None, checks=checks)

    @classmethod
    def hypothesis_violation(cls, regime: str, reason: str) -> "VerificationReport":
        return cls(
            regime=regime,
            verdict=Verdict.HYPOTHESIS_VIOLATION,
            checks=[CheckResult(name="hypothesis", passed=False, detail=reason)],
        )

    @property
    def failed_checks(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True, exclude_none=True), indent=2) + "\n"


class FuzzFailure(BaseModel):
    index: int
    check: str
    detail: str
    reproducer: str | None = None


class FuzzSummary(BaseModel):
    seed: int
    count: int
    rank: int
    passed: int = 0
    failures: list[FuzzFailure] = []

    @property
    def ok(self) -> bool:
        return not self.failures


########################################################
# CLI run configuration
########################################################


def parse_p_range(text: str) -> list[int]:
    """'1..3' -> [1, 2, 3]; '2' -> [2]."""
    start, sep, stop = text.partition("..")
    try:
        if not sep:
            return [int(start)]
        low, high = int(start), int(stop)
    except ValueError as e:
        raise ValueError(f"Cannot parse p-range {text!r}; use 'a..b' or 'a'") from e
    if high < low:
        raise ValueError(f"Empty p-range {text!r}: {high} < {low}")
    return list(range(low, high + 1))


class RunConfig(BaseModel):
    """Validated options of one CLI invocation."""

    command: str
    input_path: Path | None = None
    builder_spec: str | None = None
    p_values: list[int] | None = None
    output_format: OutputFormat = OutputFormat.JSON
    emit_complex: bool = False
    force: bool = False
    seed: int | None = None

    @model_validator(mode="after")
    def exactly_one_source(self) -> "RunConfig":
        if (self.input_path is None) == (self.builder_spec is None):
            raise ValueError("Exactly one of an input path or a builder spec is required")
        return self

    @classmethod
    def from_source(cls, command: str, source: str, **options: Any) -> "RunConfig":
        """Treat source as a path when such a file exists, otherwise as a builder spec."""
        path = Path(source)
        if path.exists():
            return cls(command=command, input_path=path, **options)
        return cls(command=command, builder_spec=source, **options)

    def load_fan(self) -> Fan:
        if self.input_path is not None:
            return FanFile.from_path(self.input_path).to_fan()
        assert self.builder_spec is not None
        return fan_from_spec(self.builder_spec)

    def resolve_p_values(self, rank: int) -> list[int]:
        values = list(range(rank + 1)) if self.p_values is None else self.p_values
        bad = [p for p in values if not 0 <= p <= rank]
        if bad:
            raise ValueError(f"p values {bad} lie outside [0, {rank}]")
        return values
