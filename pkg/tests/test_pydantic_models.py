"""Tests for Pydantic models."""
import json
from pathlib import Path

import pytest  # type: ignore[import-not-found]
from pydantic import ValidationError  # type: ignore[import-not-found]

from ishida_cohomology.enums import Verdict  # type: ignore[import-not-found]
from ishida_cohomology.pydantic_models import (  # type: ignore[import-not-found]
    CheckResult,
    CohomologyGroup,
    CohomologyTable,
    ComplexDump,
    FanFile,
    FanFileError,
    RunConfig,
    VerificationReport,
    parse_p_range,
)
from ishida_cohomology.services.ishida.main import build_ishida  # type: ignore[import-not-found]
from ishida_cohomology.services.polyhedral.builders import projective_space_fan  # type: ignore


class TestFanFileLoading:
    """Tests for reading fan files from disk."""

    def test_from_json(self, p2_file: Path):
        """A valid JSON fan file loads and builds P^2."""
        fan = FanFile.from_path(p2_file).to_fan()
        assert fan == projective_space_fan(2)

    def test_from_yaml(self, tmp_path: Path):
        """YAML fan files are accepted too."""
        path = tmp_path / "p1.yaml"
        path.write_text("rank: 1\nrays: [[1], [-1]]\ncones: [[0], [1]]\n")
        assert FanFile.from_path(path).to_fan() == projective_space_fan(1)

    def test_empty_cone_list_is_zero_fan(self, tmp_path: Path):
        """No cones means the fan {0}."""
        path = tmp_path / "zero.json"
        path.write_text('{"rank": 3, "rays": [], "cones": []}')
        fan = FanFile.from_path(path).to_fan()
        assert fan.f_vector == (1, 0, 0, 0)

    def test_missing_file(self, tmp_path: Path):
        """A missing path is reported with its name."""
        with pytest.raises(FanFileError, match="not found"):
            FanFile.from_path(tmp_path / "nope.json")

    def test_wrong_suffix(self, tmp_path: Path):
        """Only JSON and YAML suffixes are fan files."""
        path = tmp_path / "fan.txt"
        path.write_text("{}")
        with pytest.raises(FanFileError, match="must be .json"):
            FanFile.from_path(path)

    def test_json_syntax_error_has_line(self, tmp_path: Path):
        """JSON syntax errors carry path, line and column."""
        path = tmp_path / "bad.json"
        path.write_text('{"rank": 2,\n "rays": [[1, 0],\n')
        with pytest.raises(FanFileError, match=r"bad\.json:\d+:\d+"):
            FanFile.from_path(path)

    def test_yaml_syntax_error_has_line(self, tmp_path: Path):
        """YAML syntax errors carry path, line and column."""
        path = tmp_path / "bad.yaml"
        path.write_text("rank: 2\nrays: [[1, 0]\n")
        with pytest.raises(FanFileError, match=r"bad\.yaml:\d+:\d+"):
            FanFile.from_path(path)

    def test_schema_error_names_field(self, tmp_path: Path):
        """Schema errors name the failing field."""
        path = tmp_path / "bad.json"
        path.write_text('{"rank": "two", "rays": [], "cones": []}')
        with pytest.raises(FanFileError, match="field rank"):
            FanFile.from_path(path)

    def test_unknown_field_rejected(self, tmp_path: Path):
        """Extra keys are schema errors."""
        path = tmp_path / "bad.json"
        path.write_text('{"rank": 1, "rays": [[1]], "cones": [[0]], "name": "x"}')
        with pytest.raises(FanFileError, match="field name"):
            FanFile.from_path(path)


class TestFanFileValidation:
    """Tests for the structural checks of FanFile."""

    def test_ray_length_mismatch(self):
        """Every ray has rank entries."""
        with pytest.raises(ValidationError, match="expected rank 2"):
            FanFile(rank=2, rays=[[1, 0, 0]], cones=[])

    def test_zero_ray(self):
        """Zero vectors are not rays."""
        with pytest.raises(ValidationError, match="zero vector"):
            FanFile(rank=2, rays=[[0, 0]], cones=[])

    def test_missing_ray_index(self):
        """Cones may only refer to listed rays."""
        with pytest.raises(ValidationError, match=r"missing rays \[5\]"):
            FanFile(rank=2, rays=[[1, 0]], cones=[[0, 5]])


class TestFanFileWriting:
    """Tests for the normalized output form."""

    def test_from_fan_is_canonical(self):
        """Rays are sorted and cones listed by sorted ray indices."""
        data = FanFile.from_fan(projective_space_fan(2))
        assert data.rays == [[-1, -1], [0, 1], [1, 0]]
        assert data.cones == [[0, 1], [0, 2], [1, 2]]

    def test_to_json_layout(self):
        """One key per line, byte-deterministic."""
        text = FanFile.from_fan(projective_space_fan(2)).to_json()
        assert text == (
            "{\n"
            '  "rank": 2,\n'
            '  "rays": [[-1, -1], [0, 1], [1, 0]],\n'
            '  "cones": [[0, 1], [0, 2], [1, 2]]\n'
            "}\n"
        )
        assert json.loads(text)["rank"] == 2

    def test_write_yaml_and_reload(self, tmp_path: Path):
        """A written YAML file loads back to the same fan."""
        fan = projective_space_fan(2)
        path = FanFile.from_fan(fan).write(tmp_path / "sub" / "p2.yaml")
        assert path.exists()
        assert FanFile.from_path(path).to_fan() == fan


class TestCohomologyGroup:
    """Tests for CohomologyGroup."""

    @pytest.mark.parametrize(
        ("free_rank", "torsion", "text"),
        [(0, [], "0"), (1, [], "Z"), (3, [], "Z^3"), (0, [2], "Z/2"), (1, [2, 4], "Z + Z/2 + Z/4")],
    )
    def test_str(self, free_rank, torsion, text):
        """Groups print in additive notation."""
        assert str(CohomologyGroup(free_rank=free_rank, torsion=torsion)) == text

    def test_torsion_must_exceed_one(self):
        """Invariant factors of 1 are not torsion."""
        with pytest.raises(ValidationError):
            CohomologyGroup(free_rank=0, torsion=[1])

    def test_torsion_divisibility_chain(self):
        """Torsion coefficients divide each other in order."""
        with pytest.raises(ValidationError, match="divisibility"):
            CohomologyGroup(free_rank=0, torsion=[2, 3])

    def test_serializes_rank_alias(self):
        """JSON uses 'rank' for the free rank."""
        group = CohomologyGroup(free_rank=2, torsion=[3])
        assert group.model_dump(by_alias=True) == {"rank": 2, "torsion": [3]}

    def test_is_zero(self):
        """Only the trivial group is zero."""
        assert CohomologyGroup(free_rank=0).is_zero
        assert not CohomologyGroup(free_rank=0, torsion=[2]).is_zero


class TestCohomologyTable:
    """Tests for table lookups."""

    def _table(self) -> CohomologyTable:
        return CohomologyTable(
            rank=1,
            p_values=[0, 1],
            entries={
                "0,0": CohomologyGroup(free_rank=1),
                "0,1": CohomologyGroup(free_rank=0),
                "1,0": CohomologyGroup(free_rank=2),
                "1,1": CohomologyGroup(free_rank=1),
            },
        )

    def test_rank_of_defaults_to_zero(self):
        """Missing entries read as the zero group."""
        table = self._table()
        assert table.rank_of(0, 0) == 1
        assert table.rank_of(5, 5) == 0

    def test_diagonal(self):
        """The diagonal lists rank H^p(Λ^p)."""
        assert self._table().diagonal() == [1, 1]

    def test_off_diagonal(self):
        """Nonzero ranks off the allowed offsets are reported."""
        table = self._table()
        assert table.off_diagonal() == {"1,0": 2}
        assert table.off_diagonal(allowed={-1, 0}) == {}


class TestVerificationReport:
    """Tests for report verdicts and JSON form."""

    def test_all_passed_is_pass(self):
        """A report whose checks all pass has verdict PASS."""
        report = VerificationReport.from_checks("cone", [CheckResult(name="a", passed=True)])
        assert report.verdict is Verdict.PASS
        assert report.failed_checks == []

    def test_any_failure_is_fail(self):
        """One failed check makes the verdict FAIL."""
        checks = [CheckResult(name="a", passed=True), CheckResult(name="b", passed=False, detail="x")]
        report = VerificationReport.from_checks("cone", checks)
        assert report.verdict is Verdict.FAIL
        assert [c.name for c in report.failed_checks] == ["b"]

    def test_hypothesis_violation(self):
        """Hypothesis violations carry their reason."""
        report = VerificationReport.hypothesis_violation("complete-simplicial", "fan is not complete")
        assert report.verdict is Verdict.HYPOTHESIS_VIOLATION
        assert report.checks[0].detail == "fan is not complete"

    def test_to_json(self):
        """JSON uses aliases and omits empty optional fields."""
        table = CohomologyTable(rank=0, p_values=[0], entries={"0,0": CohomologyGroup(free_rank=1)}, betti=[1])
        report = VerificationReport.from_checks("cone", [CheckResult(name="a", passed=True)], table)
        data = json.loads(report.to_json())
        assert data["verdict"] == "PASS"
        assert data["betti"] == [1]
        assert data["table"]["entries"]["0,0"] == {"rank": 1, "torsion": []}
        assert "complexes" not in data
        assert "note" not in data["table"]


class TestComplexDump:
    """Tests for the --emit-complex payload."""

    def test_from_complex(self):
        """Degrees and coboundary rows of C(P^2, Λ^1)."""
        dump = ComplexDump.from_complex(build_ishida(projective_space_fan(2), 1))
        assert dump.degrees == [2, 3, 0]
        assert len(dump.coboundaries) == 2
        assert len(dump.coboundaries[0]) == 3
        assert all(len(row) == 2 for row in dump.coboundaries[0])
        assert dump.coboundaries[1] == []


class TestRunConfig:
    """Tests for CLI run configuration."""

    @pytest.mark.parametrize(("text", "values"), [("1..3", [1, 2, 3]), ("2", [2]), ("0..0", [0])])
    def test_parse_p_range(self, text, values):
        """Ranges are inclusive."""
        assert parse_p_range(text) == values

    def test_parse_p_range_rejects_garbage(self):
        """Unparseable ranges raise ValueError."""
        with pytest.raises(ValueError, match="p-range"):
            parse_p_range("one..two")

    @pytest.mark.parametrize("text", ["3..1", "2..-1"])
    def test_parse_p_range_rejects_reversed(self, text):
        """A range whose end precedes its start is an error, not an empty list."""
        with pytest.raises(ValueError, match="Empty p-range"):
            parse_p_range(text)

    def test_exactly_one_source(self):
        """Neither or both sources is an error."""
        with pytest.raises(ValidationError, match="Exactly one"):
            RunConfig(command="cohomology")
        with pytest.raises(ValidationError, match="Exactly one"):
            RunConfig(command="cohomology", input_path=Path("a.json"), builder_spec="pr:2")

    def test_from_source_path(self, p2_file: Path):
        """Existing files are treated as input paths."""
        config = RunConfig.from_source("cohomology", str(p2_file))
        assert config.input_path == p2_file
        assert config.load_fan() == projective_space_fan(2)

    def test_from_source_spec(self):
        """Anything else is a builder spec."""
        config = RunConfig.from_source("cohomology", "pr:2")
        assert config.builder_spec == "pr:2"
        assert config.load_fan() == projective_space_fan(2)

    def test_resolve_p_values(self):
        """Default is the full range; values outside [0, r] are rejected."""
        assert RunConfig(command="c", builder_spec="pr:2").resolve_p_values(2) == [0, 1, 2]
        with pytest.raises(ValueError, match=r"outside \[0, 2\]"):
            RunConfig(command="c", builder_spec="pr:2", p_values=[3]).resolve_p_values(2)
