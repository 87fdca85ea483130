"""Shared fixtures."""
from pathlib import Path

import pytest  # type: ignore[import-not-found]

from ishida_cohomology.config import get_settings  # type: ignore[import-not-found]
from ishida_cohomology.services.polyhedral.builders import (  # type: ignore[import-not-found]
    hirzebruch_fan,
    projective_space_fan,
)
from ishida_cohomology.services.polyhedral.main import Fan, fan_from_cones, make_cone  # type: ignore


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are read once per test so env patches take effect."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def p1() -> Fan:
    return projective_space_fan(1)


@pytest.fixture
def p2() -> Fan:
    return projective_space_fan(2)


@pytest.fixture
def f1() -> Fan:
    return hirzebruch_fan(1)


@pytest.fixture
def half_plane() -> Fan:
    """{cone(e1, e2), cone(e2, -e1)}: convex, full-dimensional, not complete."""
    return fan_from_cones(2, [make_cone([(1, 0), (0, 1)]), make_cone([(0, 1), (-1, 0)])])


@pytest.fixture
def square_pyramid() -> Fan:
    """Face fan of the cone over a square, the smallest non-simplicial fan."""
    return fan_from_cones(3, [make_cone([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)])])


@pytest.fixture
def p2_file(tmp_path: Path) -> Path:
    path = tmp_path / "p2.json"
    path.write_text('{"rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "cones": [[0, 1], [1, 2], [0, 2]]}\n')
    return path
