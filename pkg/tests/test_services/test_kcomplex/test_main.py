"""Tests for the orientation-twisted double complex."""
from fractions import Fraction

import pytest  # type: ignore[import-not-found]

from ishida_cohomology.services.kcomplex.main import (  # type: ignore[import-not-found]
    build_k,
    orientation_map,
    total_cohomology_check,
)
from ishida_cohomology.services.linalg.main import is_zero, mat_mul  # type: ignore[import-not-found]
from ishida_cohomology.services.polyhedral.builders import product_fan  # type: ignore[import-not-found]
from ishida_cohomology.services.polyhedral.main import (  # type: ignore[import-not-found]
    FanError,
    NonSimplicialFanError,
    make_cone,
    zero_cone,
)


class TestOrientationMap:
    """Tests for the orientation coefficient c(psi, phi)."""

    def test_non_unimodular_cone(self):
        """Over cone((1,0),(1,2)) the coefficient is -1/2."""
        assert orientation_map(make_cone([(1, 0)]), make_cone([(1, 0), (1, 2)])) == Fraction(-1, 2)

    def test_quadrant(self):
        """With canonical ray order, e1 into cone(e1, e2) has coefficient +1."""
        assert orientation_map(make_cone([(1, 0)]), make_cone([(1, 0), (0, 1)])) == 1

    def test_ray_over_zero_cone(self):
        """The zero cone into a ray has coefficient 1."""
        assert orientation_map(zero_cone(2), make_cone([(1, 0)])) == 1

    def test_non_simplicial_rejected(self):
        """Orientation modules are only built for simplicial cones."""
        square = make_cone([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)])
        facet = make_cone([(1, 0, 1), (0, 1, 1)])
        with pytest.raises(NonSimplicialFanError):
            orientation_map(facet, square)


class TestBuildK:
    """Tests for the blocks and identities of K."""

    def test_dimensions_projective_line(self, p1):
        """K^{0,0} = K^{0,1} = 2 and K^{1,0} = 1 for P^1 at p = 1."""
        K = build_k(p1, 1)
        assert K.dim(0, 0) == 2
        assert K.dim(0, 1) == 2
        assert K.dim(1, 0) == 1
        assert K.dim(1, 1) == 0

    def test_dimensions_projective_plane(self, p2):
        """K^{0,0} holds Λ^1(M) once per maximal cone."""
        assert build_k(p2, 1).dim(0, 0) == 6

    def test_total_differential_squares_to_zero(self, p2):
        """The total differential d' + d'' is a differential."""
        K = build_k(p2, 1)
        for k in range(4):
            assert is_zero(mat_mul(K.total_differential(k + 1), K.total_differential(k)))

    def test_needs_complete_fan(self, half_plane):
        """Non-complete fans are rejected."""
        with pytest.raises(FanError, match="complete"):
            build_k(half_plane, 1)

    def test_needs_simplicial_fan(self, square_pyramid):
        """Non-simplicial fans are rejected."""
        with pytest.raises(NonSimplicialFanError):
            build_k(square_pyramid, 1)

    def test_p_out_of_range(self, p1):
        """p must lie in [0, r]."""
        with pytest.raises(FanError, match="p must lie"):
            build_k(p1, 2)


class TestTotalCohomology:
    """Total cohomology of K against Ishida cohomology."""

    @pytest.mark.parametrize("p", [0, 1])
    def test_projective_line(self, p1, p):
        """All checks pass on P^1."""
        checks = total_cohomology_check(p1, p)
        assert all(c.passed for c in checks), [c for c in checks if not c.passed]

    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_projective_plane(self, p2, p):
        """All checks pass on P^2."""
        checks = total_cohomology_check(p2, p)
        assert all(c.passed for c in checks), [c for c in checks if not c.passed]

    def test_product_of_lines(self, p1):
        """All checks pass on P^1 x P^1 at p = 1."""
        checks = total_cohomology_check(product_fan(p1, p1), 1)
        assert all(c.passed for c in checks), [c for c in checks if not c.passed]

    def test_reports_total_ranks(self, p1):
        """The total-cohomology check names both rank lists."""
        checks = {c.name: c for c in total_cohomology_check(p1, 1)}
        assert checks["total cohomology p=1"].detail == "total [0, 1, 0], ishida [0, 1, 0]"
