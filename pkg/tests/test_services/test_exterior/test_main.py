"""Tests for exterior powers and contraction matrices."""
from dataclasses import replace
import random

import numpy as np
import pytest  # type: ignore[import-not-found]
from hypothesis import given, settings, strategies as st  # type: ignore[import-not-found]

from ishida_cohomology.services.exterior.main import (  # type: ignore[import-not-found]
    BasedSublattice,
    WedgeSpace,
    annihilator_basis,
    compound_matrix,
    contraction_matrix,
    interior_product_matrix,
    wedge_dim,
)
from ishida_cohomology.services.fuzz.main import random_simplicial_fan  # type: ignore[import-not-found]
from ishida_cohomology.services.linalg.main import (  # type: ignore[import-not-found]
    LinalgError,
    as_matrix,
    dot,
    is_zero,
    mat_mul,
    to_rows,
)
from ishida_cohomology.services.polyhedral.main import Cone, facet_incidence, make_cone, zero_cone  # type: ignore

vectors3 = st.lists(st.integers(-4, 4), min_size=3, max_size=3)

STANDARD3 = BasedSublattice(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def iota(n, k):
    return interior_product_matrix(STANDARD3, n, k)


def wedge_column(*vectors):
    """Coordinates of v_1 ∧ ... ∧ v_k in the lexicographic wedge basis of Z^3."""
    return compound_matrix(as_matrix(vectors, 3).T, len(vectors))


class TestInteriorProduct:
    """Tests for interior product matrices on Λ(Z^3)."""

    def test_basis_element(self):
        """iota_n(e0 ∧ e1) = n0 e1 - n1 e0."""
        e0_e1 = wedge_column((1, 0, 0), (0, 1, 0))
        assert to_rows(mat_mul(iota((1, 0, 0), 2), e0_e1)) == [(0,), (1,), (0,)]
        assert to_rows(mat_mul(iota((0, 1, 0), 2), e0_e1)) == [(-1,), (0,), (0,)]

    def test_shapes(self):
        """iota_n maps Λ^k to Λ^(k-1)."""
        assert iota((1, 2, 3), 1).shape == (1, 3)
        assert iota((1, 2, 3), 2).shape == (3, 3)
        assert iota((1, 2, 3), 3).shape == (3, 1)

    @settings(derandomize=True, max_examples=50)
    @given(vectors3, vectors3)
    def test_contractions_anticommute(self, u, v):
        """iota_u ∘ iota_v = -iota_v ∘ iota_u, and iota_u ∘ iota_u = 0."""
        for k in (2, 3):
            uv = mat_mul(iota(u, k - 1), iota(v, k))
            vu = mat_mul(iota(v, k - 1), iota(u, k))
            assert np.array_equal(uv, -vu)
            assert is_zero(mat_mul(iota(u, k - 1), iota(u, k)))

    @settings(derandomize=True, max_examples=50)
    @given(vectors3, vectors3, vectors3)
    def test_leibniz_degree_two(self, u, v, n):
        """iota_n(u ∧ v) = <u, n> v - <v, n> u."""
        expected = as_matrix([[dot(u, n) * v[i] - dot(v, n) * u[i]] for i in range(3)])
        assert np.array_equal(mat_mul(iota(n, 2), wedge_column(u, v)), expected)

    @settings(derandomize=True, max_examples=50)
    @given(vectors3, vectors3, vectors3, vectors3)
    def test_leibniz_degree_three(self, u, v, w, n):
        """iota_n(u ∧ v ∧ w) = <u,n> v∧w - <v,n> u∧w + <w,n> u∧v."""
        expected = (
            dot(u, n) * wedge_column(v, w) - dot(v, n) * wedge_column(u, w) + dot(w, n) * wedge_column(u, v)
        )
        assert np.array_equal(mat_mul(iota(n, 3), wedge_column(u, v, w)), expected)


class TestWedgeSpaces:
    """Tests for wedge bases of sublattices."""

    @pytest.mark.parametrize(("rank", "k", "dim"), [(3, 0, 1), (3, 1, 3), (3, 2, 3), (3, 3, 1), (3, 4, 0), (2, -1, 0)])
    def test_wedge_dim(self, rank, k, dim):
        """Binomial coefficients, zero outside [0, rank]."""
        assert wedge_dim(rank, k) == dim

    def test_basis_index_is_lexicographic(self):
        """Index tuples are increasing and in lexicographic order."""
        space = WedgeSpace(BasedSublattice(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1))), 2)
        assert space.basis_index == ((0, 1), (0, 2), (1, 2))
        assert space.position[(1, 2)] == 2

    def test_annihilator_basis(self):
        """M ∩ ray(1, 2)-perp has basis (2, -1)."""
        assert annihilator_basis(make_cone([(1, 2)])).basis == ((2, -1),)
        assert annihilator_basis(zero_cone(2)).basis == ((1, 0), (0, 1))

    def test_unsaturated_basis_rejected(self):
        """Index-2 bases are not accepted as sublattices."""
        with pytest.raises(LinalgError):
            BasedSublattice(2, ((2, 0),)).check()

    @pytest.mark.parametrize(("orthogonal", "message"), [(((2, 0),), "saturated"), ((), "rank 0")])
    def test_annihilator_basis_is_checked(self, orthogonal, message):
        """A cone whose stored annihilator is unsaturated or of the wrong rank is rejected."""
        cone = Cone(ambient_rank=2, rays=((0, 1),), dim=1, facet_normals=((0, 1),))
        cone.__dict__["orthogonal"] = orthogonal
        annihilator_basis.cache_clear()
        try:
            with pytest.raises(LinalgError, match=message):
                annihilator_basis(cone)
        finally:
            annihilator_basis.cache_clear()


class TestCompoundMatrix:
    """Tests for compound matrices."""

    def test_first_compound_is_matrix(self):
        """The first compound is the matrix itself."""
        C = as_matrix([[1, 2], [3, 4]])
        assert np.array_equal(compound_matrix(C, 1), C)

    def test_top_compound_is_determinant(self):
        """The top compound of a square matrix is its determinant."""
        assert to_rows(compound_matrix(as_matrix([[1, 2], [3, 4]]), 2)) == [(-2,)]

    def test_zeroth_compound(self):
        """The zeroth compound is [[1]]."""
        assert to_rows(compound_matrix(as_matrix([[5, 7]]), 0)) == [(1,)]


class TestContractionMatrix:
    """Tests for contraction between annihilator lattices."""

    def _ray_incidence(self):
        return facet_incidence(zero_cone(2), make_cone([(1, 0)]))

    def test_degree_one(self):
        """iota_(e1) on M sends e1* to 1 and e2* to 0."""
        assert to_rows(contraction_matrix(self._ray_incidence(), 1)) == [(1, 0)]

    def test_degree_two(self):
        """iota_(e1)(e1* ∧ e2*) = e2*, the basis of M ∩ ray-perp."""
        assert to_rows(contraction_matrix(self._ray_incidence(), 2)) == [(1,)]

    def test_degree_zero_maps_to_zero_space(self):
        """Degree 0 has nowhere to go."""
        assert contraction_matrix(self._ray_incidence(), 0).shape == (0, 1)

    def test_independent_of_lift(self):
        """Contraction is the same for any lift of the normal class."""
        sigma = make_cone([(1, 0, 0)])
        tau = make_cone([(1, 0, 0), (0, 1, 0)])
        inc = facet_incidence(sigma, tau)
        shifted = type(inc)(
            sigma=inc.sigma,
            tau=inc.tau,
            normal=tuple(a + 3 * b for a, b in zip(inc.normal, (1, 0, 0))),
            normal_class=inc.normal_class,
        )
        for k in (1, 2):
            assert np.array_equal(contraction_matrix(inc, k), contraction_matrix(shifted, k))

    @pytest.mark.parametrize("seed", range(10))
    def test_independent_of_lift_on_random_fans(self, seed):
        """Shifting each normal by a combination of the rays of sigma leaves every block unchanged."""
        rng = random.Random(f"lift-{seed}")
        fan = random_simplicial_fan(rng, 3, 2)
        for inc in fan.incidences:
            shift = [rng.randint(-3, 3) for _ in inc.sigma.rays]
            moved = tuple(
                x + sum(c * ray[i] for c, ray in zip(shift, inc.sigma.rays)) for i, x in enumerate(inc.normal)
            )
            shifted = replace(inc, normal=moved)
            for k in range(4 - inc.sigma.dim):
                assert np.array_equal(contraction_matrix(inc, k), contraction_matrix(shifted, k)), (inc, k)
