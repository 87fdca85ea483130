"""Tests for exact linear algebra."""
from fractions import Fraction

import numpy as np
import pytest  # type: ignore[import-not-found]
from hypothesis import given, settings, strategies as st  # type: ignore[import-not-found]

from ishida_cohomology.services.linalg.main import (  # type: ignore[import-not-found]
    LinalgError,
    as_matrix,
    checked_rank,
    determinant,
    dot,
    express_in_basis,
    hnf,
    is_saturated,
    kernel_basis,
    lift_through,
    mat_mul,
    primitive,
    quotient_lattice,
    rational_rank,
    rational_solve,
    saturate,
    snf,
    to_rows,
)

matrix_strategy = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda shape: st.lists(
        st.lists(st.integers(-6, 6), min_size=shape[1], max_size=shape[1]),
        min_size=shape[0],
        max_size=shape[0],
    )
)


class TestHermite:
    """Tests for the row Hermite normal form."""

    def test_small_example(self):
        """Pivots are positive and entries above them reduced."""
        A = as_matrix([[2, 4], [6, 8]])
        H, U = hnf(A)
        assert to_rows(H) == [(2, 0), (0, 4)]
        assert np.array_equal(mat_mul(U, A), H)
        assert abs(determinant(U)) == 1

    def test_zero_rows_last(self):
        """Dependent rows reduce to zero rows at the bottom."""
        H, _ = hnf(as_matrix([[1, 2], [2, 4]]))
        assert to_rows(H) == [(1, 2), (0, 0)]


class TestSmith:
    """Tests for the Smith normal form."""

    @pytest.mark.parametrize(
        ("rows", "factors"),
        [
            ([[2, 4], [6, 8]], [2, 4]),
            ([[2, 0], [0, 3]], [1, 6]),
            ([[0, 0], [0, 0]], []),
            ([[1, 2, 3]], [1]),
        ],
    )
    def test_invariant_factors(self, rows, factors):
        """Known invariant factors of small matrices."""
        assert snf(as_matrix(rows)).invariant_factors == factors

    @settings(derandomize=True, max_examples=60)
    @given(matrix_strategy)
    def test_defining_identity(self, rows):
        """U·A·V = D with unimodular U, V and a diagonal divisibility chain."""
        A = as_matrix(rows)
        result = snf(A)
        D = mat_mul(mat_mul(result.U, A), result.V)
        assert np.array_equal(D, result.D)
        assert abs(determinant(result.U)) == 1
        assert abs(determinant(result.V)) == 1
        m, n = D.shape
        assert all(D[i, j] == 0 for i in range(m) for j in range(n) if i != j)
        factors = result.invariant_factors
        assert all(d > 0 for d in factors)
        assert all(b % a == 0 for a, b in zip(factors, factors[1:]))

    @settings(derandomize=True, max_examples=60)
    @given(matrix_strategy)
    def test_rank_agrees_with_elimination(self, rows):
        """SNF rank equals the rank over Q."""
        A = as_matrix(rows)
        assert snf(A).rank == rational_rank(A) == checked_rank(A)


class TestRationalElimination:
    """Tests for rank, solve and determinant over Q."""

    def test_rank_of_empty(self):
        """Empty matrices have rank 0."""
        assert rational_rank(as_matrix([], 3)) == 0

    def test_solve(self):
        """A consistent system yields a solution."""
        A = as_matrix([[1, 1], [1, -1]])
        assert rational_solve(A, [3, 1]) == [Fraction(2), Fraction(1)]

    def test_solve_inconsistent(self):
        """An inconsistent system yields None."""
        A = as_matrix([[1, 1], [2, 2]])
        assert rational_solve(A, [1, 3]) is None

    def test_determinant(self):
        """Exact determinants, including singular matrices."""
        assert determinant(as_matrix([[1, 2], [3, 4]])) == -2
        assert determinant(as_matrix([[1, 2], [2, 4]])) == 0

    def test_determinant_non_square(self):
        """Only square matrices have determinants."""
        with pytest.raises(LinalgError, match="non-square"):
            determinant(as_matrix([[1, 2]]))

    def test_express_in_basis(self):
        """Integer coordinates with respect to the basis rows."""
        X = express_in_basis([(1, 1), (0, 1)], [(2, 3)], 2)
        assert to_rows(X) == [(2, 1)]

    def test_express_in_basis_non_integral(self):
        """Half-integral coordinates are rejected."""
        with pytest.raises(LinalgError, match="Non-integral"):
            express_in_basis([(2, 0)], [(1, 0)], 2)

    def test_express_in_basis_outside_span(self):
        """Targets outside the span are rejected."""
        with pytest.raises(LinalgError, match="not in the span"):
            express_in_basis([(1, 0)], [(0, 1)], 2)


class TestLattices:
    """Tests for kernels, saturation and quotients."""

    def test_primitive(self):
        """The gcd is divided out and signs kept."""
        assert primitive((4, -6)) == (2, -3)
        with pytest.raises(LinalgError):
            primitive((0, 0))

    def test_kernel_basis(self):
        """The kernel of (1 1) is spanned by (1, -1)."""
        assert kernel_basis(as_matrix([[1, 1]])) == [(1, -1)]

    def test_kernel_of_injective_map(self):
        """Full column rank means a trivial kernel."""
        assert kernel_basis(as_matrix([[1, 0], [0, 1]])) == []

    def test_saturate(self):
        """(2, 0) saturates to (1, 0)."""
        assert saturate([(2, 0)]) == [(1, 0)]
        assert saturate([(1, 0), (0, 1)]) == [(1, 0), (0, 1)]

    def test_is_saturated(self):
        """A sublattice of index 2 in its span is not saturated."""
        assert not is_saturated([(2, 0)])
        assert not is_saturated([(1, 1), (1, -1)])
        assert is_saturated([(1, 0), (0, 1)])

    def test_quotient_lattice(self):
        """The projection kills exactly the span of S."""
        proj, rank = quotient_lattice(2, [(1, 1)])
        assert rank == 1
        assert all(dot(row, (1, 1)) == 0 for row in to_rows(proj))

    def test_quotient_of_unsaturated_rejected(self):
        """Quotients with torsion are refused."""
        with pytest.raises(LinalgError, match="not saturated"):
            quotient_lattice(2, [(2, 0)])

    def test_lift_through(self):
        """A lift maps back onto its target."""
        proj, _ = quotient_lattice(3, [(1, 2, 3)])
        target = (5, -2)
        lifted = lift_through(proj, target)
        assert tuple(dot(row, lifted) for row in to_rows(proj)) == target

    def test_shape_mismatch(self):
        """Products of incompatible shapes fail loudly."""
        with pytest.raises(LinalgError, match="Shape mismatch"):
            mat_mul(as_matrix([[1, 2]]), as_matrix([[1, 2]]))
