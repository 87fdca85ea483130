"""Exact integer and rational linear algebra.

Matrices are numpy arrays with ``dtype=object`` holding Python ints (or
``Fraction`` for rational work), so every entry is arbitrary precision.
No floating point is used anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math
from typing import Iterable, Sequence

import numpy as np
from loguru import logger

LatticeVector = tuple[int, ...]


class LinalgError(ValueError):
    """Raised when an exact linear algebra precondition fails."""


class RankDisagreementError(LinalgError):
    """SNF rank and rational elimination rank differ (signals a bug)."""


@dataclass(frozen=True, eq=False)
class SmithDecomposition:
    """U·A·V = D with U, V unimodular and D diagonal with d1 | d2 | ..."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray

    @property
    def invariant_factors(self) -> list[int]:
        diag = [self.D[i, i] for i in range(min(self.D.shape))]
        return [int(d) for d in diag if d != 0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


########################################################
# Construction helpers
########################################################


def as_matrix(rows: Iterable[Sequence[int]], ncols: int | None = None) -> np.ndarray:
    """Build an object-dtype integer matrix from row sequences."""
    rows = [list(r) for r in rows]
    if not rows:
        if ncols is None:
            raise LinalgError("Cannot infer the column count of an empty matrix")
        return np.zeros((0, ncols), dtype=object)
    width = len(rows[0]) if ncols is None else ncols
    matrix = np.zeros((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise LinalgError(f"Row {i} has length {len(row)}, expected {width}")
        for j, entry in enumerate(row):
            matrix[i, j] = int(entry)
    return matrix


def identity(n: int) -> np.ndarray:
    matrix = np.zeros((n, n), dtype=object)
    for i in range(n):
        matrix[i, i] = 1
    return matrix


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def mat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact matrix product, including empty inner dimensions."""
    if A.shape[1] != B.shape[0]:
        raise LinalgError(f"Shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0 or A.shape[0] == 0 or B.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return A.dot(B)


def is_zero(A: np.ndarray) -> bool:
    return all(entry == 0 for entry in A.flat)


def to_rows(A: np.ndarray) -> list[LatticeVector]:
    return [tuple(int(x) for x in row) for row in A]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v, strict=True))


def _swap_rows(A: np.ndarray, i: int, j: int) -> None:
    if i != j:
        A[[i, j]] = A[[j, i]]


def _swap_cols(A: np.ndarray, i: int, j: int) -> None:
    if i != j:
        A[:, [i, j]] = A[:, [j, i]]


########################################################
# Normal forms
########################################################


def hnf(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Row Hermite normal form.

    Returns (H, U) with U unimodular and U·A = H. Pivots are positive and the
    entries above each pivot are reduced into [0, pivot). Zero rows come last.

    Example:
        >>> H, U = hnf(as_matrix([[2, 4], [6, 8]]))
        >>> to_rows(H)
        [(2, 0), (0, 4)]
    """
    H = np.array(A, dtype=object, copy=True)
    m, n = H.shape
    U = identity(m)
    row = 0
    for col in range(n):
        if row >= m:
            break
        while True:
            nonzero = [i for i in range(row, m) if H[i, col] != 0]
            if not nonzero:
                break
            pivot = min(nonzero, key=lambda i: abs(H[i, col]))
            _swap_rows(H, row, pivot)
            _swap_rows(U, row, pivot)
            finished = True
            for i in range(row + 1, m):
                if H[i, col] != 0:
                    q = H[i, col] // H[row, col]
                    H[i] -= q * H[row]
                    U[i] -= q * U[row]
                    if H[i, col] != 0:
                        finished = False
            if finished:
                break
        if H[row, col] == 0:
            continue
        if H[row, col] < 0:
            H[row] *= -1
            U[row] *= -1
        for i in range(row):
            q = H[i, col] // H[row, col]
            if q:
                H[i] -= q * H[row]
                U[i] -= q * U[row]
        row += 1
    return H, U


def snf(A: np.ndarray) -> SmithDecomposition:
    """
    Smith normal form by iterated gcd elimination, pivoting on the entry of
    minimal absolute value.

    The defining identity U·A·V = D and the divisibility chain are re-checked
    exactly before returning.
    """
    A = np.array(A, dtype=object, copy=True)
    D = np.array(A, dtype=object, copy=True)
    m, n = D.shape
    U, V = identity(m), identity(n)
    t = 0
    while t < min(m, n):
        candidates = [(i, j) for i in range(t, m) for j in range(t, n) if D[i, j] != 0]
        if not candidates:
            break
        i0, j0 = min(candidates, key=lambda ij: abs(D[ij[0], ij[1]]))
        _swap_rows(D, t, i0)
        _swap_rows(U, t, i0)
        _swap_cols(D, t, j0)
        _swap_cols(V, t, j0)

        clean = True
        for i in range(t + 1, m):
            q = D[i, t] // D[t, t]
            if q:
                D[i] -= q * D[t]
                U[i] -= q * U[t]
            if D[i, t] != 0:
                clean = False
        for j in range(t + 1, n):
            q = D[t, j] // D[t, t]
            if q:
                D[:, j] -= q * D[:, t]
                V[:, j] -= q * V[:, t]
            if D[t, j] != 0:
                clean = False
        if not clean:
            continue

        offender = next(
            ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i, j] % D[t, t] != 0),
            None,
        )
        if offender is not None:
            D[t] += D[offender[0]]
            U[t] += U[offender[0]]
            continue

        if D[t, t] < 0:
            D[t] *= -1
            U[t] *= -1
        t += 1

    decomposition = SmithDecomposition(U=U, D=D, V=V)
    if not np.array_equal(mat_mul(mat_mul(U, A), V), D):
        raise LinalgError("Smith decomposition failed its defining identity")
    factors = decomposition.invariant_factors
    if any(b % a != 0 for a, b in zip(factors, factors[1:])):
        raise LinalgError(f"Divisibility chain violated: {factors}")
    return decomposition


########################################################
# Rational elimination
########################################################


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        lead = M[r][c]
        M[r] = [x / lead for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                factor = M[i][c]
                M[i] = [a - factor * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def _fraction_rows(A: np.ndarray) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in A]


def rational_rank(A: np.ndarray) -> int:
    """Rank over Q by exact Gaussian elimination."""
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    _, pivots = _rref(_fraction_rows(A), A.shape[1])
    return len(pivots)


def checked_rank(A: np.ndarray) -> int:
    """Rank computed twice (SNF and rational elimination); both must agree."""
    snf_rank = snf(A).rank
    q_rank = rational_rank(A)
    if snf_rank != q_rank:
        raise RankDisagreementError(f"SNF rank {snf_rank} != rational rank {q_rank} for shape {A.shape}")
    return snf_rank


def rational_solve(A: np.ndarray, b: Sequence) -> list[Fraction] | None:
    """One solution x of A·x = b over Q, or None when the system is inconsistent."""
    m, n = A.shape
    if len(b) != m:
        raise LinalgError(f"Right-hand side has length {len(b)}, expected {m}")
    augmented = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(m)]
    reduced, pivots = _rref(augmented, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, col in zip(reduced, pivots):
        x[col] = row[n]
    return x


def determinant(A: np.ndarray) -> Fraction:
    """Exact determinant of a square integer or rational matrix."""
    n, m = A.shape
    if n != m:
        raise LinalgError(f"Determinant of non-square matrix {A.shape}")
    M = _fraction_rows(A)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if M[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            M[c], M[pivot] = M[pivot], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                factor = M[i][c] / M[c][c]
                M[i] = [a - factor * b for a, b in zip(M[i], M[c])]
    return det


def express_in_basis(basis: Sequence[Sequence[int]], targets: Sequence[Sequence], ncols: int) -> np.ndarray:
    """
    Integer coordinates of each target row in terms of the basis rows.

    Returns a (len(targets) x len(basis)) matrix X with X·B = T.
    Raises LinalgError if some target is outside the Q-span or has
    non-integral coordinates.
    """
    k = len(basis)
    out = zeros(len(targets), k)
    if not targets:
        return out
    if k == 0:
        if any(any(x != 0 for x in t) for t in targets):
            raise LinalgError("Nonzero target in the span of an empty basis")
        return out
    # Solve B^T x = t for all targets at once.
    columns = [[Fraction(basis[j][i]) for j in range(k)] for i in range(ncols)]
    augmented = [columns[i] + [Fraction(t[i]) for t in targets] for i in range(ncols)]
    reduced, pivots = _rref(augmented, k)
    if len(pivots) != k:
        raise LinalgError("Basis rows are linearly dependent")
    for t_index, target in enumerate(targets):
        coords = [Fraction(0)] * k
        for row, col in zip(reduced, pivots):
            coords[col] = row[k + t_index]
        rebuilt = [sum(coords[j] * basis[j][i] for j in range(k)) for i in range(ncols)]
        if any(rebuilt[i] != target[i] for i in range(ncols)):
            raise LinalgError(f"Target {list(target)} is not in the span of the basis")
        for j, value in enumerate(coords):
            if value.denominator != 1:
                raise LinalgError(f"Non-integral coordinate {value} for target {list(target)}")
            out[t_index, j] = int(value)
    return out


########################################################
# Lattices
########################################################


def primitive(v: Sequence[int]) -> LatticeVector:
    """Divide a nonzero integer vector by the gcd of its entries."""
    g = math.gcd(*(int(x) for x in v))
    if g == 0:
        raise LinalgError("The zero vector has no primitive representative")
    return tuple(int(x) // g for x in v)


def primitive_from_rational(v: Sequence[Fraction]) -> LatticeVector:
    """Clear denominators of a nonzero rational vector and make it primitive."""
    scale = math.lcm(*(Fraction(x).denominator for x in v))
    return primitive([int(Fraction(x) * scale) for x in v])


def kernel_basis(A: np.ndarray) -> list[LatticeVector]:
    """
    HNF-reduced Z-basis of {x in Z^n : A·x = 0}.

    The kernel of an integer map is saturated, so the result spans a saturated
    sublattice.
    """
    m, n = A.shape
    if n == 0:
        return []
    if m == 0:
        return to_rows(identity(n))
    H, U = hnf(np.array(A, dtype=object).T)
    rank = sum(1 for row in H if any(x != 0 for x in row))
    K = U[rank:]
    if K.shape[0] == 0:
        return []
    K_reduced, _ = hnf(K)
    return [row for row in to_rows(K_reduced) if any(row)]


def saturate(vectors: Sequence[Sequence[int]]) -> list[LatticeVector]:
    """Basis of (Q-span of vectors) ∩ Z^n, HNF-reduced."""
    if not vectors:
        return []
    A = as_matrix(vectors)
    if rational_rank(A) == 0:
        return []
    orthogonal = kernel_basis(A)
    if not orthogonal:
        return to_rows(identity(A.shape[1]))
    return kernel_basis(as_matrix(orthogonal))


def is_saturated(vectors: Sequence[Sequence[int]]) -> bool:
    """True when the span of the vectors has index 1 in its saturation."""
    if not vectors:
        return True
    return all(d == 1 for d in snf(as_matrix(vectors)).invariant_factors)


def quotient_lattice(ambient_rank: int, S: Sequence[Sequence[int]]) -> tuple[np.ndarray, int]:
    """
    Projection Z^n -> Z^(n - rank S) with kernel exactly span(S).

    The rows of the projection are an HNF basis of the annihilator of S, which
    is saturated in the dual lattice, so the projection is surjective.
    """
    if not S:
        return identity(ambient_rank), ambient_rank
    if not is_saturated(S):
        raise LinalgError("Sublattice is not saturated; the quotient would have torsion")
    rows = kernel_basis(as_matrix(S, ambient_rank))
    proj = as_matrix(rows, ambient_rank)
    logger.debug("Quotient lattice of rank {q} in Z^{n}", q=len(rows), n=ambient_rank)
    return proj, len(rows)


def lift_through(proj: np.ndarray, target: Sequence[int]) -> LatticeVector:
    """An integer preimage of target under a surjective lattice map."""
    m, n = proj.shape
    if m == 0:
        return tuple([0] * n)
    decomposition = snf(proj)
    y = mat_mul(decomposition.U, as_matrix([target]).T)
    x = zeros(n, 1)
    for i in range(m):
        d = decomposition.D[i, i] if i < n else 0
        if d == 0:
            if y[i, 0] != 0:
                raise LinalgError(f"{list(target)} is not in the image of the projection")
            continue
        if y[i, 0] % d != 0:
            raise LinalgError(f"{list(target)} is not in the image of the projection")
        x[i, 0] = y[i, 0] // d
    lifted = mat_mul(decomposition.V, x)
    return tuple(int(v) for v in lifted[:, 0])
