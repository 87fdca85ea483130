"""
Exterior powers of saturated sublattices of M and interior products.

Wedge bases are indexed by increasing index tuples in lexicographic order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
import math
from typing import Sequence

import numpy as np

from ishida_cohomology.services.linalg.main import (
    LatticeVector,
    LinalgError,
    determinant,
    dot,
    express_in_basis,
    is_saturated,
    to_rows,
    zeros,
)
from ishida_cohomology.services.polyhedral.main import Cone, FacetIncidence


@dataclass(frozen=True)
class BasedSublattice:
    """A saturated sublattice of M with an ordered basis."""

    ambient_rank: int
    basis: tuple[LatticeVector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def check(self) -> None:
        if self.basis and not is_saturated(self.basis):
            raise LinalgError("Basis does not span a saturated sublattice")


@lru_cache(maxsize=None)
def annihilator_basis(sigma: Cone) -> BasedSublattice:
    """
    M ∩ sigma-perp with its canonical HNF basis.

    Raises:
        LinalgError: If the basis has rank other than r - dim sigma or is not saturated

    Example:
        >>> annihilator_basis(make_cone([(1, 2)])).basis
        ((2, -1),)
    """
    lattice = BasedSublattice(ambient_rank=sigma.ambient_rank, basis=sigma.orthogonal)
    if lattice.rank != sigma.ambient_rank - sigma.dim:
        raise LinalgError(f"Annihilator of {sigma} has rank {lattice.rank}, expected {sigma.ambient_rank - sigma.dim}")
    lattice.check()
    return lattice


def wedge_dim(sublattice_rank: int, k: int) -> int:
    if k < 0 or k > sublattice_rank:
        return 0
    return math.comb(sublattice_rank, k)


@dataclass(frozen=True)
class WedgeSpace:
    source: BasedSublattice
    degree: int

    @cached_property
    def basis_index(self) -> tuple[tuple[int, ...], ...]:
        if self.degree < 0 or self.degree > self.source.rank:
            return ()
        return tuple(combinations(range(self.source.rank), self.degree))

    @cached_property
    def position(self) -> dict[tuple[int, ...], int]:
        return {subset: i for i, subset in enumerate(self.basis_index)}

    @property
    def dim(self) -> int:
        return len(self.basis_index)


########################################################
# Matrices
########################################################


def compound_matrix(C: np.ndarray, k: int) -> np.ndarray:
    """k-th compound: entry (J, K) is the minor of C on rows J and columns K."""
    rows, cols = C.shape
    row_sets = list(combinations(range(rows), k)) if 0 <= k <= rows else []
    col_sets = list(combinations(range(cols), k)) if 0 <= k <= cols else []
    out = zeros(len(row_sets), len(col_sets))
    for a, J in enumerate(row_sets):
        for b, K in enumerate(col_sets):
            if k == 0:
                out[a, b] = 1
                continue
            minor = np.array([[C[j, c] for c in K] for j in J], dtype=object)
            out[a, b] = int(determinant(minor))
    return out


def interior_product_matrix(lattice: BasedSublattice, n: Sequence[int], k: int) -> np.ndarray:
    """
    Matrix of iota_n : Λ^k(L) -> Λ^(k-1)(L) in the wedge bases of L.

    Columns index the source basis, rows the target basis.
    """
    source = WedgeSpace(lattice, k)
    target = WedgeSpace(lattice, k - 1)
    pairing = [dot(m, n) for m in lattice.basis]
    out = zeros(target.dim, source.dim)
    for col, index in enumerate(source.basis_index):
        for pos, i in enumerate(index):
            key = index[:pos] + index[pos + 1 :]
            sign = -1 if pos % 2 else 1
            out[target.position[key], col] += sign * pairing[i]
    return out


def contraction_matrix(inc: FacetIncidence, k: int) -> np.ndarray:
    """
    Matrix of iota_n : Λ^k(M ∩ sigma-perp) -> Λ^(k-1)(M ∩ tau-perp).

    The image is computed inside Λ^(k-1)(M ∩ sigma-perp) and then rewritten
    in the wedge basis of M ∩ tau-perp through the compound of the basis
    change. Degree 0 maps to the zero space.
    """
    outer = annihilator_basis(inc.sigma)
    inner = annihilator_basis(inc.tau)
    source_dim = wedge_dim(outer.rank, k)
    if k <= 0:
        return zeros(0, source_dim)

    images = interior_product_matrix(outer, inc.normal, k)
    target_dim = wedge_dim(inner.rank, k - 1)
    if target_dim == 0:
        if any(x != 0 for x in images.flat):
            raise LinalgError(f"Contraction of degree {k} has a nonzero image in a zero space")
        return zeros(0, source_dim)

    change = express_in_basis(outer.basis, inner.basis, outer.ambient_rank)
    compound = compound_matrix(change, k - 1)
    try:
        coordinates = express_in_basis(to_rows(compound), to_rows(images.T), compound.shape[1])
    except LinalgError as exc:
        raise LinalgError(
            f"Contraction image for {inc.sigma} ≺ {inc.tau} escapes Λ^{k - 1}(M ∩ tau-perp)"
        ) from exc
    return np.array(coordinates.T, dtype=object)
