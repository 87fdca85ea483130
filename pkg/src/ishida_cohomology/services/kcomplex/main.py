"""
The orientation-twisted double complex of a complete simplicial fan.

K^{i,j} = ⊕_{φ ∈ Δ(r-i)} ⊕_{σ ∈ Δ(j), σ ≼ φ} Λ^(p-j)(M ∩ σ-perp) ⊗ (det φ)^(-1)

d'' is Ishida's coboundary of the face fan of each φ, and d' contracts φ to
its facets ψ ∋ σ with coefficient (-1)^j c(ψ, φ). Everything is over Q, with
det φ generated by the wedge of the primitive rays of φ in canonical order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from loguru import logger

from ishida_cohomology.pydantic_models import CheckResult
from ishida_cohomology.services.exterior.main import contraction_matrix, wedge_dim
from ishida_cohomology.services.homology.main import cohomology
from ishida_cohomology.services.ishida.main import block_rank, build_ishida
from ishida_cohomology.services.linalg.main import (
    LinalgError,
    as_matrix,
    determinant,
    is_zero,
    mat_mul,
    rational_rank,
    rational_solve,
    zeros,
)
from ishida_cohomology.services.polyhedral.main import (
    Cone,
    Fan,
    FanError,
    NonSimplicialFanError,
    facet_incidence,
)

Pair = tuple[Cone, Cone]


class DoubleComplexError(RuntimeError):
    pass


def orientation_map(psi: Cone, phi: Cone) -> Fraction:
    """
    The rational c with n ∧ gen(psi) = c · gen(phi) in Λ^(dim phi)(N ∩ R phi)_Q.

    n is a lift of the primitive normal of phi relative to psi; the
    result does not depend on the lift. The sign does depend on the ray
    order of both cones, which is the sorted order of make_cone.

    Example:
        >>> orientation_map(make_cone([(1, 0)]), make_cone([(1, 0), (1, 2)]))
        Fraction(-1, 2)
    """
    if not (psi.simplicial and phi.simplicial):
        raise NonSimplicialFanError("Orientation modules are only defined here for simplicial cones")
    n = facet_incidence(psi, phi).normal
    columns = as_matrix(phi.rays, phi.ambient_rank).T
    coordinates = []
    for v in (n,) + psi.rays:
        x = rational_solve(columns, v)
        if x is None:
            raise LinalgError(f"{list(v)} is not in the span of {phi}")
        coordinates.append(x)
    return determinant(np.array(coordinates, dtype=object))


@dataclass(frozen=True, eq=False)
class DoubleComplex:
    """
    Blocks K^{i,j} with d' : K^{i,j} -> K^{i+1,j} and d'' : K^{i,j} -> K^{i,j+1}.

    `index[(i, j)]` maps each (phi, sigma) pair to its slice in K^{i,j}.
    """

    rank: int
    p: int
    index: dict[tuple[int, int], dict[Pair, tuple[int, int]]]
    dims: dict[tuple[int, int], int]
    d_prime: dict[tuple[int, int], np.ndarray]
    d_second: dict[tuple[int, int], np.ndarray]

    def dim(self, i: int, j: int) -> int:
        return self.dims.get((i, j), 0)

    def prime(self, i: int, j: int) -> np.ndarray:
        return self.d_prime.get((i, j), zeros(self.dim(i + 1, j), self.dim(i, j)))

    def second(self, i: int, j: int) -> np.ndarray:
        return self.d_second.get((i, j), zeros(self.dim(i, j + 1), self.dim(i, j)))

    def total_degree(self, k: int) -> int:
        return sum(self.dim(i, k - i) for i in range(k + 1))

    def total_differential(self, k: int) -> np.ndarray:
        """d' + d'' from ⊕_{i+j=k} K^{i,j} to ⊕_{i+j=k+1} K^{i,j}."""
        source = [(i, k - i) for i in range(k + 1)]
        target = [(i, k + 1 - i) for i in range(k + 2)]
        col_offset = _offsets(self, source)
        row_offset = _offsets(self, target)
        D = zeros(self.total_degree(k + 1), self.total_degree(k))
        for i, j in source:
            c0 = col_offset[(i, j)]
            c1 = c0 + self.dim(i, j)
            r0 = row_offset[(i + 1, j)]
            D[r0 : r0 + self.dim(i + 1, j), c0:c1] = self.prime(i, j)
            r0 = row_offset[(i, j + 1)]
            D[r0 : r0 + self.dim(i, j + 1), c0:c1] = self.second(i, j)
        return D


def _offsets(K: DoubleComplex, bidegrees: list[tuple[int, int]]) -> dict[tuple[int, int], int]:
    offsets, running = {}, 0
    for key in bidegrees:
        offsets[key] = running
        running += K.dim(*key)
    return offsets


def _require_complete_simplicial(fan: Fan) -> None:
    if not fan.is_simplicial:
        raise NonSimplicialFanError("The double complex needs a simplicial fan")
    if not fan.is_complete:
        raise FanError("The double complex needs a complete fan")


def _check_identities(K: DoubleComplex) -> None:
    r = K.rank
    for i in range(r + 1):
        for j in range(r + 1):
            if not is_zero(mat_mul(K.prime(i + 1, j), K.prime(i, j))):
                raise DoubleComplexError(f"(d')^2 != 0 at ({i}, {j})")
            if not is_zero(mat_mul(K.second(i, j + 1), K.second(i, j))):
                raise DoubleComplexError(f"(d'')^2 != 0 at ({i}, {j})")
            mixed = mat_mul(K.second(i + 1, j), K.prime(i, j)) + mat_mul(K.prime(i, j + 1), K.second(i, j))
            if not is_zero(mixed):
                raise DoubleComplexError(f"d'd'' + d''d' != 0 at ({i}, {j})")


def build_k(fan: Fan, p: int) -> DoubleComplex:
    """
    Assemble K for a complete simplicial fan and verify
    (d')^2 = (d'')^2 = d'd'' + d''d' = 0 exactly.
    """
    _require_complete_simplicial(fan)
    r = fan.rank
    if not 0 <= p <= r:
        raise FanError(f"p must lie in [0, {r}], got {p}")

    index: dict[tuple[int, int], dict[Pair, tuple[int, int]]] = {}
    dims: dict[tuple[int, int], int] = {}
    for i in range(r + 1):
        for j in range(r + 1):
            offset, slots = 0, {}
            for phi in fan.by_dim[r - i]:
                for sigma in fan.by_dim[j]:
                    if not set(sigma.rays) <= set(phi.rays):
                        continue
                    size = block_rank(r, sigma, p, j)
                    slots[(phi, sigma)] = (offset, offset + size)
                    offset += size
            index[(i, j)] = slots
            dims[(i, j)] = offset

    orientation: dict[Pair, Fraction] = {}
    d_prime: dict[tuple[int, int], np.ndarray] = {}
    d_second: dict[tuple[int, int], np.ndarray] = {}
    for (i, j), slots in index.items():
        if i < r:
            D = zeros(dims.get((i + 1, j), 0), dims[(i, j)])
            for (phi, sigma), (c0, c1) in slots.items():
                for psi in fan.face_relation[phi]:
                    target = index[(i + 1, j)].get((psi, sigma))
                    if target is None or c0 == c1:
                        continue
                    if (psi, phi) not in orientation:
                        orientation[(psi, phi)] = orientation_map(psi, phi)
                    sign = -1 if j % 2 else 1
                    for offset in range(c1 - c0):
                        D[target[0] + offset, c0 + offset] = sign * orientation[(psi, phi)]
            d_prime[(i, j)] = D
        if j < r:
            D = zeros(dims.get((i, j + 1), 0), dims[(i, j)])
            for (phi, sigma), (c0, c1) in slots.items():
                for tau in fan.cofaces[sigma]:
                    target = index[(i, j + 1)].get((phi, tau))
                    if target is None:
                        continue
                    D[target[0] : target[1], c0:c1] = contraction_matrix(facet_incidence(sigma, tau), p - j)
            d_second[(i, j)] = D

    K = DoubleComplex(rank=r, p=p, index=index, dims=dims, d_prime=d_prime, d_second=d_second)
    _check_identities(K)
    logger.debug("Built double complex for p={p} with {n} nonzero blocks", p=p, n=sum(1 for d in dims.values() if d))
    return K


def _ranks(degrees: list[int], maps: list[np.ndarray]) -> list[int]:
    """Rational cohomology ranks of a complex given as degree dims and maps degree q -> q+1."""
    rank_of = [rational_rank(M) if M.size else 0 for M in maps]
    return [dim - rank_of[q] - (rank_of[q - 1] if q > 0 else 0) for q, dim in enumerate(degrees)]


def total_cohomology_check(fan: Fan, p: int) -> list[CheckResult]:
    """
    Compare the total cohomology of K with Ishida cohomology, and check that
    rows are acyclic off j = 0 and columns reproduce C^j(Δ, Λ^p) at i = 0.
    """
    K = build_k(fan, p)
    r = fan.rank
    checks = [CheckResult(name=f"double complex identities p={p}", passed=True)]

    degrees = [K.total_degree(k) for k in range(2 * r + 1)]
    maps = [K.total_differential(k) for k in range(2 * r + 1)]
    total = _ranks(degrees, maps)
    ishida_cx = build_ishida(fan, p)
    ishida = [g.free_rank for g in cohomology(ishida_cx)]
    expected = ishida + [0] * (len(total) - len(ishida))
    checks.append(
        CheckResult(
            name=f"total cohomology p={p}",
            passed=total == expected,
            detail=f"total {total}, ishida {expected}",
        )
    )

    ishida_degrees = ishida_cx.degrees
    for i in range(r + 1):
        row = _ranks([K.dim(i, j) for j in range(r + 1)], [K.second(i, j) for j in range(r + 1)])
        want = [len(fan.by_dim[r - i]) * wedge_dim(i, p)] + [0] * r
        checks.append(CheckResult(name=f"row i={i} p={p}", passed=row == want, detail=f"got {row}, want {want}"))
    for j in range(r + 1):
        column = _ranks([K.dim(i, j) for i in range(r + 1)], [K.prime(i, j) for i in range(r + 1)])
        want = [ishida_degrees[j]] + [0] * r
        checks.append(
            CheckResult(name=f"column j={j} p={p}", passed=column == want, detail=f"got {column}, want {want}")
        )
    return checks
