"""Ishida's p-th complex C^q(Δ, Λ^p) = ⊕_{σ ∈ Δ(q)} Λ^(p-q)(M ∩ σ-perp) as integer matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
import random
from typing import Iterable

import numpy as np
from loguru import logger

from ishida_cohomology.services.exterior.main import (
    annihilator_basis,
    compound_matrix,
    contraction_matrix,
    wedge_dim,
)
from ishida_cohomology.services.linalg.main import (
    checked_rank,
    determinant,
    express_in_basis,
    is_zero,
    mat_mul,
    quotient_lattice,
    to_rows,
    zeros,
)
from ishida_cohomology.services.polyhedral.main import (
    Cone,
    Fan,
    FanError,
    quotient_fan,
    star,
    star_removal,
)


class CoboundaryError(RuntimeError):
    """δ∘δ ≠ 0; carries the offending (sigma, tau, upsilon) triple."""

    def __init__(self, message: str, triple: tuple[Cone, Cone | None, Cone]) -> None:
        super().__init__(message)
        self.triple = triple


class ExactnessError(RuntimeError):
    pass


class CommutationError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class CochainComplex:
    """
    Free modules C^0..C^rank with coboundaries D^q : C^q -> C^(q+1).

    `component_index` maps (q, sigma) to the (start, stop) slice of sigma's
    block inside C^q.
    """

    rank: int
    p: int
    degrees: tuple[int, ...]
    coboundaries: tuple[np.ndarray, ...]
    cones: tuple[tuple[Cone, ...], ...] = ()
    component_index: dict[tuple[int, Cone], tuple[int, int]] = field(default_factory=dict)

    def coboundary(self, q: int) -> np.ndarray:
        """D^q, with zero maps outside the stored range."""
        if 0 <= q < len(self.coboundaries):
            return self.coboundaries[q]
        source = self.degrees[q] if 0 <= q < len(self.degrees) else 0
        target = self.degrees[q + 1] if 0 <= q + 1 < len(self.degrees) else 0
        return zeros(target, source)

    def block(self, q: int, sigma: Cone) -> slice:
        start, stop = self.component_index[(q, sigma)]
        return slice(start, stop)

    @classmethod
    def from_matrices(cls, degrees: Iterable[int], coboundaries: Iterable[np.ndarray]) -> CochainComplex:
        """A bare complex without cone bookkeeping."""
        degrees = tuple(degrees)
        matrices = tuple(coboundaries)
        for q, D in enumerate(matrices):
            if D.shape != (degrees[q + 1], degrees[q]):
                raise ValueError(f"D^{q} has shape {D.shape}, expected {(degrees[q + 1], degrees[q])}")
        return cls(rank=len(degrees) - 1, p=-1, degrees=degrees, coboundaries=matrices)


def block_rank(r: int, sigma: Cone, p: int, q: int) -> int:
    """Rank of Λ^(p-q)(M ∩ sigma-perp); zero when q > p."""
    return wedge_dim(r - sigma.dim, p - q)


def _find_failing_triple(cx: CochainComplex, q: int) -> tuple[Cone, Cone | None, Cone]:
    product = mat_mul(cx.coboundaries[q + 1], cx.coboundaries[q])
    for sigma in cx.cones[q]:
        for upsilon in cx.cones[q + 2]:
            if is_zero(product[cx.block(q + 2, upsilon), cx.block(q, sigma)]):
                continue
            between = [
                t for t in cx.cones[q + 1] if set(sigma.rays) <= set(t.rays) <= set(upsilon.rays)
            ]
            return sigma, (between[0] if between else None), upsilon
    raise AssertionError("nonzero product without a nonzero block")


def build_on_cones(
    fan: Fan, cones: Iterable[Cone], p: int, shuffle: random.Random | None = None
) -> CochainComplex:
    """
    Ishida's p-th complex over a star-closed subset of a fan's cones.

    Blocks of C^q follow the canonical cone order unless `shuffle` is given,
    in which case each degree is laid out in a random order drawn from it.

    Raises:
        FanError: If p is out of range
        CoboundaryError: If δ∘δ ≠ 0 (the offending triple is attached)
    """
    r = fan.rank
    if not 0 <= p <= r:
        raise FanError(f"p must lie in [0, {r}], got {p}")
    chosen = set(cones)
    by_degree = tuple(tuple(c for c in fan.by_dim[q] if c in chosen) for q in range(r + 1))
    if shuffle is not None:
        by_degree = tuple(tuple(shuffle.sample(layer, len(layer))) for layer in by_degree)

    component_index: dict[tuple[int, Cone], tuple[int, int]] = {}
    degrees = []
    for q, layer in enumerate(by_degree):
        offset = 0
        for sigma in layer:
            size = block_rank(r, sigma, p, q)
            component_index[(q, sigma)] = (offset, offset + size)
            offset += size
        degrees.append(offset)

    coboundaries = []
    for q in range(r):
        D = zeros(degrees[q + 1], degrees[q])
        if degrees[q] and degrees[q + 1]:
            for inc in fan.incidences:
                if inc.sigma.dim != q or inc.sigma not in chosen or inc.tau not in chosen:
                    continue
                rows = slice(*component_index[(q + 1, inc.tau)])
                cols = slice(*component_index[(q, inc.sigma)])
                D[rows, cols] = contraction_matrix(inc, p - q)
        coboundaries.append(D)

    cx = CochainComplex(
        rank=r,
        p=p,
        degrees=tuple(degrees),
        coboundaries=tuple(coboundaries),
        cones=by_degree,
        component_index=component_index,
    )
    for q in range(r - 1):
        if not is_zero(mat_mul(coboundaries[q + 1], coboundaries[q])):
            triple = _find_failing_triple(cx, q)
            raise CoboundaryError(f"δ∘δ ≠ 0 at degree {q} through {triple}", triple=triple)
    logger.debug("Built Ishida complex p={p} with degrees {d}", p=p, d=cx.degrees)
    return cx


def build_ishida(fan: Fan, p: int, shuffle: random.Random | None = None) -> CochainComplex:
    """
    Ishida's p-th complex of a fan.

    Example:
        >>> build_ishida(projective_space_fan(2), 1).degrees
        (2, 3, 0)
    """
    return build_on_cones(fan, fan.cones, p, shuffle=shuffle)


########################################################
# Star removal
########################################################


@dataclass(frozen=True, eq=False)
class SubcomplexSequence:
    """0 -> C(Star_rho) -> C(tilde) -> C(tilde minus Star_rho) -> 0, degreewise."""

    star: CochainComplex
    tilde: CochainComplex
    delta: CochainComplex
    inclusions: tuple[np.ndarray, ...]
    restrictions: tuple[np.ndarray, ...]


def _block_transfer(source: CochainComplex, target: CochainComplex, q: int) -> np.ndarray:
    """0/1 matrix sending each shared cone's block to the same block."""
    M = zeros(target.degrees[q], source.degrees[q])
    for sigma in source.cones[q]:
        if (q, sigma) not in target.component_index:
            continue
        rows, cols = target.block(q, sigma), source.block(q, sigma)
        for i, j in zip(range(rows.start, rows.stop), range(cols.start, cols.stop)):
            M[i, j] = 1
    return M


def _check_chain_map(maps: tuple[np.ndarray, ...], source: CochainComplex, target: CochainComplex, name: str) -> None:
    for q in range(source.rank):
        left = mat_mul(target.coboundary(q), maps[q])
        right = mat_mul(maps[q + 1], source.coboundary(q))
        if not np.array_equal(left, right):
            raise CommutationError(f"{name} does not commute with the coboundary in degree {q}")


def subcomplex_sequence(tilde: Fan, rho: Cone, p: int) -> SubcomplexSequence:
    """
    The short exact sequence of complexes attached to removing the star of rho.

    Exactness and the chain-map property are verified degreewise.
    """
    star_cx = build_on_cones(tilde, star(tilde, rho), p)
    tilde_cx = build_ishida(tilde, p)
    delta_cx = build_ishida(star_removal(tilde, rho), p)

    inclusions = tuple(_block_transfer(star_cx, tilde_cx, q) for q in range(tilde.rank + 1))
    restrictions = tuple(_block_transfer(tilde_cx, delta_cx, q) for q in range(tilde.rank + 1))

    for q in range(tilde.rank + 1):
        inc, res = inclusions[q], restrictions[q]
        if star_cx.degrees[q] + delta_cx.degrees[q] != tilde_cx.degrees[q]:
            raise ExactnessError(f"Ranks do not add up in degree {q}")
        if star_cx.degrees[q] and checked_rank(inc) != star_cx.degrees[q]:
            raise ExactnessError(f"Inclusion is not injective in degree {q}")
        if delta_cx.degrees[q] and checked_rank(res) != delta_cx.degrees[q]:
            raise ExactnessError(f"Restriction is not surjective in degree {q}")
        if not is_zero(mat_mul(res, inc)):
            raise ExactnessError(f"Restriction after inclusion is nonzero in degree {q}")
    _check_chain_map(inclusions, star_cx, tilde_cx, "Inclusion")
    _check_chain_map(restrictions, tilde_cx, delta_cx, "Restriction")
    logger.debug("Star-removal sequence exact for p={p}", p=p)
    return SubcomplexSequence(
        star=star_cx, tilde=tilde_cx, delta=delta_cx, inclusions=inclusions, restrictions=restrictions
    )


@dataclass(frozen=True, eq=False)
class StarShiftIso:
    """Degreewise isomorphisms C^(q-1)(sigma_bar, Λ^(p-1)) -> C^q(Star_rho, Λ^p)."""

    sigma_bar: Fan
    shifted: CochainComplex
    star: CochainComplex
    maps: tuple[np.ndarray, ...]


def star_shift_iso(tilde: Fan, rho: Cone, p: int) -> StarShiftIso:
    """
    Identify the star complex with the shifted complex of the quotient fan.

    Each block is the exterior power of the basis change that pulls
    M-bar ∩ sigma-bar-perp back into M ∩ sigma-perp along the projection.

    Raises:
        CommutationError: If a block is not unimodular or the maps fail to
            commute with the coboundaries
    """
    if p < 1:
        raise FanError("The shifted complex needs p >= 1")
    sigma_bar, images = quotient_fan(tilde, rho)
    star_cx = build_on_cones(tilde, star(tilde, rho), p)
    shifted = build_ishida(sigma_bar, p - 1)
    proj, _ = quotient_lattice(tilde.rank, [rho.rays[0]])
    proj_rows = to_rows(proj)

    def pull_back(m_bar: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sum(m_bar[i] * proj_rows[i][j] for i in range(len(m_bar))) for j in range(tilde.rank))

    maps = [zeros(star_cx.degrees[0], 0)]
    for q in range(1, tilde.rank + 1):
        M = zeros(star_cx.degrees[q], shifted.degrees[q - 1])
        for sigma in star_cx.cones[q]:
            sigma_image = images[sigma]
            rows = star_cx.block(q, sigma)
            cols = shifted.block(q - 1, sigma_image)
            if rows.stop == rows.start and cols.stop == cols.start:
                continue
            pulled = [pull_back(b) for b in annihilator_basis(sigma_image).basis]
            target_basis = annihilator_basis(sigma).basis
            change = express_in_basis(target_basis, pulled, tilde.rank)
            if change.shape[0] and abs(determinant(change)) != 1:
                raise CommutationError(f"Basis change for {sigma} is not unimodular")
            M[rows, cols] = np.array(compound_matrix(change, p - q).T, dtype=object)
        maps.append(M)

    for q in range(1, tilde.rank + 1):
        M = maps[q]
        if M.shape[0] != M.shape[1]:
            raise CommutationError(f"Degree {q} map has shape {M.shape}")
        if M.shape[0] and abs(determinant(M)) != 1:
            raise CommutationError(f"Degree {q} map is not invertible over Z")
    for q in range(1, tilde.rank):
        left = mat_mul(star_cx.coboundary(q), maps[q])
        right = mat_mul(maps[q + 1], shifted.coboundary(q - 1))
        if not np.array_equal(left, right):
            raise CommutationError(f"Shift isomorphism does not commute in degree {q}")
    logger.debug("Star shift isomorphism verified for p={p}", p=p)
    return StarShiftIso(sigma_bar=sigma_bar, shifted=shifted, star=star_cx, maps=tuple(maps))


def coboundary_rows(D: np.ndarray) -> list[list[int]]:
    return [list(row) for row in to_rows(D)] if D.shape[1] else [[] for _ in range(D.shape[0])]
