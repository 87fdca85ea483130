"""Double description machinery shared by cone construction and intersection."""
from __future__ import annotations

from typing import Sequence

from ishida_cohomology.services.linalg.main import (
    LatticeVector,
    as_matrix,
    dot,
    kernel_basis,
    primitive,
    rational_rank,
)


def _tight(vector: Sequence[int], constraints: Sequence[Sequence[int]]) -> list[int]:
    return [i for i, a in enumerate(constraints) if dot(a, vector) == 0]


def _rank_of(rows: Sequence[Sequence[int]], dim: int) -> int:
    if not rows:
        return 0
    return rational_rank(as_matrix(rows, dim))


def _initial_simplex(constraints: list[LatticeVector], dim: int) -> tuple[list[int], list[LatticeVector]]:
    """Pick dim independent constraints and the extreme rays of the simplicial cone they cut out."""
    chosen: list[int] = []
    for i, a in enumerate(constraints):
        if _rank_of([constraints[j] for j in chosen] + [a], dim) > len(chosen):
            chosen.append(i)
        if len(chosen) == dim:
            break
    rays: list[LatticeVector] = []
    for j in chosen:
        others = [constraints[i] for i in chosen if i != j]
        (ray,) = kernel_basis(as_matrix(others, dim)) if others else [tuple(constraints[j])]
        if dot(constraints[j], ray) < 0:
            ray = tuple(-x for x in ray)
        rays.append(primitive(ray))
    return chosen, rays


def extreme_rays(constraints: Sequence[Sequence[int]], dim: int) -> list[LatticeVector]:
    """
    Extreme rays of the pointed cone {y in Q^dim : a·y >= 0 for every constraint a}.

    The constraints must have full rank dim so the cone is pointed. Zero
    constraints are ignored. The result is sorted and primitive.

    Example:
        >>> extreme_rays([(1, 0), (0, 1), (1, 1)], 2)
        [(0, 1), (1, 0)]
    """
    rows = [tuple(int(x) for x in a) for a in constraints if any(a)]
    if dim == 0:
        return []
    if _rank_of(rows, dim) < dim:
        raise ValueError(f"Constraints of rank < {dim} do not cut out a pointed cone")

    chosen, rays = _initial_simplex(rows, dim)
    processed = [rows[i] for i in chosen]
    for i, a in enumerate(rows):
        if i in chosen:
            continue
        positive = [r for r in rays if dot(a, r) > 0]
        zero = [r for r in rays if dot(a, r) == 0]
        negative = [r for r in rays if dot(a, r) < 0]
        combined: list[LatticeVector] = []
        for p in positive:
            tight_p = set(_tight(p, processed))
            for n in negative:
                common = tight_p & set(_tight(n, processed))
                if _rank_of([processed[k] for k in common], dim) != dim - 2:
                    continue
                ap, an = dot(a, p), dot(a, n)
                combined.append(primitive([ap * y - an * x for x, y in zip(p, n)]))
        rays = sorted(set(positive + zero + combined))
        processed.append(a)
    return sorted(set(rays))


def span_basis_in(basis: Sequence[Sequence[int]], vector: Sequence[int]) -> LatticeVector:
    """Lattice vector sum_j c_j b_j for coordinates c in the given basis."""
    n = len(basis[0])
    return tuple(sum(c * b[i] for c, b in zip(vector, basis)) for i in range(n))
