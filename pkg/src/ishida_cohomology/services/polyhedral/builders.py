"""Standard fans used as a test corpus, plus fan transformations."""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from ishida_cohomology.constants import BUILDER_SPEC_SEPARATOR, PRODUCT_SPEC_SEPARATOR
from ishida_cohomology.enums import Builder
from ishida_cohomology.services.linalg.main import LatticeVector, as_matrix, determinant, primitive
from ishida_cohomology.services.polyhedral.main import (
    Cone,
    Fan,
    FanError,
    NonSimplicialFanError,
    fan_from_cones,
    make_cone,
    star,
)


def unit_vector(r: int, i: int, sign: int = 1) -> LatticeVector:
    return tuple(sign if j == i else 0 for j in range(r))


def zero_fan(r: int) -> Fan:
    """The fan {0} in Z^r."""
    if r < 0:
        raise FanError(f"Rank must be nonnegative, got {r}")
    return fan_from_cones(r, [])


def projective_space_fan(r: int) -> Fan:
    """
    Fan of P^r: rays e_1, ..., e_r, -(e_1 + ... + e_r); every r of them span a cone.

    Example:
        >>> projective_space_fan(2).f_vector
        (1, 3, 3)
    """
    if r < 1:
        raise FanError(f"Projective space needs rank >= 1, got {r}")
    rays = [unit_vector(r, i) for i in range(r)] + [tuple([-1] * r)]
    return fan_from_cones(r, [make_cone(c, r) for c in combinations(rays, r)])


def hirzebruch_fan(a: int) -> Fan:
    """Fan of the Hirzebruch surface F_a, rays (1,0), (0,1), (-1,a), (0,-1)."""
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    cones = [make_cone([rays[i], rays[(i + 1) % 4]], 2) for i in range(4)]
    return fan_from_cones(2, cones)


def product_fan(f1: Fan, f2: Fan) -> Fan:
    r1, r2 = f1.rank, f2.rank
    r = r1 + r2
    cones = []
    for c1 in f1.maximal_cones:
        for c2 in f2.maximal_cones:
            rays = [tuple(v) + (0,) * r2 for v in c1.rays] + [(0,) * r1 + tuple(w) for w in c2.rays]
            cones.append(make_cone(rays, r))
    return fan_from_cones(r, cones)


def gamma_pi(cone: Cone) -> Fan:
    """The fan of all faces of a single cone."""
    return fan_from_cones(cone.ambient_rank, [cone])


def stellar_subdivision(fan: Fan, tau: Cone, weights: Sequence[int] | None = None) -> Fan:
    """
    Star subdivision of a simplicial fan at a positive combination of the rays of tau.

    Every cone sigma containing tau is replaced by the cones obtained from
    sigma by swapping one ray of tau for the new ray.
    """
    if not fan.is_simplicial:
        raise NonSimplicialFanError("Star subdivision is only implemented for simplicial fans")
    if tau.dim < 2:
        raise FanError("Subdividing at a ray or the zero cone changes nothing")
    weights = list(weights) if weights is not None else [1] * len(tau.rays)
    if len(weights) != len(tau.rays) or any(w <= 0 for w in weights):
        raise FanError(f"Need {len(tau.rays)} positive weights, got {weights}")

    new_ray = primitive([sum(w * ray[i] for w, ray in zip(weights, tau.rays)) for i in range(fan.rank)])
    affected = set(star(fan, tau))
    kept = [c for c in fan.maximal_cones if c not in affected]
    replaced = [
        make_cone([r for r in sigma.rays if r != u] + [new_ray], fan.rank)
        for sigma in fan.maximal_cones
        if sigma in affected
        for u in tau.rays
    ]
    return fan_from_cones(fan.rank, kept + replaced)


def transform_fan(fan: Fan, U: Sequence[Sequence[int]]) -> Fan:
    """Image of a fan under the unimodular map v -> U v."""
    matrix = as_matrix(U, fan.rank) if fan.rank else as_matrix([], 0)
    if fan.rank and abs(determinant(matrix)) != 1:
        raise FanError("Transformation is not unimodular")

    def apply(v: LatticeVector) -> LatticeVector:
        return tuple(sum(U[i][j] * v[j] for j in range(fan.rank)) for i in range(fan.rank))

    cones = [make_cone([apply(v) for v in c.rays], fan.rank) for c in fan.maximal_cones]
    return fan_from_cones(fan.rank, cones)


def parse_rays(text: str) -> list[LatticeVector]:
    """Parse '1,0;0,1' into [(1, 0), (0, 1)]."""
    try:
        return [tuple(int(x) for x in chunk.split(",")) for chunk in text.split(";") if chunk.strip()]
    except ValueError as exc:
        raise FanError(f"Cannot parse rays from {text!r}") from exc


def fan_from_spec(spec: str) -> Fan:
    """
    Build a fan from a builder spec string.

    Accepted forms: 'pr:R', 'hirzebruch:A', 'zero:R', 'gamma:1,0;0,1' and
    'product:SPEC*SPEC'.
    """
    name, sep, arg = spec.partition(BUILDER_SPEC_SEPARATOR)
    if not sep:
        raise FanError(f"Builder spec {spec!r} must look like NAME{BUILDER_SPEC_SEPARATOR}ARG")
    try:
        builder = Builder(name)
    except ValueError as exc:
        raise FanError(f"Unknown builder {name!r}") from exc

    try:
        if builder is Builder.PROJECTIVE:
            return projective_space_fan(int(arg))
        if builder is Builder.HIRZEBRUCH:
            return hirzebruch_fan(int(arg))
        if builder is Builder.ZERO:
            return zero_fan(int(arg))
    except ValueError as exc:
        if isinstance(exc, FanError):
            raise
        raise FanError(f"Bad parameter {arg!r} for builder {name!r}") from exc
    if builder is Builder.GAMMA:
        return gamma_pi(make_cone(parse_rays(arg)))
    if builder is Builder.PRODUCT:
        left, star_sep, right = arg.partition(PRODUCT_SPEC_SEPARATOR)
        if not star_sep:
            raise FanError(f"Product spec {spec!r} must look like product:SPEC{PRODUCT_SPEC_SEPARATOR}SPEC")
        return product_fan(fan_from_spec(left), fan_from_spec(right))
    raise FanError(f"Builder {name!r} needs an input fan and has no spec form")
