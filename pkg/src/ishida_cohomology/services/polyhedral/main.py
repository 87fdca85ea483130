"""
Rational polyhedral cones and finite fans.

Cones are stored by their primitive extremal rays (V-representation) together
with inward facet normals (H-representation) obtained by double description.
Fans are immutable, closed under faces and validated pairwise on construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from loguru import logger

from ishida_cohomology.services.linalg.main import (
    LatticeVector,
    LinalgError,
    as_matrix,
    dot,
    express_in_basis,
    kernel_basis,
    lift_through,
    primitive,
    primitive_from_rational,
    quotient_lattice,
    rational_rank,
    rational_solve,
    saturate,
    to_rows,
)
from ishida_cohomology.services.polyhedral.helpers import extreme_rays, span_basis_in


class FanError(ValueError):
    """A cone or fan axiom is violated. `pair` names the offending cones when known."""

    def __init__(self, message: str, pair: tuple[Cone, Cone] | None = None) -> None:
        super().__init__(message)
        self.pair = pair


class NotStronglyConvexError(FanError):
    pass


class NonSimplicialFanError(FanError):
    pass


########################################################
# Cones
########################################################


@dataclass(frozen=True)
class Cone:
    """A strongly convex rational polyhedral cone in Z^ambient_rank."""

    ambient_rank: int
    rays: tuple[LatticeVector, ...]
    dim: int = field(compare=False)
    facet_normals: tuple[LatticeVector, ...] = field(compare=False, repr=False)

    @property
    def simplicial(self) -> bool:
        return len(self.rays) == self.dim

    @property
    def is_zero(self) -> bool:
        return not self.rays

    @property
    def sort_key(self) -> tuple[int, tuple[LatticeVector, ...]]:
        return (self.dim, self.rays)

    @cached_property
    def orthogonal(self) -> tuple[LatticeVector, ...]:
        """HNF basis of the lattice of functionals vanishing on the cone."""
        return tuple(kernel_basis(as_matrix(self.rays, self.ambient_rank)))

    def in_span(self, v: Sequence[int]) -> bool:
        return all(dot(m, v) == 0 for m in self.orthogonal)

    def contains(self, v: Sequence[int]) -> bool:
        return self.in_span(v) and all(dot(m, v) >= 0 for m in self.facet_normals)

    def in_relative_interior(self, v: Sequence[int]) -> bool:
        return self.in_span(v) and all(dot(m, v) > 0 for m in self.facet_normals)

    def interior_point(self) -> LatticeVector:
        """Sum of the rays, a point of the relative interior."""
        return tuple(sum(r[i] for r in self.rays) for i in range(self.ambient_rank))

    def __repr__(self) -> str:
        return f"Cone({[list(r) for r in self.rays]})"


def _lift_functional(basis: Sequence[LatticeVector], y: Sequence[int]) -> LatticeVector:
    """Primitive m in the span of basis with <m, b_j> proportional to y_j."""
    d = len(basis)
    gram = as_matrix([[dot(basis[i], basis[j]) for j in range(d)] for i in range(d)])
    z = rational_solve(gram, list(y))
    if z is None:
        raise LinalgError("Gram matrix of a basis must be invertible")
    n = len(basis[0])
    m = [sum((z[j] * basis[j][i] for j in range(d)), Fraction(0)) for i in range(n)]
    return primitive_from_rational(m)


@lru_cache(maxsize=None)
def _make_cone(rays: tuple[LatticeVector, ...], ambient_rank: int) -> Cone:
    if not rays:
        return Cone(ambient_rank=ambient_rank, rays=(), dim=0, facet_normals=())

    basis = saturate(rays)
    dim = len(basis)
    coords = to_rows(express_in_basis(basis, rays, ambient_rank))
    dual = extreme_rays(coords, dim)
    if not dual or rational_rank(as_matrix(dual, dim)) < dim:
        raise NotStronglyConvexError(f"Cone over {[list(r) for r in rays]} contains a line")

    def tight_rank(c: LatticeVector) -> int:
        tight = [y for y in dual if dot(y, c) == 0]
        return rational_rank(as_matrix(tight, dim)) if tight else 0

    extremal = tuple(r for r, c in zip(rays, coords) if tight_rank(c) == dim - 1)
    normals = tuple(sorted(_lift_functional(basis, y) for y in dual))
    return Cone(ambient_rank=ambient_rank, rays=extremal, dim=dim, facet_normals=normals)


def make_cone(rays: Iterable[Sequence[int]], ambient_rank: int | None = None) -> Cone:
    """
    Build a cone from generators.

    Generators are made primitive and deduplicated, non-extremal generators are
    dropped, and facet normals come from the dual description.

    Args:
        rays: Nonzero integer generators
        ambient_rank: Rank of N; required when rays is empty

    Raises:
        NotStronglyConvexError: If the generated cone contains a line
        FanError: On zero generators or inconsistent lengths

    Example:
        >>> make_cone([(2, 0), (0, 3)]).rays
        ((0, 1), (1, 0))
    """
    try:
        normalized = tuple(sorted({primitive(r) for r in rays}))
    except LinalgError as exc:
        raise FanError("Ray generators must be nonzero") from exc
    if ambient_rank is None:
        if not normalized:
            raise FanError("The ambient rank of a cone without rays must be given")
        ambient_rank = len(normalized[0])
    if any(len(r) != ambient_rank for r in normalized):
        raise FanError(f"Ray lengths do not match ambient rank {ambient_rank}")
    return _make_cone(normalized, ambient_rank)


def zero_cone(ambient_rank: int) -> Cone:
    return _make_cone((), ambient_rank)


def is_face_ray_set(cone: Cone, subset: Iterable[LatticeVector]) -> bool:
    """True when the given rays of cone span one of its faces."""
    chosen = set(subset)
    if not chosen <= set(cone.rays):
        return False
    tight = [m for m in cone.facet_normals if all(dot(m, r) == 0 for r in chosen)]
    closure = {r for r in cone.rays if all(dot(m, r) == 0 for m in tight)}
    return closure == chosen


def faces(cone: Cone) -> list[Cone]:
    """All faces of a cone, the zero cone and the cone itself included."""
    n = cone.ambient_rank
    if cone.simplicial:
        subsets = (s for k in range(len(cone.rays) + 1) for s in combinations(cone.rays, k))
        return sorted((make_cone(s, n) for s in subsets), key=lambda c: c.sort_key)

    facet_sets = [frozenset(r for r in cone.rays if dot(m, r) == 0) for m in cone.facet_normals]
    found = {frozenset(cone.rays)}
    queue = [frozenset(cone.rays)]
    while queue:
        current = queue.pop()
        for facet in facet_sets:
            meet = current & facet
            if meet not in found:
                found.add(meet)
                queue.append(meet)
    return sorted((make_cone(s, n) for s in found), key=lambda c: c.sort_key)


def intersection_rays(c1: Cone, c2: Cone) -> list[LatticeVector]:
    """Extreme rays of c1 ∩ c2, computed exactly in the common linear span."""
    n = c1.ambient_rank
    orthogonal = list(c1.orthogonal) + list(c2.orthogonal)
    common = kernel_basis(as_matrix(orthogonal, n))
    if not common:
        return []
    constraints = [[dot(m, b) for b in common] for m in c1.facet_normals + c2.facet_normals]
    meet = extreme_rays(constraints, len(common))
    return sorted(primitive(span_basis_in(common, y)) for y in meet)


def cones_meet_properly(c1: Cone, c2: Cone) -> bool:
    """True when c1 ∩ c2 is a face of both cones."""
    shared = set(c1.rays) & set(c2.rays)
    if set(intersection_rays(c1, c2)) != shared:
        return False
    return is_face_ray_set(c1, shared) and is_face_ray_set(c2, shared)


########################################################
# Fans
########################################################


@dataclass(frozen=True)
class FacetIncidence:
    """
    A pair sigma ≺ tau with dim tau = dim sigma + 1.

    `normal` is a lift to N of the primitive generator `normal_class` of the
    image of tau in N / (N ∩ R sigma).
    """

    sigma: Cone
    tau: Cone
    normal: LatticeVector
    normal_class: LatticeVector


def facet_incidence(sigma: Cone, tau: Cone) -> FacetIncidence:
    if tau.dim != sigma.dim + 1 or not set(sigma.rays) <= set(tau.rays):
        raise FanError(f"{sigma} is not a facet of {tau}", pair=(sigma, tau))
    proj, _ = quotient_lattice(tau.ambient_rank, saturate(sigma.rays))
    rows = to_rows(proj)
    images = [tuple(dot(row, r) for row in rows) for r in tau.rays if r not in sigma.rays]
    normal_class = primitive(images[0])
    return FacetIncidence(sigma=sigma, tau=tau, normal=lift_through(proj, normal_class), normal_class=normal_class)


def maximal_among(cones: Iterable[Cone]) -> list[Cone]:
    pool = set(cones)
    return sorted(
        (c for c in pool if not any(set(c.rays) < set(d.rays) for d in pool)),
        key=lambda c: c.sort_key,
    )


@dataclass(frozen=True)
class Fan:
    """A finite fan in Z^rank, stored as its full face-closed cone list."""

    rank: int
    cones: tuple[Cone, ...]

    @cached_property
    def cone_set(self) -> frozenset[Cone]:
        return frozenset(self.cones)

    def __contains__(self, cone: object) -> bool:
        return cone in self.cone_set

    @cached_property
    def by_dim(self) -> dict[int, tuple[Cone, ...]]:
        return {q: tuple(c for c in self.cones if c.dim == q) for q in range(self.rank + 1)}

    @cached_property
    def maximal_cones(self) -> tuple[Cone, ...]:
        return tuple(maximal_among(self.cones))

    @cached_property
    def rays(self) -> tuple[LatticeVector, ...]:
        return tuple(sorted(c.rays[0] for c in self.by_dim.get(1, ())))

    @cached_property
    def face_relation(self) -> dict[Cone, tuple[Cone, ...]]:
        """Each cone mapped to its facets in the fan."""
        return {
            tau: tuple(s for s in self.by_dim.get(tau.dim - 1, ()) if set(s.rays) <= set(tau.rays))
            for tau in self.cones
        }

    @cached_property
    def cofaces(self) -> dict[Cone, tuple[Cone, ...]]:
        """Each cone mapped to the cones having it as a facet."""
        result: dict[Cone, list[Cone]] = {c: [] for c in self.cones}
        for tau, facets in self.face_relation.items():
            for sigma in facets:
                result[sigma].append(tau)
        return {c: tuple(v) for c, v in result.items()}

    @cached_property
    def incidences(self) -> tuple[FacetIncidence, ...]:
        return tuple(facet_incidence(s, t) for t in self.cones for s in self.face_relation[t])

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.by_dim[q]) for q in range(self.rank + 1))

    @cached_property
    def is_simplicial(self) -> bool:
        return all(c.simplicial for c in self.cones)

    @cached_property
    def boundary_facets(self) -> tuple[Cone, ...]:
        """(r-1)-cones lying in exactly one r-cone."""
        if self.rank == 0:
            return ()
        top = set(self.by_dim[self.rank])
        return tuple(
            c for c in self.by_dim[self.rank - 1] if sum(1 for t in self.cofaces[c] if t in top) == 1
        )

    @cached_property
    def is_complete(self) -> bool:
        if self.rank == 0:
            return True
        if not self.by_dim[self.rank] or any(c.dim != self.rank for c in self.maximal_cones):
            return False
        return all(len(self.cofaces[c]) == 2 for c in self.by_dim[self.rank - 1])

    def describe(self) -> str:
        """One-line summary, e.g. 'complete simplicial, r=2, f-vector (1,3,3)'."""
        kind = ["complete" if self.is_complete else "non-complete"]
        kind.append("simplicial" if self.is_simplicial else "non-simplicial")
        f_vector = ",".join(str(x) for x in self.f_vector)
        return f"{' '.join(kind)}, r={self.rank}, f-vector ({f_vector})"

    def __repr__(self) -> str:
        return f"Fan(rank={self.rank}, f_vector={self.f_vector})"


def fan_from_cones(r: int, maximal: Iterable[Cone]) -> Fan:
    """
    Close a list of cones under faces and validate the fan axioms.

    Raises:
        FanError: If a cone lives in the wrong lattice, or two cones meet
            outside a common face (the pair is attached to the error)
    """
    generators = maximal_among(maximal)
    for cone in generators:
        if cone.ambient_rank != r:
            raise FanError(f"{cone} lives in rank {cone.ambient_rank}, expected {r}")
    for c1, c2 in combinations(generators, 2):
        if not cones_meet_properly(c1, c2):
            raise FanError(f"Not a fan: {c1} and {c2} do not meet in a common face", pair=(c1, c2))

    closure = {zero_cone(r)}
    for cone in generators:
        closure.update(faces(cone))
    fan = Fan(rank=r, cones=tuple(sorted(closure, key=lambda c: c.sort_key)))
    logger.debug("Validated fan of rank {r} with f-vector {f}", r=r, f=fan.f_vector)
    return fan


def _require_cone(fan: Fan, cone: Cone) -> None:
    if cone not in fan:
        raise FanError(f"{cone} is not a cone of the fan")


def _require_ray(fan: Fan, rho: Cone) -> None:
    if rho.dim != 1:
        raise FanError(f"{rho} is not a ray")
    _require_cone(fan, rho)


def star(fan: Fan, sigma: Cone) -> tuple[Cone, ...]:
    """All cones of the fan having sigma as a face."""
    _require_cone(fan, sigma)
    return tuple(c for c in fan.cones if set(sigma.rays) <= set(c.rays))


def star_removal(tilde: Fan, rho: Cone) -> Fan:
    """The subfan of cones not containing the ray rho."""
    _require_ray(tilde, rho)
    remaining = [c for c in tilde.cones if rho.rays[0] not in c.rays]
    return fan_from_cones(tilde.rank, remaining)


def project(rows: Sequence[LatticeVector], v: Sequence[int]) -> LatticeVector:
    return tuple(dot(row, v) for row in rows)


def quotient_fan(tilde: Fan, rho: Cone) -> tuple[Fan, dict[Cone, Cone]]:
    """
    The fan of images of Star_rho under N -> N / Z rho.

    Returns the quotient fan together with the map sigma -> sigma-bar.
    """
    _require_ray(tilde, rho)
    proj, quotient_rank = quotient_lattice(tilde.rank, [rho.rays[0]])
    rows = to_rows(proj)
    images: dict[Cone, Cone] = {}
    for sigma in star(tilde, rho):
        projected = [project(rows, r) for r in sigma.rays if r != rho.rays[0]]
        images[sigma] = make_cone(projected, quotient_rank)
    return fan_from_cones(quotient_rank, images.values()), images


def eta_from_values(sigma_bar: Fan, values: Sequence[int]) -> dict[LatticeVector, int]:
    """Assign integer values to the rays of sigma_bar in their canonical order."""
    if len(values) != len(sigma_bar.rays):
        raise FanError(f"Expected {len(sigma_bar.rays)} eta values, got {len(values)}")
    return dict(zip(sigma_bar.rays, (int(v) for v in values)))


def graph_fans(
    sigma_bar: Fan, eta: Mapping[LatticeVector, int] | None = None
) -> tuple[Fan, Fan, Fan]:
    """
    Graph fans over a complete simplicial fan.

    With N = N-bar ⊕ Z n0 (n0 the last coordinate) and g(v) = (v, eta(v)), the
    flat fan holds the graph cones g(sigma), the upper fan adds g(sigma) + n0
    and the completed fan also adds g(sigma) - n0.

    Args:
        sigma_bar: Complete simplicial fan of rank r - 1
        eta: Integer values on the rays of sigma_bar (all zero when None)

    Returns:
        (phi_tilde, phi, phi_flat)
    """
    if not sigma_bar.is_complete:
        raise FanError("Graph fans need a complete base fan")
    if not sigma_bar.is_simplicial:
        raise NonSimplicialFanError("Graph fans need a simplicial base fan")
    values = {ray: 0 for ray in sigma_bar.rays} if eta is None else dict(eta)
    missing = [list(ray) for ray in sigma_bar.rays if ray not in values]
    if missing:
        raise FanError(f"eta has no value on rays {missing}")

    r = sigma_bar.rank + 1
    up = tuple([0] * (r - 1) + [1])
    down = tuple([0] * (r - 1) + [-1])
    flat = [make_cone([tuple(v) + (values[v],) for v in c.rays], r) for c in sigma_bar.maximal_cones]
    upper = [make_cone(list(c.rays) + [up], r) for c in flat]
    lower = [make_cone(list(c.rays) + [down], r) for c in flat]

    phi_flat = fan_from_cones(r, flat)
    phi = fan_from_cones(r, upper)
    phi_tilde = fan_from_cones(r, upper + lower)
    logger.info("Built graph fans of rank {r} over {n} base cones", r=r, n=len(flat))
    return phi_tilde, phi, phi_flat


def boundary_inequalities(fan: Fan) -> list[LatticeVector]:
    """Inward normals of the boundary facets, taken from their unique top-dimensional coface."""
    top = set(fan.by_dim[fan.rank]) if fan.rank else set()
    normals: set[LatticeVector] = set()
    for facet in fan.boundary_facets:
        (tau,) = [t for t in fan.cofaces[facet] if t in top]
        normals.update(m for m in tau.facet_normals if all(dot(m, r) == 0 for r in facet.rays))
    return sorted(normals)


def support_is_convex(fan: Fan) -> bool:
    """True when the support is a full-dimensional convex cone."""
    if fan.rank == 0:
        return True
    if any(c.dim != fan.rank for c in fan.maximal_cones):
        return False
    inequalities = boundary_inequalities(fan)
    return all(dot(m, r) >= 0 for m in inequalities for r in fan.rays)


def complete_from_convex(delta: Fan) -> tuple[Fan, Cone]:
    """
    Complete a simplicial fan with convex full-dimensional support by coning
    its boundary over a new ray rho pointing out of the support.

    Returns (tilde, rho) with delta = tilde minus Star_rho(tilde).
    """
    r = delta.rank
    if not delta.is_simplicial:
        raise NonSimplicialFanError("Completion needs a simplicial fan")
    if delta.is_complete:
        raise FanError("Fan is already complete")
    if r == 0 or not delta.by_dim[r]:
        raise FanError("Support is not full-dimensional")
    if not support_is_convex(delta):
        raise FanError("Support is not convex")

    inequalities = boundary_inequalities(delta)

    def interior(x: LatticeVector) -> bool:
        return any(x) and all(dot(m, x) > 0 for m in inequalities)

    x = tuple(sum(v[i] for v in delta.rays) for i in range(r))
    if not interior(x):
        points = [c.interior_point() for c in delta.maximal_cones]
        x = tuple(sum(p[i] for p in points) for i in range(r))
        if not interior(x):
            raise FanError("Could not find an interior point of the support")

    n_out = primitive([-v for v in x])
    rho = make_cone([n_out], r)
    added = [make_cone(list(f.rays) + [n_out], r) for f in delta.boundary_facets]
    tilde = fan_from_cones(r, list(delta.maximal_cones) + added)
    if not tilde.is_complete:
        raise FanError("Coning the boundary did not produce a complete fan")
    logger.info("Completed fan with new ray {ray}", ray=n_out)
    return tilde, rho
