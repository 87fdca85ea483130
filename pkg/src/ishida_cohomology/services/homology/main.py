"""Cohomology of integer cochain complexes and Betti-number assembly."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import math
from typing import Sequence

from loguru import logger

from ishida_cohomology.config import get_settings
from ishida_cohomology.constants import NON_SIMPLICIAL_NOTE
from ishida_cohomology.pydantic_models import CohomologyGroup, CohomologyTable, entry_key
from ishida_cohomology.services.ishida.main import CochainComplex, build_ishida
from ishida_cohomology.services.linalg.main import checked_rank, snf
from ishida_cohomology.services.polyhedral.main import Fan, FanError, NonSimplicialFanError


def cohomology(cx: CochainComplex) -> list[CohomologyGroup]:
    """
    H^q of a cochain complex for every degree.

    free rank = dim C^q - rank D^q - rank D^(q-1), torsion = invariant
    factors > 1 of D^(q-1). Every rank is computed by SNF and by rational
    elimination, and the two must agree.

    Example:
        >>> [g.free_rank for g in cohomology(build_ishida(projective_space_fan(2), 1))]
        [0, 1, 0]
    """
    groups = []
    for q, dim in enumerate(cx.degrees):
        outgoing = cx.coboundary(q)
        incoming = cx.coboundary(q - 1)
        rank_out = checked_rank(outgoing) if outgoing.size else 0
        rank_in = checked_rank(incoming) if incoming.size else 0
        torsion = [d for d in snf(incoming).invariant_factors if d > 1] if incoming.size else []
        groups.append(CohomologyGroup(free_rank=dim - rank_out - rank_in, torsion=torsion))
    logger.debug("Cohomology ranks {ranks}", ranks=[g.free_rank for g in groups])
    return groups


def euler_characteristic(cx: CochainComplex) -> int:
    """Alternating sum of the cochain ranks."""
    return sum((-1) ** q * dim for q, dim in enumerate(cx.degrees))


def euler_oracle(fan: Fan, p: int) -> int:
    """
    chi_p = sum_q (-1)^q |Δ(q)| C(r - q, p - q), from face counts only.

    Raises:
        NonSimplicialFanError: The count assumes every q-cone has an
            annihilator of rank r - q
    """
    if not fan.is_simplicial:
        raise NonSimplicialFanError("The Euler oracle counts faces of simplicial fans only")
    r = fan.rank
    return sum(
        (-1) ** q * fan.f_vector[q] * math.comb(r - q, p - q)
        for q in range(min(p, r) + 1)
    )


def assemble_betti(table: CohomologyTable) -> list[int]:
    """b_l = sum over p + q = l of rank H^q(Δ, Λ^p), for l = 0 .. 2r."""
    r = table.rank
    return [sum(table.rank_of(p, l - p) for p in range(r + 1) if 0 <= l - p <= r) for l in range(2 * r + 1)]


def _cohomology_for_p(fan: Fan, p: int) -> tuple[int, list[CohomologyGroup]]:
    return p, cohomology(build_ishida(fan, p))


def cohomology_table(
    fan: Fan,
    p_values: Sequence[int] | None = None,
    force: bool = False,
    threads: int | None = None,
) -> CohomologyTable:
    """
    The (p, q) table of a fan.

    The Betti row is assembled only when every p in [0, r] was computed and
    the fan is simplicial (or force is set). Independent p values run on a
    thread pool when threads > 0; the table is merged in p order either way.

    Args:
        fan: Any valid fan
        p_values: Degrees of the exterior power (default: all of 0..r)
        force: Assemble Betti numbers for non-simplicial fans too
        threads: Worker count; None reads ISHIDA_THREADS
    """
    r = fan.rank
    values = list(range(r + 1)) if p_values is None else sorted(set(p_values))
    bad = [p for p in values if not 0 <= p <= r]
    if bad:
        raise FanError(f"p values {bad} lie outside [0, {r}]")
    workers = get_settings().threads if threads is None else threads

    if workers > 0 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(lambda p: _cohomology_for_p(fan, p), values))
    else:
        results = dict(_cohomology_for_p(fan, p) for p in values)

    entries = {entry_key(p, q): results[p][q] for p in values for q in range(r + 1)}
    table = CohomologyTable(rank=r, p_values=values, entries=entries, simplicial=fan.is_simplicial)
    if values == list(range(r + 1)):
        if fan.is_simplicial or force:
            table.betti = assemble_betti(table)
        else:
            table.note = NON_SIMPLICIAL_NOTE
    logger.info("Cohomology table for {desc}", desc=fan.describe())
    return table


def betti_numbers(fan: Fan, require_simplicial: bool = True) -> CohomologyTable:
    """
    Full cohomology table with Betti numbers b_0 .. b_2r.

    Raises:
        NonSimplicialFanError: If the fan is not simplicial and
            require_simplicial is set
    """
    if not fan.is_simplicial:
        if require_simplicial:
            raise NonSimplicialFanError("Betti numbers need a simplicial fan; pass require_simplicial=False to override")
        logger.warning("Assembling Betti numbers of a non-simplicial fan; the de Rham identification is unproven here")
    return cohomology_table(fan, force=True)
