"""
Seeded random simplicial fans and the invariants every one of them must satisfy.

Fan i of a run with seed S is drawn from random.Random(f"{S}-{i}"), so any
single failure can be regenerated without replaying the whole run.
"""
from __future__ import annotations

from pathlib import Path
import random

from loguru import logger

from ishida_cohomology.config import get_settings
from ishida_cohomology.constants import FUZZ_CONE_ATTEMPTS, FUZZ_MAX_RANK, FUZZ_RAY_ATTEMPTS
from ishida_cohomology.paths import fuzz_reproducer_path
from ishida_cohomology.pydantic_models import CohomologyTable, FanFile, FuzzFailure, FuzzSummary
from ishida_cohomology.services.homology.main import cohomology, cohomology_table, euler_characteristic, euler_oracle
from ishida_cohomology.services.ishida.main import CoboundaryError, build_ishida
from ishida_cohomology.services.linalg.main import LatticeVector, LinalgError, as_matrix, primitive, rational_rank
from ishida_cohomology.services.polyhedral.builders import transform_fan
from ishida_cohomology.services.polyhedral.main import Cone, Fan, FanError, cones_meet_properly, fan_from_cones, make_cone
from ishida_cohomology.utils.progressbar import fuzz_progress


def random_primitive_ray(rng: random.Random, rank: int, bound: int) -> LatticeVector:
    while True:
        v = [rng.randint(-bound, bound) for _ in range(rank)]
        if any(v):
            return primitive(v)


def random_simplicial_fan(rng: random.Random, rank: int, bound: int) -> Fan:
    """
    Random primitive rays, then greedy insertion of random simplicial cones
    that meet every accepted cone in a common face.
    """
    target = rng.randint(rank, 2 * rank + 2)
    rays: list[LatticeVector] = []
    for _ in range(FUZZ_RAY_ATTEMPTS):
        if len(rays) >= target:
            break
        v = random_primitive_ray(rng, rank, bound)
        if v not in rays:
            rays.append(v)

    accepted: list[Cone] = []
    for _ in range(FUZZ_CONE_ATTEMPTS):
        k = rng.randint(1, min(rank, len(rays)))
        chosen = rng.sample(rays, k)
        if rational_rank(as_matrix(chosen, rank)) != k:
            continue
        cone = make_cone(chosen, rank)
        if any(set(cone.rays) <= set(c.rays) for c in accepted):
            continue
        if all(cones_meet_properly(cone, c) for c in accepted):
            accepted.append(cone)
    return fan_from_cones(rank, accepted)


def random_unimodular(rng: random.Random, rank: int) -> list[list[int]]:
    """Product of random elementary row operations applied to the identity."""
    U = [[int(i == j) for j in range(rank)] for i in range(rank)]
    for _ in range(2 * rank):
        if rank > 1:
            i, j = rng.sample(range(rank), 2)
            k = rng.choice((-1, 1))
            U[i] = [a + k * b for a, b in zip(U[i], U[j])]
        if rng.random() < 0.3:
            i = rng.randrange(rank)
            U[i] = [-a for a in U[i]]
    return U


def _same_groups(a: CohomologyTable, b: CohomologyTable) -> bool:
    return a.entries == b.entries


def check_fan(fan: Fan, rng: random.Random) -> list[tuple[str, str]]:
    """Return (check, detail) for every invariant the fan breaks."""
    failures: list[tuple[str, str]] = []
    try:
        table = cohomology_table(fan, threads=0)
    except CoboundaryError as e:
        return [("coboundary squares to zero", str(e))]
    except LinalgError as e:
        return [("rank agreement", str(e))]

    for p in range(fan.rank + 1):
        from_ranks = sum((-1) ** q * table.rank_of(p, q) for q in range(fan.rank + 1))
        from_cochains = euler_characteristic(build_ishida(fan, p))
        oracle = euler_oracle(fan, p)
        if not from_ranks == from_cochains == oracle:
            failures.append(("euler", f"p={p}: ranks {from_ranks}, cochains {from_cochains}, oracle {oracle}"))

    for p in range(fan.rank + 1):
        reordered = cohomology(build_ishida(fan, p, shuffle=rng))
        expected = [table.group(p, q) for q in range(fan.rank + 1)]
        if reordered != expected:
            detail = f"p={p}: {[str(g) for g in expected]} vs {[str(g) for g in reordered]}"
            failures.append(("block order invariance", detail))

    U = random_unimodular(rng, fan.rank)
    try:
        moved = cohomology_table(transform_fan(fan, U), threads=0)
    except FanError as e:
        failures.append(("basis invariance", f"U={U}: {e}"))
    else:
        if not _same_groups(table, moved):
            failures.append(("basis invariance", f"U={U}: {table.entries} vs {moved.entries}"))
    return failures


def run_fuzz(
    seed: int,
    count: int,
    rank: int,
    entry_bound: int | None = None,
    failures_dir: Path | None = None,
    show_progress: bool = False,
) -> FuzzSummary:
    """
    Generate `count` random simplicial fans of the given rank and check each.

    Failing fans are written as reproducer fan files to failures_dir
    (default: ISHIDA_FUZZ_FAILURES_DIR).
    """
    if not 1 <= rank <= FUZZ_MAX_RANK:
        raise ValueError(f"Fuzz rank must lie in [1, {FUZZ_MAX_RANK}], got {rank}")
    if count < 0:
        raise ValueError(f"Fuzz count must be nonnegative, got {count}")
    settings = get_settings()
    bound = entry_bound if entry_bound is not None else settings.fuzz_entry_bound
    out_dir = failures_dir if failures_dir is not None else settings.fuzz_failures_dir

    summary = FuzzSummary(seed=seed, count=count, rank=rank)

    def run_one(i: int) -> None:
        rng = random.Random(f"{seed}-{i}")
        fan = random_simplicial_fan(rng, rank, bound)
        broken = check_fan(fan, rng)
        if not broken:
            summary.passed += 1
            return
        path = FanFile.from_fan(fan).write(fuzz_reproducer_path(out_dir, seed, i))
        for check, detail in broken:
            logger.warning("Fan {i} fails {check}: {detail}", i=i, check=check, detail=detail)
            summary.failures.append(FuzzFailure(index=i, check=check, detail=detail, reproducer=str(path)))

    if show_progress and count:
        with fuzz_progress(summary) as bar:
            for i in range(count):
                run_one(i)
                bar.advance()
    else:
        for i in range(count):
            run_one(i)

    logger.info("Fuzz seed={seed}: {passed}/{count} fans passed", seed=seed, passed=summary.passed, count=count)
    return summary
