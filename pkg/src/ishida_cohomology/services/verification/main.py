"""
Drivers that check the vanishing theorems on a concrete fan.

Every driver returns a VerificationReport. Theorem outcomes never raise:
a failed hypothesis gives HYPOTHESIS_VIOLATION, a failed check gives FAIL,
and internal consistency errors met while checking are recorded as failed
checks carrying the error text.
"""
from __future__ import annotations

import math
from typing import Callable, Mapping

from loguru import logger

from ishida_cohomology.enums import Regime
from ishida_cohomology.pydantic_models import CheckResult, CohomologyTable, VerificationReport
from ishida_cohomology.services.homology.main import cohomology, cohomology_table, euler_characteristic, euler_oracle
from ishida_cohomology.services.ishida.main import (
    CoboundaryError,
    CommutationError,
    ExactnessError,
    star_shift_iso,
    subcomplex_sequence,
)
from ishida_cohomology.services.kcomplex.main import DoubleComplexError, total_cohomology_check
from ishida_cohomology.services.linalg.main import LatticeVector, LinalgError
from ishida_cohomology.services.polyhedral.main import (
    Cone,
    Fan,
    FanError,
    complete_from_convex,
    graph_fans,
    make_cone,
    quotient_fan,
    star_removal,
    support_is_convex,
)

INTERNAL_ERRORS = (CoboundaryError, ExactnessError, CommutationError, LinalgError, DoubleComplexError, FanError)

Witness = tuple[Fan, Cone]


def _failure(name: str, error: Exception) -> list[CheckResult]:
    logger.warning("Check {name} raised {kind}: {error}", name=name, kind=type(error).__name__, error=str(error))
    return [CheckResult(name=name, passed=False, detail=f"{type(error).__name__}: {error}")]


def _guard(name: str, run: Callable[[], list[CheckResult]]) -> list[CheckResult]:
    try:
        return run()
    except INTERNAL_ERRORS as e:
        return _failure(name, e)


########################################################
# Shared checks
########################################################


def _off_diagonal_check(label: str, table: CohomologyTable, allowed: set[int] | None = None) -> CheckResult:
    stray = table.off_diagonal(allowed)
    return CheckResult(
        name=f"{label} off-diagonal vanishing",
        passed=not stray,
        detail=f"nonzero ranks at {stray}" if stray else "",
    )


def _odd_betti_check(table: CohomologyTable) -> CheckResult:
    betti = table.betti or []
    odd = {l: b for l, b in enumerate(betti) if l % 2 and b}
    return CheckResult(name="odd Betti numbers vanish", passed=not odd, detail=f"betti {betti}")


def _euler_checks(fan: Fan, table: CohomologyTable) -> list[CheckResult]:
    checks = []
    for p in table.p_values:
        observed = sum((-1) ** q * table.rank_of(p, q) for q in range(fan.rank + 1))
        expected = euler_oracle(fan, p)
        checks.append(
            CheckResult(name=f"euler p={p}", passed=observed == expected, detail=f"{observed} vs oracle {expected}")
        )
    return checks


def _cone_checks(fan: Fan, table: CohomologyTable) -> list[CheckResult]:
    (pi,) = fan.maximal_cones
    checks = []
    for p in table.p_values:
        got = [table.rank_of(p, q) for q in range(fan.rank + 1)]
        want = [math.comb(fan.rank - pi.dim, p)] + [0] * fan.rank
        checks.append(CheckResult(name=f"cone acyclicity p={p}", passed=got == want, detail=f"got {got}, want {want}"))
    return checks


def _complete_checks(fan: Fan, table: CohomologyTable) -> list[CheckResult]:
    r = fan.rank
    h = table.diagonal()
    checks = [_off_diagonal_check("complete fan", table), _odd_betti_check(table)]
    checks += _euler_checks(fan, table)
    checks.append(CheckResult(name="duality h_p = h_(r-p)", passed=h == h[::-1], detail=f"diagonal {h}"))
    checks.append(CheckResult(name="h_0 = h_r = 1", passed=h[0] == 1 and h[r] == 1, detail=f"diagonal {h}"))
    return checks


def _star_removal_checks(tilde: Fan, rho: Cone) -> list[CheckResult]:
    """Exact sequence, long-exact-sequence bookkeeping and the shift isomorphism for every p."""
    checks = []
    for p in range(tilde.rank + 1):

        def sequence_checks(p: int = p) -> list[CheckResult]:
            seq = subcomplex_sequence(tilde, rho, p)
            star_h = [g.free_rank for g in cohomology(seq.star)]
            tilde_h = [g.free_rank for g in cohomology(seq.tilde)]
            delta_h = [g.free_rank for g in cohomology(seq.delta)]
            chi = [euler_characteristic(cx) for cx in (seq.star, seq.delta, seq.tilde)]
            return [
                CheckResult(name=f"exact sequence p={p}", passed=True),
                CheckResult(
                    name=f"euler additivity p={p}",
                    passed=chi[0] + chi[1] == chi[2],
                    detail=f"star {chi[0]} + delta {chi[1]} vs tilde {chi[2]}",
                ),
                CheckResult(
                    name=f"long exact sequence p={p}",
                    passed=star_h[p] - tilde_h[p] + delta_h[p] == 0 and (p == 0 or delta_h[p - 1] == 0),
                    detail=f"star {star_h}, tilde {tilde_h}, delta {delta_h}",
                ),
                CheckResult(
                    name=f"star injects p={p}",
                    passed=star_h[p] <= tilde_h[p],
                    detail=f"{star_h[p]} <= {tilde_h[p]}",
                ),
            ]

        checks += _guard(f"exact sequence p={p}", sequence_checks)
        if p >= 1:

            def shift_checks(p: int = p) -> list[CheckResult]:
                iso = star_shift_iso(tilde, rho, p)
                shifted = [g.free_rank for g in cohomology(iso.shifted)]
                star_h = [g.free_rank for g in cohomology(iso.star)]
                return [
                    CheckResult(
                        name=f"star shift isomorphism p={p}",
                        passed=star_h[0] == 0 and star_h[1:] == shifted,
                        detail=f"star {star_h}, shifted quotient {shifted}",
                    )
                ]

            checks += _guard(f"star shift isomorphism p={p}", shift_checks)
    return checks


def _delta_checks(delta: Fan, table: CohomologyTable) -> list[CheckResult]:
    return [_off_diagonal_check("star-removal fan", table), _odd_betti_check(table)] + _euler_checks(delta, table)


########################################################
# Hypotheses
########################################################


def _complete_simplicial_reason(fan: Fan) -> str | None:
    if not fan.is_simplicial:
        return "fan is not simplicial"
    if not fan.is_complete:
        return "fan is not complete"
    return None


def _witness_reason(fan: Fan | None, witness: Witness | None) -> str | None:
    if witness is None:
        return "star-removal regime needs a complete fan and a ray to remove"
    tilde, rho = witness
    reason = _complete_simplicial_reason(tilde)
    if reason:
        return f"ambient {reason}"
    if rho.dim != 1 or rho not in tilde:
        return f"{rho} is not a ray of the ambient fan"
    if fan is not None and fan != star_removal(tilde, rho):
        return "fan is not the star removal of the witness"
    return None


########################################################
# Drivers
########################################################


def _regime_reason(fan: Fan, regime: Regime, witness: Witness | None) -> str | None:
    if regime is Regime.CONE:
        if len(fan.maximal_cones) != 1 or not fan.is_simplicial:
            return "fan is not the face fan of one simplicial cone"
        return None
    if regime is Regime.COMPLETE_SIMPLICIAL:
        return _complete_simplicial_reason(fan)
    if regime is Regime.STAR_REMOVAL:
        return _witness_reason(fan, witness)
    if regime is Regime.CONVEX_SUPPORT:
        if not fan.is_simplicial:
            return "fan is not simplicial"
        if fan.rank == 0 or not fan.by_dim[fan.rank] or not support_is_convex(fan):
            return "support is not convex of full dimension"
        return None
    raise ValueError(f"No vanishing check for regime {regime}")


def _regime_checks(fan: Fan, regime: Regime, witness: Witness | None, table: CohomologyTable) -> list[CheckResult]:
    if regime is Regime.CONE:
        return _cone_checks(fan, table) + _euler_checks(fan, table)
    if regime is Regime.STAR_REMOVAL:
        assert witness is not None
        return _delta_checks(fan, table) + _star_removal_checks(*witness)
    if fan.is_complete:
        return _complete_checks(fan, table)

    def completion_checks() -> list[CheckResult]:
        tilde, rho = complete_from_convex(fan)
        recovered = star_removal(tilde, rho) == fan
        return [
            CheckResult(name="completion recovers fan", passed=recovered, detail=f"added ray {list(rho.rays[0])}")
        ] + _star_removal_checks(tilde, rho)

    return _delta_checks(fan, table) + _guard("completion", completion_checks)


def verify_vanishing(fan: Fan, regime: Regime, witness: Witness | None = None) -> VerificationReport:
    """
    Check the vanishing pattern the regime predicts for this fan.

    Args:
        fan: The fan to check
        regime: Which theorem's hypothesis and conclusion to test
        witness: (tilde, rho) with fan = tilde minus Star_rho, for the
            star-removal regime only
    """
    label = regime.value
    reason = _regime_reason(fan, regime, witness)
    if reason:
        return VerificationReport.hypothesis_violation(label, reason)
    try:
        table = cohomology_table(fan)
    except INTERNAL_ERRORS as e:
        return VerificationReport.from_checks(label, _failure("cohomology", e))

    checks = _guard(label, lambda: _regime_checks(fan, regime, witness, table))
    report = VerificationReport.from_checks(label, checks, table)
    logger.info("Verified {regime}: {verdict}", regime=label, verdict=report.verdict.value)
    return report


def verify_star_removal(tilde: Fan, rho: Cone) -> VerificationReport:
    """Star-removal vanishing with the fan given by its complete ambient fan and a ray."""
    reason = _witness_reason(None, (tilde, rho))
    if reason:
        return VerificationReport.hypothesis_violation(Regime.STAR_REMOVAL.value, reason)
    return verify_vanishing(star_removal(tilde, rho), Regime.STAR_REMOVAL, witness=(tilde, rho))


def verify_phi_transfer(sigma_bar: Fan, eta: Mapping[LatticeVector, int] | None = None) -> VerificationReport:
    """
    Build the graph fans over sigma_bar and check the rank transfer.

    Checks that H(phi) matches H(sigma_bar) rationally, that the flat fan
    only has ranks at q in {p - 1, p}, that removing the star of -n0 from
    phi_tilde leaves phi with consistent long-exact-sequence ranks, and
    that the quotient at -n0 gives back sigma_bar.
    """
    label = Regime.GRAPH_TRANSFER.value
    reason = _complete_simplicial_reason(sigma_bar)
    if reason:
        return VerificationReport.hypothesis_violation(label, f"base {reason}")
    try:
        phi_tilde, phi, phi_flat = graph_fans(sigma_bar, eta)
    except FanError as e:
        return VerificationReport.hypothesis_violation(label, str(e))

    r = phi.rank
    down = make_cone([tuple([0] * (r - 1) + [-1])], r)
    try:
        base, phi_table, flat_table = [cohomology_table(f) for f in (sigma_bar, phi, phi_flat)]
    except INTERNAL_ERRORS as e:
        return VerificationReport.from_checks(label, _failure("cohomology", e))

    mismatched = {
        f"{p},{q}": (phi_table.rank_of(p, q), base.rank_of(p, q))
        for p in range(r + 1)
        for q in range(r + 1)
        if phi_table.rank_of(p, q) != base.rank_of(p, q)
    }
    checks = [
        CheckResult(
            name="phi ranks match base",
            passed=not mismatched,
            detail=f"(phi, base) at {mismatched}" if mismatched else "",
        ),
        _off_diagonal_check("flat graph fan", flat_table, allowed={-1, 0}),
        CheckResult(name="phi is the star removal of -n0", passed=star_removal(phi_tilde, down) == phi),
    ]

    def quotient_checks() -> list[CheckResult]:
        recovered, _ = quotient_fan(phi_tilde, down)
        return [CheckResult(name="quotient at -n0 recovers base", passed=recovered == sigma_bar, detail=repr(recovered))]

    checks += _guard("quotient", quotient_checks)
    checks += _star_removal_checks(phi_tilde, down)

    report = VerificationReport.from_checks(label, checks, phi_table)
    logger.info("Verified graph transfer over {desc}: {verdict}", desc=sigma_bar.describe(), verdict=report.verdict.value)
    return report


def verify_double_complex(fan: Fan) -> VerificationReport:
    """Total cohomology of the double complex against Ishida cohomology, for every p."""
    label = Regime.DOUBLE_COMPLEX.value
    reason = _complete_simplicial_reason(fan)
    if reason:
        return VerificationReport.hypothesis_violation(label, reason)
    checks = []
    for p in range(fan.rank + 1):
        checks += _guard(f"double complex p={p}", lambda p=p: total_cohomology_check(fan, p))
    try:
        table = cohomology_table(fan)
    except INTERNAL_ERRORS as e:
        return VerificationReport.from_checks(label, checks + _failure("cohomology", e))
    report = VerificationReport.from_checks(label, checks, table)
    logger.info("Verified double complex: {verdict}", verdict=report.verdict.value)
    return report
