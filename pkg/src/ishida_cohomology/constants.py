from ishida_cohomology.enums import Regime, Theorem, Verdict

# CLI exit codes per verdict
VERDICT_EXIT_CODES = {
    Verdict.PASS: 0,
    Verdict.FAIL: 1,
    Verdict.HYPOTHESIS_VIOLATION: 2,
}

# Theorems whose check is a vanishing pattern on a single fan
THEOREM_REGIMES = {
    Theorem.CONE_ACYCLICITY: Regime.CONE,
    Theorem.COMPLETE_VANISHING: Regime.COMPLETE_SIMPLICIAL,
    Theorem.STAR_REMOVAL: Regime.STAR_REMOVAL,
    Theorem.CONVEX_SUPPORT: Regime.CONVEX_SUPPORT,
}

# Builder spec strings accepted wherever a fan source is expected, e.g. "pr:2"
BUILDER_SPEC_SEPARATOR = ":"
PRODUCT_SPEC_SEPARATOR = "*"

# Hard ceilings for randomized fan generation
FUZZ_MAX_RANK = 4
FUZZ_RAY_ATTEMPTS = 60
FUZZ_CONE_ATTEMPTS = 200

NON_SIMPLICIAL_NOTE = (
    "Betti row suppressed: the fan is not simplicial, so the de Rham identification "
    "does not apply. Pass --force to assemble it anyway."
)
