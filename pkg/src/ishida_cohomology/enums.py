import enum


class Regime(str, enum.Enum):
    CONE = "cone"
    COMPLETE_SIMPLICIAL = "complete-simplicial"
    STAR_REMOVAL = "star-removal"
    CONVEX_SUPPORT = "convex-support"
    GRAPH_TRANSFER = "graph-transfer"
    DOUBLE_COMPLEX = "double-complex"


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    HYPOTHESIS_VIOLATION = "HYPOTHESIS_VIOLATION"


class Theorem(str, enum.Enum):
    CONE_ACYCLICITY = "prop2.1"
    COMPLETE_VANISHING = "prop4.1"
    DOUBLE_COMPLEX = "prop4.1-kcomplex"
    STAR_REMOVAL = "thm4.2"
    CONVEX_SUPPORT = "cor4.4"
    GRAPH_TRANSFER = "lem4.3"


class OutputFormat(str, enum.Enum):
    JSON = "json"
    TABLE = "table"


class Builder(str, enum.Enum):
    PROJECTIVE = "pr"
    HIRZEBRUCH = "hirzebruch"
    PRODUCT = "product"
    GAMMA = "gamma"
    GRAPH = "graph"
    COMPLETE_FROM_CONVEX = "complete-from-convex"
    STAR_REMOVAL = "star-removal"
    ZERO = "zero"
