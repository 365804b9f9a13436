from fractions import Fraction

TOOL_NAME = "fracdec"

DEFAULT_P = Fraction(1, 2)
"""Sampling probability of the matching construction."""

DEFAULT_MATERIALIZE_LIMIT = 2**20
"""Largest support (number of elements) an implicit packing may be expanded to."""

DEFAULT_ENUMERATION_BUDGET = 10**6
"""Largest number of supersets enumerated by the exact family deficiency."""

DEFAULT_BUDGET_PIVOTS = 10**6
DEFAULT_BUDGET_COLUMNS = 10**5

DEFAULT_VACUITY_BUDGET = 10**4
"""Largest clique size k treated as desk scale by the parameter calculus."""

DEFAULT_DECIMAL_PRECISION = 50
"""Decimal digits used by the analytic bounds (about 166 bits)."""

DENSE_EDGE_LIMIT = 2**24
"""Hosts with at most this many r-subsets keep a bit-per-rank membership table."""

MC_CHUNKS = 16
"""Fixed number of Monte Carlo chunks, each seeded from its own spawned seed sequence."""

MC_GENERATOR = "numpy.random.PCG64"

MATCHING_C_FACTOR = 32
"""The matching lemma constant is C = MATCHING_C_FACTOR * r**3."""

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4
