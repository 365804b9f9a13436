from decimal import Decimal
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from fracDec.models.base import FracDecModel


class BoundaryReport(FracDecModel):
    """
    Per-edge boundary of a packing checked against an eta-almost window.

    Attributes:
        per_edge: edge rank -> exact boundary value.
        min_boundary: smallest boundary over the host edges (1 for a host without edges).
        max_boundary: largest boundary over the host edges (1 for a host without edges).
        eta: 1 - min_boundary.
        eta_bound: the eta the packing was validated against.
        passed: every boundary lies in [1 - eta_bound, 1].
        failures: ranks of the edges outside the window.
    """

    per_edge: Dict[int, Fraction]
    min_boundary: Fraction
    max_boundary: Fraction
    eta: Fraction
    eta_bound: Fraction
    passed: bool
    failures: List[int] = []


class DeficiencyClass(FracDecModel):
    """
    One orbit of edges of K_n^r - M with its exact deficiency.

    Attributes:
        signature: (sorted nonzero intersection sizes with matching edges, number of unmatched vertices).
        representative: an edge of the orbit.
        eta: Pr[|X| < rq | V(e) in X] for every edge of the orbit.
    """

    signature: Tuple[Tuple[int, ...], int]
    representative: Tuple[int, ...]
    eta: Fraction


class DeficiencyReport(FracDecModel):
    """
    Exact deficiency of the matching sampler on every edge of K_n^r - M.

    Attributes:
        per_edge_eta: edge rank -> deficiency, filled when C(n, r) is within the materialization limit.
        classes: one entry per orbit of edges.
        max_eta: largest deficiency.
        threshold: 1 / C(rq, r).
        passed: max_eta <= threshold.
    """

    n: int
    r: int
    q: int
    p: Fraction
    per_edge_eta: Dict[int, Fraction] = {}
    classes: List[DeficiencyClass]
    max_eta: Fraction
    threshold: Fraction
    passed: bool


class ChernoffRecord(FracDecModel):
    signature: Tuple[Tuple[int, ...], int]
    representative: Tuple[int, ...]
    mu: Fraction
    bound: Decimal
    y_tail: Fraction
    exact: Fraction
    bound_dominates: bool


class ChernoffReport(FracDecModel):
    """
    The proof's Chernoff estimate next to the exact tails it bounds.

    Attributes:
        in_regime: n >= 32 r^3 q, where the proof claims bound >= exact.
        records: one record per orbit of edges.
    """

    n: int
    r: int
    q: int
    p: Fraction
    in_regime: bool
    threshold: Fraction
    records: List[ChernoffRecord]


class ExplorationResult(FracDecModel):
    """
    Attributes:
        ordering: vertices of V(J) - X in exploration order.
        good_indices: positions whose vertex completes an edge among X and its predecessors.
        good_count: len(good_indices).
        bound: ceil(|V(J) - X| / r) for the uniformity r of J.
    """

    ordering: List[int]
    good_indices: List[int]
    good_count: int
    bound: int


class MonteCarloEstimate(FracDecModel):
    estimate: float
    stderr: float
    samples: int
    bad: int
    seed: int
    generator: str
    chunks: int


class TailBoundReport(FracDecModel):
    """
    Attributes:
        terms: the three binomial factors of N(s).
        ratio: N(s) / C(n - r, k - r), exact.
        r2_specialization: k^s d^s, only for r = 2.
        intermediate_bound: (2 e^2 k)^s d^(s / (r - 1)).
        simplified_bound: ((2 e^2 k)^(r - 1) d)^((m^(1/(r-1)) - r) / (r - 1)).
        per_edge_bound: k * simplified_bound.
        precondition_ok: d <= (2 e^2 k)^-(r - 1).
        s_meets_threshold: s >= m^(1/(r-1)) - r.
    """

    n: int
    r: int
    k: int
    m: int
    s: int
    d: Fraction
    terms: Tuple[int, int, int]
    ratio: Fraction
    ratio_decimal: Decimal
    r2_specialization: Optional[Decimal] = None
    intermediate_bound: Decimal
    exponent: Decimal
    simplified_bound: Decimal
    per_edge_bound: Decimal
    precondition_ok: bool
    s_meets_threshold: bool


class ParamReport(FracDecModel):
    """
    Constants of the main theorem for (r, epsilon, q) and the inequality chain they must satisfy.

    Attributes:
        C: matching lemma constant 32 r^3.
        m: smallest integer above (r + (r^2 - 1) / epsilon)^(r - 1).
        beta_log2: beta = 2 ** beta_log2, the smallest power of two closing the final inequality.
        k: C^m r q, exact.
        checks: inequality name -> holds.
        values: named diagnostic values.
        final_bound: k ((2 e^2 k)^(r-1) d)^((m^(1/(r-1)) - r) / (r - 1)).
        threshold: 1 / C(rq, r).
        vacuous: k exceeds the desk-scale budget.
    """

    r: int
    epsilon: Fraction
    q: int
    C: int
    m: int
    beta_log2: int
    beta_rule: str
    alpha: Decimal
    k: int
    d: Decimal
    checks: Dict[str, bool]
    values: Dict[str, Decimal]
    final_bound: Decimal
    threshold: Fraction
    vacuous: bool
    vacuity_budget: int


class StageStatus(FracDecModel):
    name: str
    ok: bool
    detail: str = ""
    data: Dict[str, Any] = {}


class PipelineReport(FracDecModel):
    """
    Attributes:
        stages: per-stage status in execution order.
        success: the returned packing validated as a full decomposition.
        failure_stage: name of the first failed stage.
        packing: the validated K_q^r packing, None on failure.
    """

    strategy: str
    n: int
    r: int
    q: int
    k: Optional[int] = None
    m: Optional[int] = None
    stages: List[StageStatus]
    success: bool
    failure_stage: Optional[str] = None
    packing: Optional[Any] = None
