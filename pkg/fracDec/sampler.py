# -*- coding: utf-8 -*-
"""
Sampling machinery: exploration orderings, the uniform packing of a host by its induced k-vertex subgraphs
whose complement has maximum vertex degree at most m, exact and Monte Carlo deficiencies of that packing, and
the counting bound on a vertex of high complement degree.
"""
import math
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np
from fracDec.errorhandling import InputError, PreconditionError, ResourceBudgetError
from fracDec.helpers import parallel_map
from fracDec.hypercore import Hypergraph, VertexSet, binom, vertex_set
from fracDec.models.families import FamilyTypes
from fracDec.models.reports import ExplorationResult, MonteCarloEstimate, TailBoundReport
from fracDec.packing import ImplicitPacking, PackingView
from fracDec.utils.constants import (
    DEFAULT_DECIMAL_PRECISION,
    DEFAULT_ENUMERATION_BUDGET,
    MC_CHUNKS,
    MC_GENERATOR,
)
from loguru import logger

ZERO = Fraction(0)
ONE = Fraction(1)


def exploration_ordering(J: Hypergraph, X: Sequence[int]) -> ExplorationResult:
    """
    Orders the vertices of J outside X so that at least ceil(|V(J) - X| / r) of them complete an edge of J
    among X and their predecessors (r the uniformity of J).

    Greedy: the least uncovered vertex u is preceded by the uncovered vertices of an edge through u that has
    the fewest of them.

    Raises:
        PreconditionError: a vertex outside X lies in no edge; witness is the vertex
    """
    known = set(vertex_set(X, J.n))
    incident: Dict[int, List[VertexSet]] = {v: [] for v in range(J.n)}
    for edge in J.edges:
        for v in edge:
            incident[v].append(edge)
    outside = [v for v in range(J.n) if v not in known]
    for v in outside:
        if not incident[v]:
            raise PreconditionError(f"vertex {v} outside X has degree 0", witness=v)

    ordering: List[int] = []
    covered = set(known)
    for u in outside:
        if u in covered:
            continue
        best = min(incident[u], key=lambda edge: (sum(1 for v in edge if v not in covered), edge[::-1]))
        ordering.extend(v for v in best if v not in covered and v != u)
        ordering.append(u)
        covered.update(best)

    good: List[int] = []
    seen = set(known)
    for position, v in enumerate(ordering):
        if any(all(w in seen for w in edge if w != v) for edge in incident[v]):
            good.append(position)
        seen.add(v)
    bound = -(-len(outside) // J.r)
    return ExplorationResult(ordering=ordering, good_indices=good, good_count=len(good), bound=bound)


def _check_family(G: Hypergraph, k: int, m: int) -> None:
    if not G.r <= k <= G.n:
        raise InputError(f"induced k-sets need r <= k <= n, got r={G.r}, k={k}, n={G.n}")
    if m < 0:
        raise InputError(f"complement degree bound m={m} is negative")


def in_family(G: Hypergraph, S: Sequence[int], m: int) -> bool:
    """
    Whether the complement of G[S] within K_|S|^r has maximum vertex degree at most m.
    """
    missing: Dict[int, int] = {}
    for subset in combinations(S, G.r):
        if not G.has_edge(subset):
            for v in subset:
                missing[v] = missing.get(v, 0) + 1
                if missing[v] > m:
                    return False
    return True


def family_deficiency_exact(
    G: Hypergraph, k: int, m: int, f: Sequence[int], budget: int = DEFAULT_ENUMERATION_BUDGET
) -> Fraction:
    """
    1 - d phi(f): the share of k-supersets of f outside the family, by enumeration.

    Raises:
        ResourceBudgetError: more than budget supersets
    """
    _check_family(G, k, m)
    edge = vertex_set(f, G.n)
    if not G.has_edge(edge):
        raise InputError(f"{list(edge)} is not an edge of the host")
    if G.is_complete():
        return ZERO
    total = binom(G.n - G.r, k - G.r)
    if total > budget:
        raise ResourceBudgetError(
            f"{total} supersets exceed the enumeration budget {budget}", budget="enumeration_budget", limit=budget
        )
    others = [v for v in range(G.n) if v not in edge]
    bad = 0
    for rest in combinations(others, k - G.r):
        if not in_family(G, sorted(edge + rest), m):
            bad += 1
    return Fraction(bad, total)


def uniform_family_packing(
    G: Hypergraph, k: int, m: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> PackingView:
    """
    Every induced k-vertex subgraph H of G whose complement has maximum vertex degree at most m, each with weight
    1/C(n - r, k - r). The boundary at f is the probability that a uniform k-superset of f is in the family.
    """
    _check_family(G, k, m)
    n, r = G.n, G.r
    value = Fraction(1, binom(n - r, k - r))

    def weight_fn(S: VertexSet) -> Fraction:
        if len(S) != k or len(set(S)) != k or S[0] < 0 or S[-1] >= n:
            return ZERO
        return value if in_family(G, S, m) else ZERO

    def boundary_fn(rank: int, edge: VertexSet) -> Fraction:
        return 1 - family_deficiency_exact(G, k, m, edge, budget)

    def support_fn() -> Iterator[Tuple[VertexSet, Fraction]]:
        for S in combinations(range(n), k):
            if in_family(G, S, m):
                yield S, value

    return ImplicitPacking(G, FamilyTypes.induced_k_set, weight_fn, boundary_fn, support_fn, binom(n, k), order=k)


def _chunk_sizes(samples: int, chunks: int) -> List[int]:
    return [samples // chunks + (1 if i < samples % chunks else 0) for i in range(chunks)]


def family_deficiency_mc(
    G: Hypergraph, k: int, m: int, f: Sequence[int], samples: int, seed: int, workers: int = 1
) -> MonteCarloEstimate:
    """
    Monte Carlo estimate of 1 - d phi(f) with its binomial standard error.

    The samples are split into a fixed number of chunks, each drawn from a PCG64 stream spawned from seed, so the
    estimate does not depend on workers.
    """
    _check_family(G, k, m)
    if samples < 1:
        raise InputError(f"samples={samples} must be positive")
    edge = vertex_set(f, G.n)
    if not G.has_edge(edge):
        raise InputError(f"{list(edge)} is not an edge of the host")
    others = np.array([v for v in range(G.n) if v not in edge], dtype=np.int64)
    children = np.random.SeedSequence(seed).spawn(MC_CHUNKS)

    def run_chunk(item: Tuple[np.random.SeedSequence, int]) -> int:
        child, count = item
        rng = np.random.Generator(np.random.PCG64(child))
        bad = 0
        for _ in range(count):
            rest = rng.choice(others, size=k - G.r, replace=False)
            if not in_family(G, sorted(edge + tuple(int(v) for v in rest)), m):
                bad += 1
        return bad

    bad = sum(parallel_map(run_chunk, list(zip(children, _chunk_sizes(samples, MC_CHUNKS))), workers))
    estimate = bad / samples
    stderr = math.sqrt(estimate * (1 - estimate) / samples)
    logger.debug("Monte Carlo deficiency at {}: {} bad of {} (seed {})", list(edge), bad, samples, seed)
    return MonteCarloEstimate(
        estimate=estimate, stderr=stderr, samples=samples, bad=bad, seed=seed, generator=MC_GENERATOR, chunks=MC_CHUNKS
    )


def tail_bound(
    n: int,
    r: int,
    k: int,
    m: int,
    d: Union[Fraction, Decimal, str],
    s: int,
    precision: int = DEFAULT_DECIMAL_PRECISION,
) -> TailBoundReport:
    """
    Evaluates the bound on Pr[a vertex of a random induced k-superset has complement degree > m].

    Layers:
        ratio: N(s) / C(n - r, k - r), exact, with N(s) = C(floor(C(s, r - 2) d n), b) C(n - r, s - b)
            C(n - r - s, k - r - s) and b = ceil(s / (r - 1)).
        intermediate_bound: (2 e^2 k)^s d^(s / (r - 1)).
        simplified_bound: ((2 e^2 k)^(r - 1) d)^((m^(1/(r-1)) - r) / (r - 1)).
        per_edge_bound: k * simplified_bound, the union bound over the k vertices.
        r2_specialization: k^s d^s, for r = 2.
    """
    d = Fraction(d) if not isinstance(d, str) else Fraction(Decimal(d))
    if r < 2 or k < r or n < k or s < 1 or m < 0:
        raise InputError(f"tail bound needs r >= 2, r <= k <= n, s >= 1, m >= 0; got r={r}, k={k}, n={n}, s={s}")
    if not 0 < d <= 1:
        raise InputError(f"d={d} outside (0, 1]")
    good = -(-s // (r - 1))
    crowded = math.floor(binom(s, r - 2) * d * n)
    terms = (binom(crowded, good), binom(n - r, s - good), binom(n - r - s, k - r - s))
    ratio = Fraction(terms[0] * terms[1] * terms[2], binom(n - r, k - r))
    with localcontext() as ctx:
        ctx.prec = precision
        e2 = Decimal(2).exp()
        dd = Decimal(d.numerator) / Decimal(d.denominator)
        base = 2 * e2 * k
        exponent = (Decimal(m) ** (Decimal(1) / (r - 1)) - r) / (r - 1)
        intermediate = base**s * dd ** (Decimal(s) / (r - 1))
        inner = base ** (r - 1) * dd
        simplified = inner**exponent
        report = TailBoundReport(
            n=n,
            r=r,
            k=k,
            m=m,
            s=s,
            d=d,
            terms=terms,
            ratio=ratio,
            ratio_decimal=Decimal(ratio.numerator) / Decimal(ratio.denominator),
            r2_specialization=(Decimal(k) * dd) ** s if r == 2 else None,
            intermediate_bound=intermediate,
            exponent=exponent,
            simplified_bound=simplified,
            per_edge_bound=k * simplified,
            precondition_ok=inner <= 1,
            s_meets_threshold=s >= Decimal(m) ** (Decimal(1) / (r - 1)) - r,
        )
    return report
