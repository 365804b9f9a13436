# -*- coding: utf-8 -*-
"""
Matching machinery: the quasi-independent subset distribution, exact deficiencies of the matching sampler,
the decomposition of K_n^r - M and its extension to unions of matchings.

The sampler picks X_i from the quasi-independent distribution on every matching edge e_i and every unmatched
vertex with probability p. Every deficiency is an exact convolution of per-edge size distributions.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from fracDec.calculus import almost_to_full, concatenate
from fracDec.errorhandling import DeficiencyError, InputError, InternalConsistencyError, PreconditionError
from fracDec.helpers import parallel_map
from fracDec.hypercore import Hypergraph, Matching, VertexSet, binom, build_matching, complete_minus, vertex_set
from fracDec.models.families import FamilyTypes
from fracDec.models.reports import DeficiencyClass, DeficiencyReport
from fracDec.packing import ImplicitPacking, PackingView, relabel
from fracDec.symdecomp import complete_symmetric, missing_edge_packing
from fracDec.utils.constants import DEFAULT_MATERIALIZE_LIMIT, DEFAULT_P
from loguru import logger

ZERO = Fraction(0)
ONE = Fraction(1)

Signature = Tuple[Tuple[int, ...], int]
"""(sorted nonzero intersection sizes with the matching edges, number of unmatched vertices)."""


class SizeDistribution:
    """
    Exact distribution of a nonnegative integer count.

    Attributes:
        masses: masses[j] = Pr[count = j].
    """

    def __init__(self, masses: Sequence[Fraction], check: bool = True) -> None:
        masses = [Fraction(m) for m in masses]
        while len(masses) > 1 and masses[-1] == 0:
            masses.pop()
        self.masses: Tuple[Fraction, ...] = tuple(masses)
        if check:
            if any(m < 0 for m in self.masses):
                raise InternalConsistencyError("negative mass in a size distribution")
            if sum(self.masses, ZERO) != 1:
                raise InternalConsistencyError(f"size distribution sums to {sum(self.masses, ZERO)}")

    @classmethod
    def point(cls, value: int) -> "SizeDistribution":
        return cls([ZERO] * value + [ONE], check=False)

    @classmethod
    def binomial(cls, trials: int, p: Fraction) -> "SizeDistribution":
        return cls([binom(trials, j) * p**j * (1 - p) ** (trials - j) for j in range(trials + 1)], check=False)

    @classmethod
    def bernoulli(cls, p: Fraction) -> "SizeDistribution":
        return cls([1 - p, p], check=False)

    def convolve(self, other: "SizeDistribution") -> "SizeDistribution":
        out = [ZERO] * (len(self.masses) + len(other.masses) - 1)
        for i, a in enumerate(self.masses):
            if not a:
                continue
            for j, b in enumerate(other.masses):
                if b:
                    out[i + j] += a * b
        return SizeDistribution(out, check=False)

    def power(self, times: int) -> "SizeDistribution":
        result = SizeDistribution.point(0)
        base = self
        while times:
            if times & 1:
                result = result.convolve(base)
            base = base.convolve(base)
            times >>= 1
        return result

    def mass_below(self, threshold: int) -> Fraction:
        """Pr[count < threshold]."""
        return sum(self.masses[: max(threshold, 0)], ZERO)

    def mean(self) -> Fraction:
        return sum((j * m for j, m in enumerate(self.masses)), ZERO)

    def __getitem__(self, j: int) -> Fraction:
        return self.masses[j] if 0 <= j < len(self.masses) else ZERO

    def __eq__(self, other) -> bool:
        return isinstance(other, SizeDistribution) and self.masses == other.masses

    def __repr__(self) -> str:
        return f"SizeDistribution({[str(m) for m in self.masses]})"


class SubsetDistribution:
    """
    Quasi-independent distribution on the subsets of an r-set: Pr[T' contains T] = p^|T| for every proper T,
    and the full set has probability 0. Every subset of size t has the same mass
    p^t ((1 - p)^(r - t) - (-1)^(r - t) p^(r - t)).

    Attributes:
        by_size: by_size[t] is the mass of one subset of size t.
    """

    def __init__(self, r: int, p: Fraction) -> None:
        p = Fraction(p)
        if r < 2:
            raise InputError(f"subset distribution needs r >= 2, got {r}")
        if not 0 < p < 1:
            raise InputError(f"probability p={p} outside (0, 1)")
        self.r = r
        self.p = p
        self.by_size: Tuple[Fraction, ...] = tuple(
            p**t * ((1 - p) ** (r - t) - (-1) ** (r - t) * p ** (r - t)) for t in range(r)
        ) + (ZERO,)
        negative = [t for t, mass in enumerate(self.by_size) if mass < 0]
        if negative:
            witness = r - 2 if r - 2 in negative else negative[0]
            logger.warning("p={} gives negative mass {} at subset size {}", p, self.by_size[witness], witness)
            raise PreconditionError(
                f"p={p} > 1/2 gives negative mass {self.by_size[witness]} to subsets of size {witness}",
                witness=witness,
            )
        self._verify()

    def _verify(self) -> None:
        r = self.r
        if sum((binom(r, t) * mass for t, mass in enumerate(self.by_size)), ZERO) != 1:
            raise InternalConsistencyError(f"subset distribution r={r}, p={self.p} does not sum to 1")
        for t in range(r):
            if self.marginal(t) != self.p**t:
                raise InternalConsistencyError(f"marginal at size {t} differs from p^{t}")

    def prob(self, subset: Sequence[int]) -> Fraction:
        """Mass of one subset of 0..r-1."""
        return self.by_size[len(set(subset))]

    def marginal(self, t: int) -> Fraction:
        """Pr[X contains a fixed t-set]."""
        return sum((binom(self.r - t, j - t) * self.by_size[j] for j in range(t, self.r + 1)), ZERO)

    def __repr__(self) -> str:
        return f"SubsetDistribution(r={self.r}, p={self.p})"


@lru_cache(maxsize=None)
def quasi_independent_distribution(r: int, p: Fraction = DEFAULT_P) -> SubsetDistribution:
    """
    Raises:
        PreconditionError: p > 1/2, witness is the subset size with negative mass
    """
    return SubsetDistribution(r, Fraction(p))


def size_distribution(dist: SubsetDistribution, t: int) -> SizeDistribution:
    """
    Distribution of |X_i| given that a fixed t-subset lies in X_i.

    Raises:
        PreconditionError: t = r, a zero-probability event
        InputError: t outside 0..r
    """
    if t == dist.r:
        raise PreconditionError(f"conditioning on the full {dist.r}-set, an event of probability 0", witness=t)
    if not 0 <= t < dist.r:
        raise InputError(f"conditioning size {t} outside 0..{dist.r - 1}")
    scale = dist.p**t
    return SizeDistribution(
        [ZERO] * t + [binom(dist.r - t, j - t) * dist.by_size[j] / scale for j in range(t, dist.r + 1)]
    )


def _check_matching(n: int, r: int, M) -> Matching:
    if isinstance(M, Matching):
        if any(len(e) != r or e[-1] >= n for e in M.edges):
            raise InputError(f"matching {M!r} does not fit n={n}, r={r}")
        return M
    return build_matching(n, r, M)


def _check_sampler(n: int, r: int, q: int, p: Fraction) -> Fraction:
    p = Fraction(p)
    if r < 2 or q <= r:
        raise InputError(f"matching constructions need q > r >= 2, got r={r}, q={q}")
    if r * q > n:
        raise InputError(f"matching constructions need rq <= n, got rq={r * q}, n={n}")
    if not 0 < p <= Fraction(1, 2):
        raise InputError(f"sampling probability p={p} outside (0, 1/2]")
    return p


def signature(S: Sequence[int], M: Matching) -> Signature:
    """
    Orbit label of a vertex set under the symmetries of K_n^r - M.
    """
    members = set(S)
    sizes = sorted((len(members.intersection(e)) for e in M.edges), reverse=True)
    matched = M.vertices
    return tuple(size for size in sizes if size), sum(1 for v in members if v not in matched)


@lru_cache(maxsize=4096)
def _conditional_sizes(n: int, r: int, matched: int, p: Fraction, sig: Signature) -> Optional[SizeDistribution]:
    sizes, free_inside = sig
    if any(t >= r for t in sizes):
        return None
    dist = quasi_independent_distribution(r, p)
    total = SizeDistribution.point(free_inside)
    for t in sizes:
        total = total.convolve(size_distribution(dist, t))
    untouched = matched - len(sizes)
    if untouched:
        total = total.convolve(size_distribution(dist, 0).power(untouched))
    free_outside = n - matched * r - free_inside
    if free_outside < 0:
        raise InputError(f"signature {sig} does not fit n={n}")
    return total.convolve(SizeDistribution.binomial(free_outside, p))


def conditional_size_distribution(n: int, r: int, M, p: Fraction, S: Sequence[int]) -> Optional[SizeDistribution]:
    """
    Distribution of |X| given S lies in X; None when S contains a matching edge (probability 0).
    """
    M = _check_matching(n, r, M)
    members = vertex_set(S, n)
    return _conditional_sizes(n, r, len(M), Fraction(p), signature(members, M))


def deficiency_exact(n: int, r: int, q: int, M, p: Fraction, e: Sequence[int]) -> Fraction:
    """
    Pr[|X| < rq given V(e) in X], by convolution.

    Raises:
        PreconditionError: e is an edge of M
    """
    p = _check_sampler(n, r, q, p)
    M = _check_matching(n, r, M)
    edge = vertex_set(e, n)
    if len(edge) != r:
        raise InputError(f"edge {list(e)} must have {r} vertices")
    distribution = _conditional_sizes(n, r, len(M), p, signature(edge, M))
    if distribution is None:
        raise PreconditionError(f"{list(edge)} is an edge of the matching", witness=edge)
    return distribution.mass_below(r * q)


def auxiliary_distribution(n: int, r: int, M, p: Fraction, e: Sequence[int]) -> SizeDistribution:
    """
    Distribution of Y = #{matching edges disjoint from e with X_i nonempty} + |X outside V(M) and e|,
    a sum of independent Bernoulli variables with |X| >= Y.
    """
    M = _check_matching(n, r, M)
    edge = vertex_set(e, n)
    dist = quasi_independent_distribution(r, Fraction(p))
    disjoint = sum(1 for f in M.edges if not set(f).intersection(edge))
    matched = M.vertices
    free_outside = n - len(M) * r - sum(1 for v in edge if v not in matched)
    nonempty = SizeDistribution.bernoulli(1 - dist.by_size[0]).power(disjoint)
    return nonempty.convolve(SizeDistribution.binomial(free_outside, Fraction(p)))


def iter_outcomes(n: int, r: int, M, p: Fraction) -> Iterator[Tuple[VertexSet, Fraction]]:
    """
    Every outcome T of the sampler with Pr[X = T] > 0, with that probability.
    """
    M = _check_matching(n, r, M)
    p = Fraction(p)
    dist = quasi_independent_distribution(r, p)
    matched = M.vertices
    free = [v for v in range(n) if v not in matched]
    per_edge: List[List[Tuple[Tuple[int, ...], Fraction]]] = [
        [(chosen, dist.by_size[size]) for size in range(r) if dist.by_size[size] for chosen in combinations(e, size)]
        for e in M.edges
    ]
    per_free = [[((), 1 - p), ((v,), p)] for v in free]
    for choice in product(*per_edge, *per_free):
        prob = ONE
        members: List[int] = []
        for chosen, mass in choice:
            prob *= mass
            members.extend(chosen)
        yield tuple(sorted(members)), prob


def deficiency_by_enumeration(n: int, r: int, q: int, M, p: Fraction, e: Sequence[int]) -> Fraction:
    """
    Brute-force Pr[|X| < rq given V(e) in X] over all outcomes.
    """
    members = set(e)
    through = ZERO
    short = ZERO
    for outcome, prob in iter_outcomes(n, r, M, p):
        if members.issubset(outcome):
            through += prob
            if len(outcome) < r * q:
                short += prob
    if through == 0:
        raise PreconditionError(f"{sorted(members)} is never contained in X", witness=tuple(sorted(members)))
    return short / through


def edge_classes(n: int, r: int, M) -> List[Tuple[Signature, VertexSet]]:
    """
    One representative edge per orbit of K_n^r - M, sorted by signature.
    """
    M = _check_matching(n, r, M)
    matched = M.vertices
    free = [v for v in range(n) if v not in matched]
    classes: List[Tuple[Signature, VertexSet]] = []

    def partitions(total: int, most: int, parts: int) -> Iterator[Tuple[int, ...]]:
        if total == 0:
            yield ()
            return
        if parts == 0:
            return
        for first in range(min(total, most), 0, -1):
            for rest in partitions(total - first, first, parts - 1):
                yield (first,) + rest

    for free_count in range(min(r, len(free)) + 1):
        for sizes in partitions(r - free_count, r - 1, len(M)):
            members = list(free[:free_count])
            for size, matching_edge in zip(sizes, M.edges):
                members.extend(matching_edge[:size])
            classes.append(((sizes, free_count), tuple(sorted(members))))
    classes.sort()
    return classes


def deficiency_report(
    n: int,
    r: int,
    q: int,
    M,
    p: Fraction = DEFAULT_P,
    limit: int = DEFAULT_MATERIALIZE_LIMIT,
    workers: int = 1,
) -> DeficiencyReport:
    """
    Exact deficiency of every orbit of edges of K_n^r - M against 1/C(rq, r); per edge when C(n, r) <= limit.
    """
    p = _check_sampler(n, r, q, p)
    M = _check_matching(n, r, M)
    classes = edge_classes(n, r, M)
    etas = parallel_map(lambda item: deficiency_exact(n, r, q, M, p, item[1]), classes, workers)
    records = [
        DeficiencyClass(signature=sig, representative=rep, eta=eta) for (sig, rep), eta in zip(classes, etas)
    ]
    by_signature = {record.signature: record.eta for record in records}
    per_edge: Dict[int, Fraction] = {}
    if binom(n, r) <= limit:
        host = complete_minus(n, r, M.edges)
        per_edge = {rank: by_signature[signature(edge, M)] for rank, edge in zip(host.ranks, host.edges)}
    max_eta = max(etas, default=ZERO)
    threshold = Fraction(1, binom(r * q, r))
    report = DeficiencyReport(
        n=n,
        r=r,
        q=q,
        p=p,
        per_edge_eta=per_edge,
        classes=records,
        max_eta=max_eta,
        threshold=threshold,
        passed=max_eta <= threshold,
    )
    logger.bind(payload={str(record.signature): str(record.eta) for record in records}).debug(
        "deficiency n={} r={} q={} |M|={}: max {} vs {}", n, r, q, len(M), max_eta, threshold
    )
    return report


def _outcome_probability(
    dist: SubsetDistribution, M: Matching, matched: frozenset, free_count: int, T: VertexSet
) -> Fraction:
    members = set(T)
    prob = ONE
    for e in M.edges:
        prob *= dist.by_size[len(members.intersection(e))]
        if not prob:
            return ZERO
    chosen = sum(1 for v in members if v not in matched)
    return prob * dist.p**chosen * (1 - dist.p) ** (free_count - chosen)


def matching_almost_packing(n: int, r: int, q: int, M, p: Fraction = DEFAULT_P) -> PackingView:
    """
    Packing of K_n^r - M by its cliques with at least rq vertices: T gets Pr[X = T] / p^r.
    Its boundary at e is 1 - deficiency_exact(e).
    """
    p = _check_sampler(n, r, q, p)
    M = _check_matching(n, r, M)
    dist = quasi_independent_distribution(r, p)
    host = complete_minus(n, r, M.edges)
    matched = M.vertices
    free_count = n - len(matched)
    scale = 1 / p**r
    size = r * q

    def weight_fn(T: VertexSet) -> Fraction:
        if len(T) < size or len(set(T)) != len(T) or T[0] < 0 or T[-1] >= n:
            return ZERO
        return _outcome_probability(dist, M, matched, free_count, T) * scale

    def boundary_fn(rank: int, edge: VertexSet) -> Fraction:
        return 1 - deficiency_exact(n, r, q, M, p, edge)

    def support_fn() -> Iterator[Tuple[VertexSet, Fraction]]:
        for outcome, prob in iter_outcomes(n, r, M, p):
            if len(outcome) >= size:
                yield outcome, prob * scale

    bound = (2**r - 1) ** len(M) * 2**free_count
    return ImplicitPacking(host, FamilyTypes.big_clique, weight_fn, boundary_fn, support_fn, bound)


def matching_clique_packing(n: int, r: int, q: int, M, p: Fraction = DEFAULT_P) -> PackingView:
    """
    The matching packing concatenated with the symmetric K_{rq}^r-decomposition of every big clique, in closed
    form: a copy Q gets p^(rq - r) * E[1 / C(|X| - r, rq - r) given V(Q) in X], and 0 when it contains an edge
    of M. Its boundary at e is 1 - deficiency_exact(e).
    """
    p = _check_sampler(n, r, q, p)
    M = _check_matching(n, r, M)
    host = complete_minus(n, r, M.edges)
    size = r * q
    factor = p ** (size - r)
    matched = len(M)
    weights: Dict[Signature, Fraction] = {}

    def weight_of(sig: Signature) -> Fraction:
        if sig not in weights:
            distribution = _conditional_sizes(n, r, matched, p, sig)
            if distribution is None:
                weights[sig] = ZERO
            else:
                masses = enumerate(distribution.masses)
                expectation = sum((mass / binom(j - r, size - r) for j, mass in masses if j >= size and mass), ZERO)
                weights[sig] = factor * expectation
        return weights[sig]

    def weight_fn(Q: VertexSet) -> Fraction:
        if len(Q) != size or len(set(Q)) != size or Q[0] < 0 or Q[-1] >= n:
            return ZERO
        return weight_of(signature(Q, M))

    def boundary_fn(rank: int, edge: VertexSet) -> Fraction:
        return 1 - deficiency_exact(n, r, q, M, p, edge)

    def support_fn() -> Iterator[Tuple[VertexSet, Fraction]]:
        for Q in combinations(range(n), size):
            value = weight_of(signature(Q, M))
            if value:
                yield Q, value

    return ImplicitPacking(host, FamilyTypes.clique, weight_fn, boundary_fn, support_fn, binom(n, size), order=size)


def decompose_minus_matching(
    n: int,
    r: int,
    q: int,
    M,
    p: Fraction = DEFAULT_P,
    limit: int = DEFAULT_MATERIALIZE_LIMIT,
    workers: int = 1,
) -> PackingView:
    """
    Fractional K_q^r-decomposition of K_n^r - M.

    K_n^r itself and K_{rq}^r minus one edge are decomposed exactly by the symmetric solvers; otherwise the
    sampler's deficiency is checked against 1/C(rq, r) and the closed-form K_{rq}^r packing is turned into a
    full decomposition.

    Raises:
        DeficiencyError: the largest deficiency exceeds 1/C(rq, r); carries the report
    """
    p = _check_sampler(n, r, q, p)
    M = _check_matching(n, r, M)
    if not len(M):
        return complete_symmetric(n, q, r)
    if n == r * q and len(M) == 1:
        return missing_edge_packing(q, r, M.edges[0])
    report = deficiency_report(n, r, q, M, p, limit=limit, workers=workers)
    if not report.passed:
        logger.bind(payload={"max_eta": str(report.max_eta), "threshold": str(report.threshold)}).warning(
            "deficiency check failed for n={} r={} q={} |M|={}", n, r, q, len(M)
        )
        worst = max(report.classes, key=lambda record: record.eta)
        raise DeficiencyError(
            f"deficiency {report.max_eta} exceeds {report.threshold} at n={n}",
            report=report,
            witness=worst.representative,
        )
    logger.info("decomposing K_{}^{} minus {} matching edges via K_{}^{} copies", n, r, len(M), r * q, r)
    return almost_to_full(matching_clique_packing(n, r, q, M, p), q, r, workers=workers, limit=limit)


def greedy_edge_color(H: Hypergraph) -> List[Matching]:
    """
    Edges in rank order, each into the first class it shares no vertex with; at most r (Delta_1 - 1) + 1 classes.
    """
    classes: List[List[VertexSet]] = []
    used: List[set] = []
    for edge in H.edges:
        for members, vertices in zip(classes, used):
            if vertices.isdisjoint(edge):
                members.append(edge)
                vertices.update(edge)
                break
        else:
            classes.append([edge])
            used.append(set(edge))
    return [Matching(members) for members in classes]


@lru_cache(maxsize=256)
def _strip_feasible(s: int, r: int, q: int, j: int, p: Fraction) -> bool:
    if j == 0 or (s == r * q and j == 1):
        return True
    if j * r > s or r * q > s:
        return False
    canonical = [tuple(range(i * r, (i + 1) * r)) for i in range(j)]
    return deficiency_report(s, r, q, canonical, p, limit=0).passed


def _stripping_size(n: int, r: int, q: int, edges: int, p: Fraction) -> Optional[int]:
    # the outer decomposition into K_s^r copies needs rs <= n
    for s in range(r * q, n // r + 1):
        if all(_strip_feasible(s, r, q, j, p) for j in range(min(edges, s // r) + 1)):
            return s
    return None


@lru_cache(maxsize=256)
def _canonical_strip(s: int, r: int, q: int, j: int, p: Fraction, limit: int) -> PackingView:
    canonical = [tuple(range(i * r, (i + 1) * r)) for i in range(j)]
    return decompose_minus_matching(s, r, q, canonical, p, limit=limit)


def decompose_minus_matchings(
    n: int,
    r: int,
    q: int,
    Ms: Sequence,
    p: Fraction = DEFAULT_P,
    limit: int = DEFAULT_MATERIALIZE_LIMIT,
    workers: int = 1,
    _depth: int = 0,
) -> PackingView:
    """
    Fractional K_q^r-decomposition of K_n^r minus the edge-set union of the matchings Ms.

    Induction on the number of matchings: K_n^r minus all but the last matching is decomposed into K_s^r copies,
    s the smallest clique size in which every possible restriction of the last matching can be stripped, then
    each copy minus the last matching is decomposed into K_q^r copies and the two are concatenated.

    Raises:
        DeficiencyError: some stage has no feasible stripping size or fails its deficiency check; depth is the
        number of matchings stripped before that stage
    """
    p = _check_sampler(n, r, q, p)
    matchings: List[Matching] = []
    seen: set = set()
    for M in Ms:
        M = _check_matching(n, r, M)
        fresh = [e for e in M.edges if e not in seen]
        seen.update(fresh)
        if fresh:
            matchings.append(Matching(fresh))
    if not matchings:
        return complete_symmetric(n, q, r)
    if len(matchings) == 1:
        try:
            return decompose_minus_matching(n, r, q, matchings[0], p, limit=limit, workers=workers)
        except DeficiencyError as ex:
            raise DeficiencyError(str(ex), report=ex.report, depth=_depth, witness=ex.witness) from ex

    last = matchings[-1]
    depth = _depth + len(matchings) - 1
    s = _stripping_size(n, r, q, len(last), p)
    if s is None:
        raise DeficiencyError(f"no clique size up to n={n} strips {len(last)} matching edges", depth=depth)
    logger.info("stripping {} matching edges inside K_{}^{} copies (depth {})", len(last), s, r, depth)
    outer = decompose_minus_matchings(n, r, s, matchings[:-1], p, limit=limit, workers=workers, _depth=_depth)
    last_edges = set(last.edges)

    def inner(S: VertexSet) -> PackingView:
        inside = [e for e in last_edges if set(e).issubset(S)]
        local_edges = [tuple(S.index(v) for v in e) for e in sorted(inside, key=lambda e: e[::-1])]
        canonical = _canonical_strip(s, r, q, len(local_edges), p, limit)
        mapping = [v for e in local_edges for v in e]
        placed = set(mapping)
        mapping += [v for v in range(s) if v not in placed]
        local_host = complete_minus(s, r, local_edges)
        return relabel(canonical, mapping, local_host)

    host = complete_minus(n, r, list(seen))
    result = concatenate(outer, inner, workers=workers, limit=limit).with_host(host)
    if result.support_bound <= limit:
        return result.materialize(limit)
    return result
