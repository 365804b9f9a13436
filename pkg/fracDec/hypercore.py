# -*- coding: utf-8 -*-
"""
r-uniform hypergraphs on 0..n-1 with edges stored by colexicographic rank.

Dense hosts (at most DENSE_EDGE_LIMIT r-subsets) keep a bit-per-rank membership table, larger ones a set of
ranks. Every value is immutable once built.
"""
from collections import Counter
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from fracDec.errorhandling import InputError
from fracDec.utils.constants import DENSE_EDGE_LIMIT
from loguru import logger

VertexSet = Tuple[int, ...]
"""Strictly increasing tuple of vertex ids."""


def binom(a: int, b: int) -> int:
    """
    Binomial coefficient with C(a, b) = 0 whenever b < 0, a < 0 or b > a.
    """
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


@lru_cache(maxsize=64)
def _colex_table(n: int, r: int) -> Tuple[Tuple[int, ...], ...]:
    # row i holds C(c, i) for c in 0..n-1
    return tuple(tuple(comb(c, i) for c in range(n)) for i in range(r + 1))


def vertex_set(members: Iterable[int], n: Optional[int] = None) -> VertexSet:
    """
    Canonical VertexSet of members.

    Raises:
        InputError: repeated or negative vertices, or a vertex >= n
    """
    result = tuple(sorted(int(v) for v in members))
    if len(set(result)) != len(result):
        raise InputError(f"repeated vertex in {list(members)}")
    if result and result[0] < 0:
        raise InputError(f"negative vertex in {list(result)}")
    if n is not None and result and result[-1] >= n:
        raise InputError(f"vertex {result[-1]} out of range for n={n}")
    return result


def rank_edge(n: int, r: int, edge: Sequence[int]) -> int:
    """
    Colexicographic rank of an r-subset of 0..n-1, a bijection onto [0, C(n, r) - 1].

    Raises:
        InputError: edge is not an r-subset of 0..n-1
    """
    members = vertex_set(edge, n)
    if len(members) != r:
        raise InputError(f"edge {list(members)} has {len(members)} vertices, expected {r}")
    return _rank(n, r, members)


def _rank(n: int, r: int, members: VertexSet) -> int:
    table = _colex_table(n, r)
    return sum(table[i + 1][c] for i, c in enumerate(members))


def unrank_edge(n: int, r: int, rank: int) -> VertexSet:
    """
    Inverse of rank_edge.

    Raises:
        InputError: rank outside [0, C(n, r) - 1]
    """
    if not 0 <= rank < binom(n, r):
        raise InputError(f"rank {rank} out of range for C({n}, {r})")
    members = []
    c = n - 1
    for i in range(r, 0, -1):
        while comb(c, i) > rank:
            c -= 1
        members.append(c)
        rank -= comb(c, i)
        c -= 1
    return tuple(reversed(members))


class Hypergraph:
    """
    Immutable r-uniform hypergraph on the vertices 0..n-1.

    Attributes:
        n: vertex count.
        r: uniformity.
        ranks: sorted colex ranks of the edges.
        labels: ids of the vertices in the graph this one was cut from (links, induced subgraphs), if any.
    """

    def __init__(self, n: int, r: int, ranks: Iterable[int], labels: Optional[Sequence[int]] = None) -> None:
        if r < 1 or n < 0:
            raise InputError(f"invalid hypergraph parameters n={n}, r={r}")
        self.n = n
        self.r = r
        self.ranks: Tuple[int, ...] = tuple(sorted(set(ranks)))
        self.labels: Optional[Tuple[int, ...]] = tuple(labels) if labels is not None else None
        total = binom(n, r)
        if self.ranks and (self.ranks[0] < 0 or self.ranks[-1] >= total):
            raise InputError("edge rank out of range")
        if total <= DENSE_EDGE_LIMIT:
            table = bytearray((total + 7) // 8)
            for rank in self.ranks:
                table[rank >> 3] |= 1 << (rank & 7)
            self._table: Optional[bytearray] = table
            self._sparse: Optional[frozenset] = None
        else:
            self._table = None
            self._sparse = frozenset(self.ranks)

    @classmethod
    def from_edges(
        cls, n: int, r: int, edges: Iterable[Sequence[int]], labels: Optional[Sequence[int]] = None
    ) -> "Hypergraph":
        return cls(n, r, (_rank(n, r, tuple(sorted(e))) for e in edges), labels=labels)

    def has_rank(self, rank: int) -> bool:
        if self._table is not None:
            return 0 <= rank < len(self._table) * 8 and bool(self._table[rank >> 3] >> (rank & 7) & 1)
        return rank in self._sparse

    def has_edge(self, vertices: Sequence[int]) -> bool:
        """
        Parameters:
            vertices: r distinct vertices, in any order
        """
        members = tuple(sorted(vertices))
        if len(members) != self.r or not members or members[0] < 0 or members[-1] >= self.n:
            return False
        return self.has_rank(_rank(self.n, self.r, members))

    def rank(self, edge: Sequence[int]) -> int:
        """Colex rank of an r-subset of 0..n-1, unchecked; see rank_edge for the validating form."""
        return _rank(self.n, self.r, tuple(sorted(edge)))

    @cached_property
    def edges(self) -> Tuple[VertexSet, ...]:
        """Edges in colex order."""
        return tuple(unrank_edge(self.n, self.r, rank) for rank in self.ranks)

    @property
    def edge_count(self) -> int:
        return len(self.ranks)

    def is_complete(self) -> bool:
        return self.edge_count == binom(self.n, self.r)

    def label_of(self, v: int) -> int:
        return self.labels[v] if self.labels is not None else v

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.edges)

    def __len__(self) -> int:
        return self.edge_count

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.r, self.ranks) == (other.n, other.r, other.ranks)

    def __hash__(self) -> int:
        return hash((self.n, self.r, self.ranks))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, r={self.r}, edges={self.edge_count})"


class Matching:
    """
    Pairwise vertex-disjoint r-subsets, sorted by colex rank.
    """

    def __init__(self, edges: Iterable[Sequence[int]]) -> None:
        canonical = sorted({tuple(sorted(e)) for e in edges}, key=lambda e: e[::-1])
        self.edges: Tuple[VertexSet, ...] = tuple(canonical)

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for e in self.edges for v in e)

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, Matching) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def __repr__(self) -> str:
        return f"Matching({[list(e) for e in self.edges]})"


def build_matching(n: int, r: int, edges: Iterable[Sequence[int]]) -> Matching:
    """
    Raises:
        InputError: wrong arity, vertex out of range, repeated edge or two edges sharing a vertex
    """
    seen: Dict[int, VertexSet] = {}
    canonical = []
    for raw in edges:
        edge = vertex_set(raw, n)
        if len(edge) != r:
            raise InputError(f"matching edge {list(edge)} has {len(edge)} vertices, expected {r}")
        for v in edge:
            if v in seen:
                raise InputError(f"matching edges {list(seen[v])} and {list(edge)} share vertex {v}")
            seen[v] = edge
        canonical.append(edge)
    return Matching(canonical)


def build_graph(n: int, r: int, edges: Iterable[Sequence[int]]) -> Hypergraph:
    """
    Canonical hypergraph from an edge list; the result does not depend on the order of edges or of their vertices.

    Raises:
        InputError: r < 2, r > n, a wrong edge arity, a vertex out of range or a duplicate edge
    """
    if r < 2:
        raise InputError(f"uniformity r={r} must be at least 2")
    if r > n:
        raise InputError(f"uniformity r={r} exceeds vertex count n={n}")
    ranks = set()
    for raw in edges:
        edge = vertex_set(raw, n)
        if len(edge) != r:
            raise InputError(f"edge {list(raw)} has {len(edge)} distinct vertices, expected {r}")
        rank = _rank(n, r, edge)
        if rank in ranks:
            raise InputError(f"duplicate edge {list(edge)}")
        ranks.add(rank)
    return Hypergraph(n, r, ranks)


def complete_graph(n: int, r: int) -> Hypergraph:
    return Hypergraph(n, r, range(binom(n, r)))


def complete_minus(n: int, r: int, removed: Iterable[Sequence[int]]) -> Hypergraph:
    """
    K_n^r without the given edges; an edge listed twice is removed once.
    """
    gone = {rank_edge(n, r, e) for e in removed}
    return Hypergraph(n, r, (rank for rank in range(binom(n, r)) if rank not in gone))


def generate(spec: Mapping[str, Any]) -> Hypergraph:
    """
    Builds a generator shorthand: {"gen": name, "n": .., "r": .., "matching": [[..]]}.

    Names:
        complete: K_n^r.
        complete_minus_edge: K_n^r without "edge" (or the single edge of "matching").
        complete_minus_matching: K_n^r without the edges of "matching", which must be a matching.
        complete_minus_matchings: K_n^r without the edge-set union of "matchings".
    """
    try:
        name, n, r = spec["gen"], int(spec["n"]), int(spec["r"])
    except (KeyError, TypeError, ValueError) as ex:
        raise InputError(f"generator spec needs gen, n and r: {ex}")
    if not 2 <= r <= n:
        raise InputError(f"generator needs 2 <= r <= n, got n={n}, r={r}")
    if name == "complete":
        return complete_graph(n, r)
    if name == "complete_minus_edge":
        edge = spec.get("edge") or (spec.get("matching") or [None])[0]
        if edge is None:
            raise InputError("complete_minus_edge needs an edge")
        return complete_minus(n, r, [edge])
    if name == "complete_minus_matching":
        matching = build_matching(n, r, spec.get("matching", []))
        return complete_minus(n, r, matching.edges)
    if name == "complete_minus_matchings":
        matchings = [build_matching(n, r, m) for m in spec.get("matchings", [])]
        return complete_minus(n, r, [e for m in matchings for e in m])
    raise InputError(f"unknown generator {name!r}")


def complement(G: Hypergraph) -> Hypergraph:
    """
    The r-subsets of 0..n-1 that are not edges of G.
    """
    return Hypergraph(G.n, G.r, (rank for rank in range(binom(G.n, G.r)) if not G.has_rank(rank)), labels=G.labels)


def degree_profile(G: Hypergraph, i: int) -> Counter:
    """
    Number of edges through every i-set that lies in at least one edge.

    Returns:
        Counter i-set -> degree; i-sets of degree 0 are absent
    """
    if not 0 <= i <= G.r:
        raise InputError(f"subset size {i} outside 0..{G.r}")
    profile: Counter = Counter()
    for edge in G.edges:
        profile.update(combinations(edge, i))
    return profile


def codegree_min(G: Hypergraph) -> int:
    """
    delta_{r-1}(G): least number of edges through an (r-1)-set.
    """
    profile = degree_profile(G, G.r - 1)
    if len(profile) < binom(G.n, G.r - 1):
        return 0
    return min(profile.values())


def codegree_max(G: Hypergraph) -> int:
    """
    Delta_{r-1}(G): most edges through an (r-1)-set.
    """
    return max(degree_profile(G, G.r - 1).values(), default=0)


def vertex_degree_max(G: Hypergraph) -> int:
    """
    Delta_1(G).
    """
    return max(degree_profile(G, 1).values(), default=0)


def link_graph(G: Hypergraph, u: int) -> Hypergraph:
    """
    (r-1)-uniform link of u, on the vertices incident with u only, relabeled 0.. in increasing order.
    labels maps the new ids back to the vertices of G.

    Raises:
        InputError: u out of range
    """
    if not 0 <= u < G.n:
        raise InputError(f"vertex {u} out of range for n={G.n}")
    rest = [tuple(v for v in edge if v != u) for edge in G.edges if u in edge]
    vertices = sorted({v for edge in rest for v in edge})
    index = {v: j for j, v in enumerate(vertices)}
    return Hypergraph.from_edges(
        len(vertices), G.r - 1, ([index[v] for v in edge] for edge in rest), labels=[G.label_of(v) for v in vertices]
    )


def is_divisible(G: Hypergraph, q: int) -> bool:
    """
    K_q^r-divisibility: C(q - i, r - i) divides the degree of every i-set, i in 0..r-1.

    Raises:
        InputError: q <= r
    """
    if q <= G.r:
        raise InputError(f"divisibility needs q > r, got q={q}, r={G.r}")
    for i in range(G.r):
        divisor = binom(q - i, G.r - i)
        if any(degree % divisor for degree in degree_profile(G, i).values()):
            logger.debug("not K_{}^{}-divisible at subset size {}", q, G.r, i)
            return False
    return True


def enumerate_cliques(G: Hypergraph, q: int) -> List[VertexSet]:
    """
    Every q-set all of whose r-subsets are edges of G, in colex order.

    Ordered backtracking: a vertex w stays a candidate after v is appended to S when every r-set made of
    (r - 2) vertices of S plus v and w is an edge.
    """
    r = G.r
    if q < r:
        raise InputError(f"clique size q={q} below uniformity r={r}")
    if q > G.n:
        return []
    found: List[VertexSet] = []

    def extend(current: List[int], candidates: List[int]) -> None:
        if len(current) == q:
            found.append(tuple(current))
            return
        need = q - len(current)
        for position, v in enumerate(candidates):
            if len(candidates) - position < need:
                break
            tails = list(combinations(current, r - 2))
            survivors = [
                w for w in candidates[position + 1 :] if all(G.has_edge(tail + (v, w)) for tail in tails)
            ]
            current.append(v)
            extend(current, survivors)
            current.pop()

    extend([], list(range(G.n)))
    found.sort(key=lambda clique: clique[::-1])
    return found


def induced(G: Hypergraph, S: Sequence[int]) -> Hypergraph:
    """
    Subgraph induced on S, relabeled so that S[j] becomes vertex j.

    Raises:
        InputError: |S| < r, repeated or out-of-range vertices
    """
    members = [int(v) for v in S]
    vertex_set(members, G.n)
    if len(members) < G.r:
        raise InputError(f"induced subgraph needs at least r={G.r} vertices, got {len(members)}")
    index = {v: j for j, v in enumerate(members)}
    k = len(members)
    if binom(k, G.r) <= G.edge_count:
        kept = (
            [index[v] for v in subset] for subset in combinations(members, G.r) if G.has_edge(subset)
        )
    else:
        kept = ([index[v] for v in edge] for edge in G.edges if all(v in index for v in edge))
    return Hypergraph.from_edges(k, G.r, kept, labels=[G.label_of(v) for v in members])
