# -*- coding: utf-8 -*-
"""
Fractional packings: nonnegative exact weights on cliques (or induced k-sets) of a host, with the boundary
operator d(e) = sum of the weights of the support elements through e.
"""
from abc import ABC, abstractmethod
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from fracDec.errorhandling import InputError, ResourceBudgetError
from fracDec.helpers import parallel_map
from fracDec.hypercore import Hypergraph, VertexSet
from fracDec.models.families import FamilyTypes
from fracDec.models.reports import BoundaryReport
from fracDec.utils.constants import DEFAULT_MATERIALIZE_LIMIT
from loguru import logger

ZERO = Fraction(0)
ONE = Fraction(1)


class PackingView(ABC):
    """
    Weight function over a support family of a host hypergraph.

    Attributes:
        host: the decomposed hypergraph.
        family: tag of the support family.
        order: size of every support element for clique and induced k-set families, None for big cliques.
    """

    def __init__(self, host: Hypergraph, family: FamilyTypes, order: Optional[int]) -> None:
        self.host = host
        self.family = family
        self.order = order

    @abstractmethod
    def weight(self, element: Sequence[int]) -> Fraction:
        """Weight of one support element, 0 outside the support."""

    @abstractmethod
    def _boundary(self, rank: int, edge: VertexSet) -> Fraction:
        """Boundary at a host edge, given by rank and vertices."""

    @abstractmethod
    def support(self) -> Iterator[Tuple[VertexSet, Fraction]]:
        """(element, weight) pairs with positive weight, in a deterministic order."""

    @property
    @abstractmethod
    def support_bound(self) -> int:
        """Upper bound on the number of support elements."""

    @property
    def explicit(self) -> bool:
        return False

    def boundary(self, edge: Sequence[int]) -> Fraction:
        """
        Exact boundary at edge.

        Raises:
            InputError: edge is not an edge of the host
        """
        members = tuple(sorted(edge))
        if not self.host.has_edge(members):
            raise InputError(f"{list(members)} is not an edge of the host")
        return self._boundary(self.host.rank(members), members)

    def materialize(self, limit: int = DEFAULT_MATERIALIZE_LIMIT) -> "ExplicitPacking":
        """
        Explicit copy of the packing.

        Raises:
            ResourceBudgetError: the support bound exceeds limit
        """
        if self.support_bound > limit:
            raise ResourceBudgetError(
                f"support of up to {self.support_bound} elements exceeds the materialization limit {limit}",
                budget="materialize_limit",
                limit=limit,
            )
        return ExplicitPacking(self.host, self.family, dict(self.support()), order=self.order, check=False)

    def scale(self, c: Fraction) -> "PackingView":
        return scale(self, c)

    def relabel(self, mapping: Sequence[int], host: Hypergraph) -> "PackingView":
        return relabel(self, mapping, host)

    def with_host(self, host: Hypergraph) -> "PackingView":
        return with_host(self, host)

    def __repr__(self) -> str:
        kind = "explicit" if self.explicit else "implicit"
        return f"{type(self).__name__}({kind}, {self.family.readable_name}, host={self.host!r})"


class ExplicitPacking(PackingView):
    """
    Finite list of (element, weight) pairs.

    Parameters:
        host: hypergraph the packing decomposes
        family: support family tag
        entries: element -> weight, zero weights are dropped
        order: element size of uniform families
        check: reject negative weights and support elements that are not cliques of the host
    """

    def __init__(
        self,
        host: Hypergraph,
        family: FamilyTypes,
        entries: Dict[Sequence[int], Fraction],
        order: Optional[int] = None,
        check: bool = True,
    ) -> None:
        super().__init__(host, family, order)
        canonical: Dict[VertexSet, Fraction] = {}
        for element, value in entries.items():
            value = Fraction(value)
            key = tuple(sorted(element))
            if check:
                self._check_element(key, value)
            if value:
                canonical[key] = canonical.get(key, ZERO) + value
        self.entries: Dict[VertexSet, Fraction] = dict(sorted(canonical.items(), key=lambda item: item[0][::-1]))

    def _check_element(self, element: VertexSet, value: Fraction) -> None:
        if value < 0:
            raise InputError(f"negative weight {value} on {list(element)}")
        if len(set(element)) != len(element) or (element and (element[0] < 0 or element[-1] >= self.host.n)):
            raise InputError(f"support element {list(element)} is not a vertex set of the host")
        if self.family.uniform_size and self.order is not None and len(element) != self.order:
            raise InputError(f"support element {list(element)} does not have {self.order} vertices")
        if self.family is not FamilyTypes.induced_k_set and value:
            for sub in combinations(element, self.host.r):
                if not self.host.has_edge(sub):
                    raise InputError(f"support element {list(element)} is not a clique: {list(sub)} is missing")

    @property
    def explicit(self) -> bool:
        return True

    @property
    def support_bound(self) -> int:
        return len(self.entries)

    def weight(self, element: Sequence[int]) -> Fraction:
        return self.entries.get(tuple(sorted(element)), ZERO)

    def support(self) -> Iterator[Tuple[VertexSet, Fraction]]:
        return iter(self.entries.items())

    @cached_property
    def incidence(self) -> Dict[int, Fraction]:
        """
        Host edge rank -> boundary, accumulated once over the support.
        """
        totals: Dict[int, Fraction] = {}
        for element, value in self.entries.items():
            for sub in combinations(element, self.host.r):
                if self.host.has_edge(sub):
                    rank = self.host.rank(sub)
                    totals[rank] = totals.get(rank, ZERO) + value
        return totals

    def _boundary(self, rank: int, edge: VertexSet) -> Fraction:
        return self.incidence.get(rank, ZERO)

    def boundary_by_summation(self, edge: Sequence[int]) -> Fraction:
        """
        Boundary at edge summed directly over the support elements containing it.
        """
        members = set(edge)
        return sum((value for element, value in self.entries.items() if members.issubset(element)), ZERO)


class ImplicitPacking(PackingView):
    """
    Packing given by evaluators instead of a stored support.

    Parameters:
        weight_fn: element -> weight
        boundary_fn: (edge rank, edge) -> exact boundary
        support_fn: () -> iterator over the positive-weight (element, weight) pairs
        support_bound: upper bound on the number of support elements
    """

    def __init__(
        self,
        host: Hypergraph,
        family: FamilyTypes,
        weight_fn: Callable[[VertexSet], Fraction],
        boundary_fn: Callable[[int, VertexSet], Fraction],
        support_fn: Callable[[], Iterable[Tuple[VertexSet, Fraction]]],
        support_bound: int,
        order: Optional[int] = None,
    ) -> None:
        super().__init__(host, family, order)
        self._weight_fn = weight_fn
        self._boundary_fn = boundary_fn
        self._support_fn = support_fn
        self._support_bound = support_bound

    @property
    def support_bound(self) -> int:
        return self._support_bound

    def weight(self, element: Sequence[int]) -> Fraction:
        return self._weight_fn(tuple(sorted(element)))

    def _boundary(self, rank: int, edge: VertexSet) -> Fraction:
        return self._boundary_fn(rank, edge)

    def support(self) -> Iterator[Tuple[VertexSet, Fraction]]:
        return ((element, value) for element, value in self._support_fn() if value)


def boundary(P: PackingView, f: Sequence[int]) -> Fraction:
    return P.boundary(f)


def _check_coefficient(c: Fraction) -> Fraction:
    c = Fraction(c)
    if c < 0:
        raise InputError(f"negative coefficient {c}")
    return c


def linear_combine(terms: Sequence[Tuple[Fraction, PackingView]]) -> PackingView:
    """
    Nonnegative combination of packings on one host; the boundary of the result is the same combination of
    the boundaries.

    Raises:
        InputError: no terms, a negative coefficient, different hosts or different families
    """
    if not terms:
        raise InputError("linear_combine needs at least one term")
    terms = [(_check_coefficient(c), P) for c, P in terms]
    first = terms[0][1]
    for _, P in terms[1:]:
        if P.host != first.host:
            raise InputError(f"host mismatch: {P.host!r} vs {first.host!r}")
        if P.family is not first.family or P.order != first.order:
            raise InputError(f"family mismatch: {P.family.readable_name} vs {first.family.readable_name}")

    if all(P.explicit for _, P in terms):
        entries: Dict[VertexSet, Fraction] = {}
        for c, P in terms:
            if not c:
                continue
            for element, value in P.support():
                entries[element] = entries.get(element, ZERO) + c * value
        return ExplicitPacking(first.host, first.family, entries, order=first.order, check=False)

    def weight_fn(element: VertexSet) -> Fraction:
        return sum((c * P.weight(element) for c, P in terms if c), ZERO)

    def boundary_fn(rank: int, edge: VertexSet) -> Fraction:
        return sum((c * P._boundary(rank, edge) for c, P in terms if c), ZERO)

    def support_fn() -> Iterator[Tuple[VertexSet, Fraction]]:
        merged: Dict[VertexSet, Fraction] = {}
        for c, P in terms:
            if not c:
                continue
            for element, value in P.support():
                merged[element] = merged.get(element, ZERO) + c * value
        return iter(sorted(merged.items(), key=lambda item: item[0][::-1]))

    return ImplicitPacking(
        first.host,
        first.family,
        weight_fn,
        boundary_fn,
        support_fn,
        sum(P.support_bound for c, P in terms if c),
        order=first.order,
    )


def scale(P: PackingView, c: Fraction) -> PackingView:
    """
    Every weight times c. A boundary pushed above 1 shows up on validation, not here.
    """
    c = _check_coefficient(c)
    if P.explicit:
        return ExplicitPacking(
            P.host, P.family, {element: c * value for element, value in P.support()}, order=P.order, check=False
        )
    return ImplicitPacking(
        P.host,
        P.family,
        lambda element: c * P.weight(element),
        lambda rank, edge: c * P._boundary(rank, edge),
        lambda: ((element, c * value) for element, value in P.support()),
        P.support_bound if c else 0,
        order=P.order,
    )


def relabel(P: PackingView, mapping: Sequence[int], host: Hypergraph) -> PackingView:
    """
    Transports a packing of a local vertex set onto host: local vertex j becomes mapping[j].

    Host edges outside the image, or whose preimage is not an edge of P.host, get boundary 0.

    Raises:
        InputError: mapping is not injective, has the wrong length, or leaves the host's vertex range
    """
    mapping = tuple(int(v) for v in mapping)
    if len(mapping) != P.host.n or len(set(mapping)) != len(mapping):
        raise InputError(f"relabeling needs an injective map of {P.host.n} vertices")
    if mapping and (min(mapping) < 0 or max(mapping) >= host.n):
        raise InputError(f"relabeling leaves the vertex range of {host!r}")
    if host.r != P.host.r:
        raise InputError(f"relabeling changes uniformity {P.host.r} -> {host.r}")
    inverse = {v: j for j, v in enumerate(mapping)}

    def forward(element: Sequence[int]) -> VertexSet:
        return tuple(sorted(mapping[j] for j in element))

    def backward(element: Sequence[int]) -> Optional[VertexSet]:
        if any(v not in inverse for v in element):
            return None
        return tuple(sorted(inverse[v] for v in element))

    if P.explicit:
        return ExplicitPacking(
            host, P.family, {forward(element): value for element, value in P.support()}, order=P.order, check=False
        )

    def weight_fn(element: VertexSet) -> Fraction:
        local = backward(element)
        return P.weight(local) if local is not None else ZERO

    def boundary_fn(rank: int, edge: VertexSet) -> Fraction:
        local = backward(edge)
        if local is None or not P.host.has_edge(local):
            return ZERO
        return P._boundary(P.host.rank(local), local)

    return ImplicitPacking(
        host,
        P.family,
        weight_fn,
        boundary_fn,
        lambda: ((forward(element), value) for element, value in P.support()),
        P.support_bound,
        order=P.order,
    )


def with_host(P: PackingView, host: Hypergraph) -> PackingView:
    """
    Re-reads P on another host over the same vertices. Edges the new host drops are ignored; edges it adds lie
    in no support element of P and get boundary 0.

    Raises:
        InputError: vertex count or uniformity differ
    """
    if host.n != P.host.n or host.r != P.host.r:
        raise InputError(f"{host!r} and {P.host!r} differ in vertex count or uniformity")
    if P.explicit:
        return ExplicitPacking(host, P.family, dict(P.support()), order=P.order, check=False)
    old = P.host

    def boundary_fn(rank: int, edge: VertexSet) -> Fraction:
        return P._boundary(rank, edge) if old.has_rank(rank) else ZERO

    return ImplicitPacking(host, P.family, P.weight, boundary_fn, P.support, P.support_bound, order=P.order)


def validate(P: PackingView, eta: Fraction = ZERO, workers: int = 1) -> BoundaryReport:
    """
    Checks d(e) in [1 - eta, 1] on every host edge; eta = 0 certifies a full fractional decomposition.

    Parameters:
        P: packing
        eta: allowed deficiency
        workers: thread pool size for the per-edge boundaries
    Returns:
        BoundaryReport, failures listed by edge rank
    """
    eta = Fraction(eta)
    host = P.host
    if P.explicit:
        incidence = P.incidence
        values = [incidence.get(rank, ZERO) for rank in host.ranks]
    else:
        values = parallel_map(lambda pair: P._boundary(*pair), list(zip(host.ranks, host.edges)), workers)
    per_edge = dict(zip(host.ranks, values))
    low = ONE - eta
    failures: List[int] = [rank for rank, value in per_edge.items() if not low <= value <= ONE]
    min_boundary = min(values, default=ONE)
    max_boundary = max(values, default=ONE)
    report = BoundaryReport(
        per_edge=per_edge,
        min_boundary=min_boundary,
        max_boundary=max_boundary,
        eta=ONE - min_boundary,
        eta_bound=eta,
        passed=not failures,
        failures=failures,
    )
    if failures:
        logger.bind(payload={"failures": len(failures), "min": str(min_boundary), "max": str(max_boundary)}).info(
            "packing is not {}-almost", eta
        )
    return report
