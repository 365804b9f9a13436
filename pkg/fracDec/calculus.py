# -*- coding: utf-8 -*-
"""
Decomposition calculus: concatenation of an outer packing with inner decompositions of its support elements,
fixing of near-one boundary targets on K_{rq}^r, and conversion of an almost K_{rq}^r-decomposition into a full
K_q^r-decomposition.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from fracDec.errorhandling import FracDecError, InputError, PreconditionError, ResourceBudgetError
from fracDec.helpers import parallel_map
from fracDec.hypercore import VertexSet, binom, complete_graph, rank_edge, unrank_edge
from fracDec.models.families import FamilyTypes
from fracDec.packing import ExplicitPacking, ImplicitPacking, PackingView, linear_combine, validate
from fracDec.symdecomp import complete_symmetric, missing_edge_packing
from fracDec.utils.constants import DEFAULT_MATERIALIZE_LIMIT
from loguru import logger

ZERO = Fraction(0)

InnerDecomposer = Callable[[VertexSet], PackingView]
"""Support element H -> packing of the subgraph on H, with H[j] relabeled to vertex j."""


def concatenate(
    outer: PackingView,
    inner: InnerDecomposer,
    beta: Optional[Fraction] = None,
    workers: int = 1,
    limit: int = DEFAULT_MATERIALIZE_LIMIT,
) -> PackingView:
    """
    Concatenation psi(H') = sum over support elements H of outer(H) * inner(H)(H'), and
    d psi(e) = sum over H of outer(H) * d inner(H)(e).

    Parameters:
        outer: packing whose support elements get decomposed
        inner: decomposer of one support element, on local labels
        beta: when given, every inner packing is checked to be beta-almost
        workers: thread pool size for the inner decompositions
        limit: largest outer support walked
    Raises:
        PreconditionError: an inner decomposition failed or is not beta-almost; witness is the element
        ResourceBudgetError: the outer support exceeds limit
    """
    if outer.support_bound > limit:
        raise ResourceBudgetError(
            f"outer support of up to {outer.support_bound} elements exceeds the materialization limit {limit}",
            budget="materialize_limit",
            limit=limit,
        )
    host = outer.host
    r = host.r

    def decompose(item: Tuple[VertexSet, Fraction]) -> Tuple[VertexSet, Fraction, PackingView]:
        element, value = item
        try:
            packing = inner(element)
        except ResourceBudgetError:
            raise
        except FracDecError as ex:
            raise PreconditionError(f"inner decomposition of {list(element)} failed: {ex}", witness=element) from ex
        if packing.host.n != len(element) or packing.host.r != r:
            raise InputError(f"inner decomposition of {list(element)} is not on its {len(element)} vertices")
        if beta is not None:
            report = validate(packing, beta)
            if not report.passed:
                raise PreconditionError(
                    f"inner decomposition of {list(element)} is only {report.eta}-almost, above {beta}",
                    witness=element,
                )
        return element, value, packing

    pieces = parallel_map(decompose, list(outer.support()), workers)
    orders = {packing.order for _, _, packing in pieces}
    order = orders.pop() if len(orders) == 1 else None
    family = pieces[0][2].family if pieces else FamilyTypes.clique
    logger.debug("concatenated {} outer elements on {!r}", len(pieces), host)

    boundary_cache: Dict[int, Fraction] = {}

    def boundaries() -> Dict[int, Fraction]:
        if not boundary_cache and pieces:
            totals: Dict[int, Fraction] = {}
            for element, value, packing in pieces:
                for local in combinations(range(len(element)), r):
                    if not packing.host.has_edge(local):
                        continue
                    rank = host.rank([element[j] for j in local])
                    if not host.has_rank(rank):
                        continue
                    contribution = value * packing._boundary(packing.host.rank(local), local)
                    totals[rank] = totals.get(rank, ZERO) + contribution
            boundary_cache.update(totals)
        return boundary_cache

    def weight_fn(target: VertexSet) -> Fraction:
        total = ZERO
        members = set(target)
        for element, value, packing in pieces:
            if members.issubset(element):
                index = {v: j for j, v in enumerate(element)}
                total += value * packing.weight(tuple(index[v] for v in target))
        return total

    def support_fn() -> Iterator[Tuple[VertexSet, Fraction]]:
        merged: Dict[VertexSet, Fraction] = {}
        for element, value, packing in pieces:
            for local, inner_value in packing.support():
                key = tuple(element[j] for j in local)
                merged[key] = merged.get(key, ZERO) + value * inner_value
        return iter(sorted(merged.items(), key=lambda item: item[0][::-1]))

    bound = binom(host.n, order) if order is not None else sum(packing.support_bound for _, _, packing in pieces)
    return ImplicitPacking(
        host,
        family,
        weight_fn,
        lambda rank, edge: boundaries().get(rank, ZERO),
        support_fn,
        bound,
        order=order,
    )


def _canonical_targets(target: Mapping[Union[int, Sequence[int]], Fraction], n: int, r: int) -> Tuple[Fraction, ...]:
    total = binom(n, r)
    values: Dict[int, Fraction] = {}
    for key, value in target.items():
        rank = key if isinstance(key, int) else rank_edge(n, r, key)
        if not 0 <= rank < total:
            raise InputError(f"target edge {key!r} outside K_{n}^{r}")
        values[rank] = Fraction(value)
    missing = [rank for rank in range(total) if rank not in values]
    if missing:
        raise InputError(f"no target for edge {list(unrank_edge(n, r, missing[0]))}")
    return tuple(values[rank] for rank in range(total))


@lru_cache(maxsize=None)
def _materialized_base(q: int, r: int) -> ExplicitPacking:
    return complete_symmetric(r * q, q, r).materialize()


@lru_cache(maxsize=None)
def _materialized_missing(q: int, r: int, edge: VertexSet) -> PackingView:
    return missing_edge_packing(q, r, edge).materialize().with_host(complete_graph(r * q, r))


@lru_cache(maxsize=4096)
def _fix(q: int, r: int, targets: Tuple[Fraction, ...]) -> ExplicitPacking:
    n = r * q
    count = binom(n, r)
    epsilon = Fraction(1, count)
    low = 1 - epsilon
    lambdas = [(value - low) / epsilon for value in targets]
    terms: List[Tuple[Fraction, PackingView]] = [(sum(lambdas, ZERO) / count, _materialized_base(q, r))]
    for rank, lam in enumerate(lambdas):
        if lam == 1:
            continue
        terms.append(((1 - lam) / count, _materialized_missing(q, r, unrank_edge(n, r, rank))))
    return linear_combine(terms)


def fix_packing(target: Mapping[Union[int, Sequence[int]], Fraction], q: int, r: int) -> ExplicitPacking:
    """
    K_q^r packing of K_{rq}^r with boundary exactly target(e) at every edge.

    It blends the symmetric decomposition and the missing-edge decompositions: with epsilon = 1/C(rq, r) and
    lambda_e = (target(e) - (1 - epsilon)) / epsilon the result is the average over e of
    lambda_e * symmetric + (1 - lambda_e) * missing_edge(e).

    Parameters:
        target: edge (rank or vertices) -> value in [1 - 1/C(rq, r), 1], every edge of K_{rq}^r present
    Raises:
        InputError: q <= r, r < 2 or an edge without target
        PreconditionError: a target outside the range; witness is the edge
    """
    if r < 2 or q <= r:
        raise InputError(f"fixing needs q > r >= 2, got r={r}, q={q}")
    n = r * q
    targets = _canonical_targets(target, n, r)
    low = 1 - Fraction(1, binom(n, r))
    for rank, value in enumerate(targets):
        if not low <= value <= 1:
            edge = unrank_edge(n, r, rank)
            logger.warning("fix target {} at {} outside [{}, 1]", value, list(edge), low)
            raise PreconditionError(f"target {value} at edge {list(edge)} outside [{low}, 1]", witness=edge)
    return _fix(q, r, targets)


def almost_to_full(
    P: PackingView, q: int, r: int, workers: int = 1, limit: int = DEFAULT_MATERIALIZE_LIMIT
) -> PackingView:
    """
    Full K_q^r-decomposition of G from an eta-almost K_{rq}^r-decomposition P of G with eta <= 1/C(rq, r).

    Every copy Q in P's support is fixed to the targets (1 - 1/C(rq, r)) / dP(e); the fixed packings are
    combined with P's weights and scaled by 1 / (1 - 1/C(rq, r)).

    Raises:
        InputError: support elements of P are not rq-sets
        PreconditionError: some dP(e) is outside [1 - 1/C(rq, r), 1] or zero; witness is the edge
    """
    if r < 2 or q <= r:
        raise InputError(f"almost-to-full needs q > r >= 2, got r={r}, q={q}")
    if P.host.r != r:
        raise InputError(f"packing host is {P.host.r}-uniform, expected {r}")
    size = r * q
    if P.order is not None and P.order != size:
        raise InputError(f"almost-to-full needs K_{size}^{r} copies, got elements of size {P.order}")
    host = P.host
    epsilon = Fraction(1, binom(size, r))
    report = validate(P, epsilon, workers=workers)
    per_edge = report.per_edge
    for rank in report.failures:
        edge = unrank_edge(host.n, r, rank)
        value = per_edge[rank]
        if value == 0:
            raise PreconditionError(f"edge {list(edge)} has zero boundary", witness=edge)
        logger.bind(payload={"edge": list(edge), "boundary": str(value), "eta": str(epsilon)}).warning(
            "almost-to-full precondition violated"
        )
        raise PreconditionError(
            f"boundary {value} at edge {list(edge)} outside [{1 - epsilon}, 1], eta exceeds {epsilon}", witness=edge
        )
    if P.support_bound > limit:
        raise ResourceBudgetError(
            f"support of up to {P.support_bound} copies exceeds the materialization limit {limit}",
            budget="materialize_limit",
            limit=limit,
        )
    scale_factor = 1 / (1 - epsilon)
    local_edges = list(combinations(range(size), r))

    def fix_copy(item: Tuple[VertexSet, Fraction]) -> Tuple[Fraction, VertexSet, ExplicitPacking]:
        copy, value = item
        if len(copy) != size:
            raise InputError(f"support element {list(copy)} is not a K_{size}^{r} copy")
        targets = {}
        for local in local_edges:
            rank = host.rank([copy[j] for j in local])
            targets[local] = (1 - epsilon) / per_edge[rank]
        return value, copy, fix_packing(targets, q, r)

    fixed = parallel_map(fix_copy, list(P.support()), workers)
    entries: Dict[VertexSet, Fraction] = {}
    for value, copy, packing in fixed:
        factor = scale_factor * value
        for local, inner_value in packing.support():
            key = tuple(copy[j] for j in local)
            entries[key] = entries.get(key, ZERO) + factor * inner_value
    logger.info("almost-to-full fixed {} copies of K_{}^{} into {} cliques", len(fixed), size, r, len(entries))
    return ExplicitPacking(host, FamilyTypes.clique, entries, order=q, check=False)
