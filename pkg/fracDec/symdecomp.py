# -*- coding: utf-8 -*-
"""
Symmetric fractional decompositions: K_n^r with uniform weights, and K_{rq}^r minus one edge with one weight
per intersection size with the missing edge.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence, Tuple

from fracDec.errorhandling import InputError, InternalConsistencyError
from fracDec.hypercore import VertexSet, binom, complete_graph, complete_minus, vertex_set
from fracDec.models.families import FamilyTypes
from fracDec.models.symmetric import CoeffMatrix, WeightVector
from fracDec.packing import ImplicitPacking, PackingView
from loguru import logger

ZERO = Fraction(0)


def _check_rq(q: int, r: int) -> None:
    if r < 2 or q <= r:
        raise InputError(f"missing-edge decomposition needs q > r >= 2, got r={r}, q={q}")


@lru_cache(maxsize=None)
def build_matrix(q: int, r: int) -> CoeffMatrix:
    """
    Parameters:
        q: clique size
        r: uniformity, the host has n = rq vertices
    Raises:
        InputError: unless q > r >= 2
    """
    _check_rq(q, r)
    n = r * q
    a = tuple(
        tuple(binom(r - t, i - t) * binom(n - 2 * r + t, q - r - i + t) if t <= i else 0 for i in range(r))
        for t in range(r)
    )
    return CoeffMatrix(r=r, q=q, n=n, a=a)


@lru_cache(maxsize=None)
def solve_weights(q: int, r: int) -> WeightVector:
    """
    Back-substitution of A w = 1.

    Raises:
        InternalConsistencyError: a negative or undefined entry
    """
    matrix = build_matrix(q, r)
    a = matrix.a
    w = [ZERO] * r
    for i in range(r - 1, -1, -1):
        if a[i][i] <= 0:
            raise InternalConsistencyError(f"zero diagonal a[{i}][{i}] for r={r}, q={q}")
        rest = sum((a[i][j] * w[j] for j in range(i + 1, r)), ZERO)
        w[i] = (1 - rest) / a[i][i]
        if w[i] < 0:
            raise InternalConsistencyError(f"negative weight w[{i}] = {w[i]} for r={r}, q={q}")
    logger.debug("missing-edge weights r={} q={}: {}", r, q, [str(x) for x in w])
    return WeightVector(r=r, q=q, w=tuple(w))


@lru_cache(maxsize=256)
def complete_symmetric(n: int, q: int, r: int) -> PackingView:
    """
    Every q-clique of K_n^r with weight 1/C(n - r, q - r); a full decomposition.

    Raises:
        InputError: unless 1 <= r <= q <= n
    """
    if not 1 <= r <= q <= n:
        raise InputError(f"symmetric decomposition needs r <= q <= n, got n={n}, q={q}, r={r}")
    host = complete_graph(n, r)
    value = Fraction(1, binom(n - r, q - r))
    through = binom(n - r, q - r)

    def weight_fn(element: VertexSet) -> Fraction:
        if len(element) == q and len(set(element)) == q and element[0] >= 0 and element[-1] < n:
            return value
        return ZERO

    def support_fn() -> Iterator[Tuple[VertexSet, Fraction]]:
        return ((element, value) for element in combinations(range(n), q))

    return ImplicitPacking(
        host,
        FamilyTypes.clique,
        weight_fn,
        lambda rank, edge: through * value,
        support_fn,
        binom(n, q),
        order=q,
    )


@lru_cache(maxsize=256)
def _missing_edge_packing(q: int, r: int, e: VertexSet) -> PackingView:
    n = r * q
    w = solve_weights(q, r).w
    a = build_matrix(q, r).a
    missing = set(e)
    host = complete_minus(n, r, [e])

    def weight_fn(element: VertexSet) -> Fraction:
        if len(element) != q or len(set(element)) != q or element[0] < 0 or element[-1] >= n:
            return ZERO
        i = len(missing.intersection(element))
        return w[i] if i < r else ZERO

    def boundary_fn(rank: int, edge: VertexSet) -> Fraction:
        t = len(missing.intersection(edge))
        return sum((a[t][i] * w[i] for i in range(t, r)), ZERO)

    def support_fn() -> Iterator[Tuple[VertexSet, Fraction]]:
        for element in combinations(range(n), q):
            i = len(missing.intersection(element))
            if i < r and w[i]:
                yield element, w[i]

    return ImplicitPacking(host, FamilyTypes.clique, weight_fn, boundary_fn, support_fn, binom(n, q), order=q)


def missing_edge_packing(q: int, r: int, e: Sequence[int]) -> PackingView:
    """
    Fractional K_q^r-decomposition of K_{rq}^r - e, stored as one weight per |Q & e|.

    Raises:
        InputError: unless q > r >= 2 and e is an r-subset of 0..rq-1
    """
    _check_rq(q, r)
    edge = vertex_set(e, r * q)
    if len(edge) != r:
        raise InputError(f"missing edge {list(e)} must have {r} vertices")
    return _missing_edge_packing(q, r, edge)
