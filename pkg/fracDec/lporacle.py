# -*- coding: utf-8 -*-
"""
Exact LP oracle for "G admits a fractional K_q^r-decomposition": the edge x clique feasibility system, an exact
Phase-I simplex with Bland's rule returning verifiable certificates, and the orbit reduction of symmetric
instances.
"""
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from fracDec.errorhandling import InputError, InternalConsistencyError, ResourceBudgetError
from fracDec.hypercore import Hypergraph, Matching, build_matching, enumerate_cliques, unrank_edge
from fracDec.matchdist import signature
from fracDec.models.families import FamilyTypes
from fracDec.models.lp import Certificate, LPInstance
from fracDec.packing import ExplicitPacking, PackingView
from fracDec.utils.constants import DEFAULT_BUDGET_COLUMNS, DEFAULT_BUDGET_PIVOTS
from loguru import logger

ZERO = Fraction(0)
ONE = Fraction(1)


class OrbitSignature:
    """
    Labels of rows and columns that are constant on the orbits of a symmetry of an instance.

    Attributes:
        name: shown in logs and reports.
        row_signature: row label of the full instance (edge rank) -> orbit label.
        col_signature: column label of the full instance (clique) -> orbit label.
    """

    def __init__(
        self, name: str, row_signature: Callable[[Any], Hashable], col_signature: Callable[[Any], Hashable]
    ) -> None:
        self.name = name
        self.row_signature = row_signature
        self.col_signature = col_signature

    def __repr__(self) -> str:
        return f"OrbitSignature({self.name})"


def trivial_signature() -> OrbitSignature:
    return OrbitSignature("trivial", lambda row: row, lambda col: col)


def edge_signature(G: Hypergraph, e: Sequence[int]) -> OrbitSignature:
    """
    Intersection size with the distinguished edge e, for hosts invariant under the permutations fixing e.
    """
    missing = frozenset(e)
    if len(missing) != G.r:
        raise InputError(f"distinguished edge {list(e)} must have {G.r} vertices")
    return OrbitSignature(
        "edge",
        lambda rank: len(missing.intersection(unrank_edge(G.n, G.r, rank))),
        lambda clique: len(missing.intersection(clique)),
    )


def matching_signature(G: Hypergraph, M: Any) -> OrbitSignature:
    """
    Sorted nonzero intersection sizes with the matching edges plus the number of unmatched vertices.
    """
    matching = M if isinstance(M, Matching) else build_matching(G.n, G.r, M)
    return OrbitSignature(
        "matching",
        lambda rank: signature(unrank_edge(G.n, G.r, rank), matching),
        lambda clique: signature(clique, matching),
    )


def build_feasibility_lp(G: Hypergraph, q: int) -> LPInstance:
    """
    Rows are the edges of G by rank, columns the q-cliques of G in colex order; the column of Q has a one in
    the row of every r-subset of Q.

    Raises:
        InputError: q <= r
    """
    if q <= G.r:
        raise InputError(f"clique size q={q} must exceed the uniformity r={G.r}")
    rows = tuple(sorted(G.ranks))
    index = {rank: i for i, rank in enumerate(rows)}
    cliques = enumerate_cliques(G, q)
    columns = []
    for clique in cliques:
        columns.append({index[G.rank(subset)]: 1 for subset in combinations(clique, G.r)})
    logger.debug("feasibility LP of {!r} for K_{}: {} x {}", G, q, len(rows), len(cliques))
    return LPInstance(rows=rows, cols=tuple(cliques), columns=tuple(columns), rhs=tuple(ONE for _ in rows))


class _PhaseOneTableau:
    """
    Dense tableau of {A x + s = b, x, s >= 0} minimizing the sum of the artificial variables s.

    Columns 0..n-1 are the structural variables, n..n+m-1 the artificials. The reduced cost row carries
    -(objective value) in its last slot.
    """

    def __init__(self, L: LPInstance) -> None:
        self.m, self.n = L.shape
        width = self.n + self.m + 1
        self.rows: List[List[Fraction]] = [[ZERO] * width for _ in range(self.m)]
        for j, column in enumerate(L.columns):
            for i, coeff in column.items():
                self.rows[i][j] = Fraction(coeff)
        for i in range(self.m):
            self.rows[i][self.n + i] = ONE
            self.rows[i][-1] = Fraction(L.rhs[i])
        self.cost = [ZERO] * width
        for row in self.rows:
            for j in range(self.n):
                self.cost[j] -= row[j]
            self.cost[-1] -= row[-1]
        self.basis = [self.n + i for i in range(self.m)]
        self.pivots = 0

    @property
    def objective(self) -> Fraction:
        return -self.cost[-1]

    def entering(self) -> Optional[int]:
        for j in range(self.n + self.m):
            if self.cost[j] < 0:
                return j
        return None

    def leaving(self, j: int) -> Optional[int]:
        best: Optional[Tuple[Fraction, int, int]] = None
        for i, row in enumerate(self.rows):
            if row[j] > 0:
                candidate = (row[-1] / row[j], self.basis[i], i)
                if best is None or candidate < best:
                    best = candidate
        return None if best is None else best[2]

    def pivot(self, i: int, j: int) -> None:
        pivot_row = self.rows[i]
        factor = pivot_row[j]
        if factor != 1:
            pivot_row[:] = [value / factor for value in pivot_row]
        support = [col for col, value in enumerate(pivot_row) if value]
        for k, row in enumerate(self.rows):
            if k != i and row[j]:
                f = row[j]
                for col in support:
                    row[col] -= f * pivot_row[col]
        if self.cost[j]:
            f = self.cost[j]
            for col in support:
                self.cost[col] -= f * pivot_row[col]
        self.basis[i] = j
        self.pivots += 1

    def solution(self) -> Dict[int, Fraction]:
        return {var: self.rows[i][-1] for i, var in enumerate(self.basis) if var < self.n and self.rows[i][-1]}

    def farkas(self) -> Dict[int, Fraction]:
        # y_i = 1 - reduced cost of the i-th artificial
        return {i: ONE - self.cost[self.n + i] for i in range(self.m) if ONE - self.cost[self.n + i]}


def feasible(
    L: LPInstance,
    budget_pivots: int = DEFAULT_BUDGET_PIVOTS,
    budget_columns: int = DEFAULT_BUDGET_COLUMNS,
    self_check: bool = True,
) -> Certificate:
    """
    Decides {x >= 0, A x = rhs} by an exact Phase-I simplex with Bland's rule.

    Returns:
        feasible certificate with a basic solution, or infeasible certificate with a Farkas vector y
        (y^T A <= 0 columnwise, y^T rhs > 0), read off the reduced costs of the artificials at the optimum.
    Raises:
        ResourceBudgetError: more columns than budget_columns or more pivots than budget_pivots
        InternalConsistencyError: self_check is on and the certificate does not verify
    """
    m, n = L.shape
    if n > budget_columns:
        raise ResourceBudgetError(
            f"{n} columns exceed the column budget {budget_columns}", budget="budget_columns", limit=budget_columns
        )
    covered = set()
    for column in L.columns:
        covered.update(i for i, coeff in column.items() if coeff)
    empty = [i for i in range(m) if i not in covered and L.rhs[i]]
    if empty:
        i = empty[0]
        certificate = Certificate(kind="infeasible", farkas={i: ONE if L.rhs[i] > 0 else -ONE})
        logger.info("row {} ({!r}) is in no column: infeasible", i, L.rows[i])
    else:
        tableau = _PhaseOneTableau(L)
        while True:
            j = tableau.entering()
            if j is None:
                break
            i = tableau.leaving(j)
            if i is None:
                raise InternalConsistencyError("unbounded Phase-I objective")
            if tableau.pivots >= budget_pivots:
                raise ResourceBudgetError(
                    f"simplex exceeded the pivot budget {budget_pivots}", budget="budget_pivots", limit=budget_pivots
                )
            tableau.pivot(i, j)
        if tableau.objective == 0:
            certificate = Certificate(kind="feasible", solution=tableau.solution(), pivots=tableau.pivots)
        else:
            certificate = Certificate(kind="infeasible", farkas=tableau.farkas(), pivots=tableau.pivots)
        logger.info("{} x {} system is {} after {} pivots", m, n, certificate.kind, tableau.pivots)
    if self_check and not verify_certificate(L, certificate):
        raise InternalConsistencyError(f"{certificate.kind} certificate does not verify")
    return certificate


def verify_certificate(L: LPInstance, c: Certificate) -> bool:
    """
    Exact check of a certificate: x >= 0 and A x = rhs, or y^T A <= 0 columnwise and y^T rhs > 0.

    Raises:
        InputError: indices outside the instance
    """
    m, n = L.shape
    if c.kind == "feasible":
        if any(not 0 <= j < n for j in c.solution):
            raise InputError(f"solution names columns outside 0..{n - 1}")
        if any(value < 0 for value in c.solution.values()):
            return False
        totals = [ZERO] * m
        for j, value in c.solution.items():
            for i, coeff in L.columns[j].items():
                totals[i] += coeff * value
        return all(total == rhs for total, rhs in zip(totals, L.rhs))
    if any(not 0 <= i < m for i in c.farkas):
        raise InputError(f"Farkas vector names rows outside 0..{m - 1}")
    for column in L.columns:
        if sum((coeff * c.farkas.get(i, ZERO) for i, coeff in column.items()), ZERO) > 0:
            return False
    return sum((value * L.rhs[i] for i, value in c.farkas.items()), ZERO) > 0


def _ordered(labels: List[Hashable]) -> List[Hashable]:
    unique = list(dict.fromkeys(labels))
    try:
        return sorted(unique)
    except TypeError:
        return unique


def orbit_reduce(L: LPInstance, sig: OrbitSignature) -> LPInstance:
    """
    Aggregates rows and columns by orbit label; the entry of (row label t, column label c) is the number of
    columns labeled c through a representative row labeled t.

    Raises:
        InputError: two rows with the same label see different counts, so the signature is not an orbit
            invariant of the instance
    """
    row_labels = [sig.row_signature(row) for row in L.rows]
    col_labels = [sig.col_signature(col) for col in L.cols]
    counts: List[Dict[Hashable, int]] = [{} for _ in L.rows]
    for label, column in zip(col_labels, L.columns):
        for i, coeff in column.items():
            counts[i][label] = counts[i].get(label, 0) + coeff

    reduced_rows = _ordered(row_labels)
    reduced_cols = _ordered(col_labels)
    representative: Dict[Hashable, Dict[Hashable, int]] = {}
    rhs: Dict[Hashable, Fraction] = {}
    for i, label in enumerate(row_labels):
        seen = {key: value for key, value in counts[i].items() if value}
        if label not in representative:
            representative[label] = seen
            rhs[label] = Fraction(L.rhs[i])
        elif representative[label] != seen or rhs[label] != L.rhs[i]:
            raise InputError(
                f"{sig!r} aggregates row {L.rows[i]!r} inconsistently: {seen} against {representative[label]}"
            )
    row_index = {label: i for i, label in enumerate(reduced_rows)}
    columns = []
    for col_label in reduced_cols:
        columns.append(
            {
                row_index[row_label]: entries[col_label]
                for row_label, entries in representative.items()
                if col_label in entries
            }
        )
    logger.debug("{!r} reduced {} x {} to {} x {}", sig, *L.shape, len(reduced_rows), len(reduced_cols))
    return LPInstance(
        rows=tuple(reduced_rows),
        cols=tuple(reduced_cols),
        columns=tuple(columns),
        rhs=tuple(rhs[label] for label in reduced_rows),
    )


def lift_solution(L: LPInstance, sig: OrbitSignature, reduced: LPInstance, c: Certificate) -> Certificate:
    """
    Feasible certificate of L from a feasible certificate of its orbit reduction: every column takes the value
    of its label.
    """
    if c.kind != "feasible":
        raise InputError("only feasible certificates lift column-wise")
    values = {reduced.cols[j]: value for j, value in c.solution.items()}
    solution = {}
    for j, col in enumerate(L.cols):
        value = values.get(sig.col_signature(col), ZERO)
        if value:
            solution[j] = value
    return Certificate(kind="feasible", solution=solution, pivots=c.pivots)


def certificate_from_packing(L: LPInstance, P: PackingView) -> Certificate:
    """
    Reads the clique weights of a K_q^r packing of the instance's graph as a candidate solution of L.

    Raises:
        InputError: a support element of P is not a column of L
    """
    index = {col: j for j, col in enumerate(L.cols)}
    solution: Dict[int, Fraction] = {}
    for element, value in P.support():
        if element not in index:
            raise InputError(f"support element {list(element)} is not a column of the instance")
        if value:
            solution[index[element]] = value
    return Certificate(kind="feasible", solution=solution)


def lp_packing(G: Hypergraph, q: int, certificate: Certificate, L: LPInstance) -> ExplicitPacking:
    """
    The K_q^r packing of G whose weights are a feasible certificate of build_feasibility_lp(G, q).
    """
    if certificate.kind != "feasible":
        raise InputError("an infeasible certificate carries no packing")
    entries = {L.cols[j]: value for j, value in certificate.solution.items()}
    return ExplicitPacking(G, FamilyTypes.clique, entries, order=q, check=False)
