# -*- coding: utf-8 -*-
"""
The endgame of the main theorem: its constants and inequality chain, the Chernoff estimate of the matching
lemma against the exact tails, and the full pipeline

    G -> uniform family of induced k-sets -> per-H matchings -> K_{rq}^r decompositions -> concatenation
      -> almost-to-full -> fractional K_q^r-decomposition of G.
"""
from collections import Counter
from decimal import ROUND_CEILING, Decimal, localcontext
from fractions import Fraction
from typing import Any, List, Optional, Union

from fracDec.calculus import almost_to_full, concatenate
from fracDec.errorhandling import InputError, PreconditionError
from fracDec.hypercore import Hypergraph, VertexSet, binom, codegree_max, complement, induced
from fracDec.lporacle import build_feasibility_lp, certificate_from_packing, feasible, lp_packing, verify_certificate
from fracDec.matchdist import (
    _check_matching,
    _check_sampler,
    auxiliary_distribution,
    decompose_minus_matchings,
    deficiency_exact,
    edge_classes,
    greedy_edge_color,
)
from fracDec.models.families import StrategyTypes
from fracDec.models.reports import ChernoffRecord, ChernoffReport, ParamReport, PipelineReport, StageStatus
from fracDec.packing import PackingView, validate
from fracDec.sampler import uniform_family_packing
from fracDec.utils.constants import (
    DEFAULT_BUDGET_COLUMNS,
    DEFAULT_BUDGET_PIVOTS,
    DEFAULT_DECIMAL_PRECISION,
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_MATERIALIZE_LIMIT,
    DEFAULT_P,
    DEFAULT_VACUITY_BUDGET,
    MATCHING_C_FACTOR,
)
from loguru import logger

BETA_RULE = "smallest power of 2 with C^m r beta^-(m^(1/(r-1)) - r) <= e^-r"


def _decimal(value: Fraction) -> Decimal:
    return Decimal(value.numerator) / Decimal(value.denominator)


def _beta_closes(log_cmr: Decimal, exponent: Decimal, r: int, beta_log2: int) -> bool:
    return log_cmr - exponent * beta_log2 * Decimal(2).ln() <= -r


def main_parameters(
    r: int,
    epsilon: Union[Fraction, str],
    q: int,
    vacuity_budget: int = DEFAULT_VACUITY_BUDGET,
    precision: int = DEFAULT_DECIMAL_PRECISION,
) -> ParamReport:
    """
    Constants of the main theorem and the numeric evaluation of every inequality the endgame relies on.

    m is the smallest integer above (r + (r^2 - 1) / epsilon)^(r - 1), C = 32 r^3, k = C^m r q,
    beta is chosen by BETA_RULE, alpha = (2 e^2 beta C^m r)^-(r - 1) and d = alpha / q^(r - 1 + epsilon).

    Raises:
        InputError: r < 2, epsilon outside (0, 1] or q <= r
    """
    epsilon = Fraction(epsilon)
    if r < 2 or not 0 < epsilon <= 1 or q <= r:
        raise InputError(f"parameters need r >= 2, 0 < epsilon <= 1, q > r; got r={r}, epsilon={epsilon}, q={q}")
    lower = (r + Fraction(r * r - 1) / epsilon) ** (r - 1)
    m = lower.numerator // lower.denominator + 1
    C = MATCHING_C_FACTOR * r**3
    k = C**m * r * q
    threshold = Fraction(1, binom(r * q, r))

    with localcontext() as ctx:
        ctx.prec = precision
        eps = _decimal(epsilon)
        root = Decimal(m) ** (Decimal(1) / (r - 1))
        exponent = root - r
        log_cmr = m * Decimal(C).ln() + Decimal(r).ln()
        estimate = (log_cmr + r) / (exponent * Decimal(2).ln())
        beta_log2 = max(1, int(estimate.to_integral_value(rounding=ROUND_CEILING)))
        while not _beta_closes(log_cmr, exponent, r, beta_log2):
            beta_log2 += 1
        while beta_log2 > 1 and _beta_closes(log_cmr, exponent, r, beta_log2 - 1):
            beta_log2 -= 1
        beta = Decimal(2) ** beta_log2
        e2 = Decimal(2).exp()
        alpha = (2 * e2 * beta * Decimal(C) ** m * r) ** -(r - 1)
        d = alpha / Decimal(q) ** (r - 1 + eps)
        inner = d * (2 * e2 * Decimal(k)) ** (r - 1)
        closed_form = beta ** -(r - 1) * Decimal(q) ** -eps
        chain = eps * exponent / (r - 1)
        final_bound = Decimal(k) * inner ** (exponent / (r - 1))
        e_r_q_r = (-Decimal(r)).exp() * Decimal(q) ** -r
        beta_lhs = (log_cmr - exponent * beta_log2 * Decimal(2).ln()).exp()
        tolerance = Decimal(10) ** (-(precision - 10))
        checks = {
            "m_root_exceeds": exponent >= _decimal(Fraction(r * r - 1) / epsilon),
            "exponent_chain": chain > r + 1,
            "d_identity": abs(inner - closed_form) <= tolerance * closed_form,
            "d_precondition": inner < 1,
            "beta_rule": beta_lhs <= (-Decimal(r)).exp(),
            "final_le_e_r_q_r": final_bound <= e_r_q_r,
            "e_r_q_r_le_threshold": e_r_q_r <= _decimal(threshold),
            "final_le_threshold": final_bound <= _decimal(threshold),
        }
        values = {
            "m_root_minus_r": exponent,
            "exponent_chain": chain,
            "beta": beta,
            "beta_rule_lhs": beta_lhs,
            "d_times_base": inner,
            "e_r_q_r": e_r_q_r,
        }
    report = ParamReport(
        r=r,
        epsilon=epsilon,
        q=q,
        C=C,
        m=m,
        beta_log2=beta_log2,
        beta_rule=BETA_RULE,
        alpha=alpha,
        k=k,
        d=d,
        checks=checks,
        values=values,
        final_bound=final_bound,
        threshold=threshold,
        vacuous=k > vacuity_budget,
        vacuity_budget=vacuity_budget,
    )
    logger.bind(payload={name: held for name, held in checks.items()}).info(
        "parameters r={} epsilon={} q={}: m={} C={} beta=2^{} vacuous={}",
        r,
        epsilon,
        q,
        m,
        C,
        beta_log2,
        report.vacuous,
    )
    return report


def chernoff_factor(mu: Union[Fraction, int], precision: int = DEFAULT_DECIMAL_PRECISION) -> Decimal:
    """e^(-mu / 8)."""
    with localcontext() as ctx:
        ctx.prec = precision
        return (-_decimal(Fraction(mu)) / 8).exp()


def chernoff_report(
    n: int, r: int, q: int, M, p: Fraction = DEFAULT_P, precision: int = DEFAULT_DECIMAL_PRECISION
) -> ChernoffReport:
    """
    Per orbit of edges: the Chernoff bound e^(-mu/8) with mu = p |M| + p (n - |M| r - r), the exact tail
    Pr[Y < rq] of the auxiliary sum, and the exact deficiency it bounds.
    """
    p = _check_sampler(n, r, q, Fraction(p))
    M = _check_matching(n, r, M)
    mu = p * len(M) + p * (n - len(M) * r - r)
    bound = chernoff_factor(mu, precision)
    records = []
    for sig, representative in edge_classes(n, r, M):
        exact = deficiency_exact(n, r, q, M, p, representative)
        y_tail = auxiliary_distribution(n, r, M, p, representative).mass_below(r * q)
        records.append(
            ChernoffRecord(
                signature=sig,
                representative=representative,
                mu=mu,
                bound=bound,
                y_tail=y_tail,
                exact=exact,
                bound_dominates=Fraction(bound) >= exact,
            )
        )
    in_regime = n >= MATCHING_C_FACTOR * r**3 * q
    report = ChernoffReport(
        n=n,
        r=r,
        q=q,
        p=p,
        in_regime=in_regime,
        threshold=Fraction(1, binom(r * q, r)),
        records=records,
    )
    if in_regime and not all(record.bound_dominates for record in records):
        logger.warning("Chernoff bound below an exact tail inside its regime at n={} r={} q={}", n, r, q)
    return report


class _Pipeline:
    """
    One run of the pipeline; stages append to self.stages and a failed stage stops the run.
    """

    def __init__(
        self,
        G: Hypergraph,
        q: int,
        strategy: StrategyTypes,
        p: Fraction,
        workers: int,
        limit: int,
        enumeration_budget: int,
        budget_pivots: int,
        budget_columns: int,
    ) -> None:
        self.G = G
        self.q = q
        self.r = G.r
        self.strategy = strategy
        self.p = p
        self.workers = workers
        self.limit = limit
        self.enumeration_budget = enumeration_budget
        self.budget_pivots = budget_pivots
        self.budget_columns = budget_columns
        self.stages: List[StageStatus] = []

    def record(self, name: str, ok: bool, detail: str = "", **data: Any) -> bool:
        self.stages.append(StageStatus(name=name, ok=ok, detail=detail, data=data))
        log = logger.info if ok else logger.warning
        log("pipeline stage {}: {} {}", name, "ok" if ok else "failed", detail)
        return ok

    def report(self, k: Optional[int], m: Optional[int], packing: Optional[PackingView] = None) -> PipelineReport:
        failed = next((stage.name for stage in self.stages if not stage.ok), None)
        return PipelineReport(
            strategy=self.strategy.readable_name,
            n=self.G.n,
            r=self.r,
            q=self.q,
            k=k,
            m=m,
            stages=self.stages,
            success=failed is None and packing is not None,
            failure_stage=failed,
            packing=packing if failed is None else None,
        )

    def decompose_empirical(self, H: Hypergraph) -> PackingView:
        matchings = greedy_edge_color(complement(H))
        return decompose_minus_matchings(H.n, self.r, self.r * self.q, matchings, self.p, limit=self.limit)

    def decompose_lp(self, H: Hypergraph) -> PackingView:
        instance = build_feasibility_lp(H, self.r * self.q)
        certificate = feasible(instance, self.budget_pivots, self.budget_columns)
        if certificate.kind != "feasible":
            raise PreconditionError(f"{H!r} has no fractional K_{self.r * self.q}^{self.r}-decomposition")
        return lp_packing(H, self.r * self.q, certificate, instance)

    def inner(self, S: VertexSet) -> PackingView:
        H = induced(self.G, S)
        if self.strategy is StrategyTypes.lp_fallback:
            return self.decompose_lp(H)
        return self.decompose_empirical(H)

    def run(self, k: int, m: int, cross_check: bool) -> PipelineReport:
        G, r, q = self.G, self.r, self.q
        size = r * q
        if not size <= k <= G.n:
            self.record("family", False, f"need rq={size} <= k={k} <= n={G.n}")
            return self.report(k, m)
        family = uniform_family_packing(G, k, m, budget=self.enumeration_budget).materialize(self.limit)
        family_report = validate(family, workers=self.workers)
        self.record(
            "family",
            family.support_bound > 0,
            f"{family.support_bound} induced {k}-sets, deficiency {family_report.eta}",
            support=family.support_bound,
            eta=family_report.eta,
            complement_codegree=codegree_max(complement(G)),
        )
        if not family.support_bound:
            return self.report(k, m)

        matchings = Counter(len(greedy_edge_color(complement(induced(G, S)))) for S, _ in family.support())
        self.record("matchings", True, f"matching counts {dict(sorted(matchings.items()))}", counts=dict(matchings))
        try:
            psi = concatenate(family, self.inner, workers=self.workers, limit=self.limit)
        except PreconditionError as ex:
            self.record("inner", False, str(ex), witness=ex.witness)
            return self.report(k, m)
        self.record("inner", True, f"{family.support_bound} inner K_{size}^{r} decompositions")

        threshold = Fraction(1, binom(size, r))
        almost = validate(psi, threshold, workers=self.workers)
        if not self.record("concatenate", almost.passed, f"eta {almost.eta} against {threshold}", eta=almost.eta):
            return self.report(k, m)

        try:
            full = almost_to_full(psi, q, r, workers=self.workers, limit=self.limit)
        except PreconditionError as ex:
            self.record("almost_to_full", False, str(ex), witness=ex.witness)
            return self.report(k, m)
        final = validate(full, workers=self.workers)
        exact = final.passed and final.eta == 0
        if not self.record("validation", exact, f"boundary in [{final.min_boundary}, {final.max_boundary}]"):
            return self.report(k, m)

        if cross_check:
            instance = build_feasibility_lp(G, q)
            verified = verify_certificate(instance, certificate_from_packing(instance, full))
            if not self.record("lp_cross_check", verified, f"{instance.shape[1]} columns"):
                return self.report(k, m)
        return self.report(k, m, full)


def pipeline(
    G: Hypergraph,
    q: int,
    strategy: Union[StrategyTypes, str],
    k: Optional[int] = None,
    m: Optional[int] = None,
    p: Fraction = DEFAULT_P,
    epsilon: Fraction = Fraction(1),
    workers: int = 1,
    limit: int = DEFAULT_MATERIALIZE_LIMIT,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    vacuity_budget: int = DEFAULT_VACUITY_BUDGET,
    budget_pivots: int = DEFAULT_BUDGET_PIVOTS,
    budget_columns: int = DEFAULT_BUDGET_COLUMNS,
    cross_check: bool = False,
) -> PipelineReport:
    """
    Runs the full construction on G and returns a report whose packing, when present, validated exactly as a
    fractional K_q^r-decomposition of G.

    Parameters:
        strategy: paper-constants takes k and m from main_parameters(r, epsilon, q) and fails at the parameters
            stage when they are vacuous; empirical and lp-fallback need the caller's k and m and decompose every
            H by the matching constructions or by the LP oracle
        cross_check: also verify the final weights as a certificate of the LP oracle
    Raises:
        InputError: r < 2, q <= r, or k and m missing for a strategy that needs them
        ResourceBudgetError: a stage exceeded its budget
    """
    if isinstance(strategy, str):
        try:
            strategy = StrategyTypes.from_name(strategy)
        except ValueError as ex:
            raise InputError(str(ex)) from ex
    if G.r < 2 or q <= G.r:
        raise InputError(f"pipeline needs q > r >= 2, got r={G.r}, q={q}")
    run = _Pipeline(G, q, strategy, Fraction(p), workers, limit, enumeration_budget, budget_pivots, budget_columns)
    if strategy is StrategyTypes.paper_constants:
        params = main_parameters(G.r, epsilon, q, vacuity_budget=vacuity_budget)
        k, m = params.k, params.m
        if params.vacuous or k > G.n:
            run.record(
                "parameters",
                False,
                f"vacuous: k = C^m r q with m={m}, C={params.C} exceeds the budget {vacuity_budget} and n={G.n}",
                m=m,
                C=params.C,
                beta_log2=params.beta_log2,
                checks=params.checks,
            )
            return run.report(None, m)
        run.record("parameters", True, f"k={k}, m={m}")
    elif k is None or m is None:
        raise InputError(f"strategy {strategy.readable_name} needs k and m")
    return run.run(k, m, cross_check)
