"""Tests for the parameter calculus, the Chernoff comparison and the pipeline."""

from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from fracDec.errorhandling import InputError
from fracDec.hypercore import complete_graph, complete_minus
from fracDec.matchdist import edge_classes
from fracDec.models.families import StrategyTypes
from fracDec.orchestrator import _Pipeline, chernoff_factor, chernoff_report, main_parameters, pipeline
from fracDec.packing import validate


class TestMainParameters:
    def test_r3_epsilon_one(self):
        report = main_parameters(3, 1, 4)
        assert report.m == 122
        assert report.C == 864
        assert report.k == 864**122 * 3 * 4
        assert report.beta_log2 == 149
        assert report.vacuous
        assert report.threshold == Fraction(1, 220)

    def test_r2_epsilon_one(self):
        report = main_parameters(2, 1, 3)
        assert (report.m, report.C, report.beta_log2) == (6, 256, 13)

    def test_smaller_epsilon_raises_m(self):
        assert main_parameters(2, Fraction(1, 2), 3).m == 9

    @pytest.mark.parametrize("q", range(4, 11))
    def test_every_inequality_holds(self, q):
        report = main_parameters(3, 1, q)
        assert all(report.checks.values()), report.checks

    def test_beta_is_smallest(self):
        report = main_parameters(3, 1, 5)
        assert report.values["beta_rule_lhs"] <= (-Decimal(3)).exp()
        assert report.values["beta"] == Decimal(2**report.beta_log2)

    def test_vacuity_budget(self):
        assert not main_parameters(2, 1, 3, vacuity_budget=10**40).vacuous

    @pytest.mark.parametrize("r,epsilon,q", [(1, 1, 3), (2, 0, 3), (2, Fraction(3, 2), 3), (3, 1, 3)])
    def test_rejects(self, r, epsilon, q):
        with pytest.raises(InputError):
            main_parameters(r, epsilon, q)


class TestChernoff:
    def test_factor(self):
        with localcontext() as ctx:
            ctx.prec = 50
            expected = Decimal(-2).exp()
        assert abs(chernoff_factor(16) - expected) < Decimal(10) ** -45

    def test_mu_sixteen(self):
        report = chernoff_report(35, 2, 3, [[0, 1]])
        assert all(record.mu == 16 for record in report.records)
        assert not report.in_regime

    def test_records_per_orbit(self):
        n, r, q, M = 12, 2, 3, [[0, 1], [2, 3]]
        report = chernoff_report(n, r, q, M)
        assert len(report.records) == len(edge_classes(n, r, M))
        for record in report.records:
            assert record.mu == Fraction(1, 2) * 2 + Fraction(1, 2) * (12 - 4 - 2)
            assert record.y_tail >= record.exact
            assert record.bound_dominates == (Fraction(record.bound) >= record.exact)

    def test_regime_flag(self):
        assert chernoff_report(768, 2, 3, [[0, 1]]).in_regime


class TestPipeline:
    def test_empirical_missing_edge(self):
        G = complete_minus(13, 2, [[0, 1]])
        report = pipeline(G, 3, "empirical", k=12, m=1, cross_check=True)
        assert report.success, report.stages
        assert [stage.name for stage in report.stages] == [
            "family",
            "matchings",
            "inner",
            "concatenate",
            "almost_to_full",
            "validation",
            "lp_cross_check",
        ][: len(report.stages)]
        assert report.failure_stage is None
        final = validate(report.packing)
        assert final.min_boundary == final.max_boundary == 1

    def test_lp_fallback(self):
        report = pipeline(complete_graph(7, 2), 3, StrategyTypes.lp_fallback, k=6, m=0)
        assert report.success
        assert report.strategy == "lp-fallback"
        assert validate(report.packing).passed

    def test_theorem_constants_are_vacuous(self):
        report = pipeline(complete_graph(9, 2), 3, "paper-constants")
        assert not report.success
        assert report.failure_stage == "parameters"
        assert report.packing is None
        assert report.m == 6

    def test_family_out_of_range(self):
        report = pipeline(complete_graph(9, 2), 3, "empirical", k=10, m=0)
        assert report.failure_stage == "family"

    def test_inner_failure(self):
        report = pipeline(complete_minus(8, 2, [[0, 1]]), 3, "empirical", k=8, m=1)
        assert report.failure_stage == "inner"
        assert not report.success

    @pytest.mark.parametrize(
        "strategy,used,unused",
        [("empirical", "decompose_empirical", "decompose_lp"), ("lp-fallback", "decompose_lp", "decompose_empirical")],
    )
    def test_strategy_picks_the_inner_decomposer(self, mocker, strategy, used, unused):
        chosen = mocker.spy(_Pipeline, used)
        other = mocker.spy(_Pipeline, unused)
        pipeline(complete_minus(8, 2, [[0, 1]]), 3, strategy, k=8, m=1)
        assert chosen.call_count > 0
        assert other.call_count == 0

    def test_family_too_thin(self):
        report = pipeline(complete_minus(13, 2, [[0, 1]]), 3, "empirical", k=12, m=0)
        assert report.failure_stage == "concatenate"
        assert report.stages[-1].data["eta"] == Fraction(10, 11)

    def test_needs_k_and_m(self):
        with pytest.raises(InputError, match="needs k and m"):
            pipeline(complete_graph(7, 2), 3, "empirical")

    def test_unknown_strategy(self):
        with pytest.raises(InputError, match="unknown strategy"):
            pipeline(complete_graph(7, 2), 3, "greedy", k=6, m=0)
