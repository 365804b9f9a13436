"""Tests for concatenation, fixing and the almost-to-full conversion."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from fracDec.calculus import almost_to_full, concatenate, fix_packing
from fracDec.errorhandling import InputError, PreconditionError, ResourceBudgetError
from fracDec.hypercore import complete_graph
from fracDec.models.families import FamilyTypes
from fracDec.packing import ExplicitPacking, scale, validate
from fracDec.symdecomp import complete_symmetric


def random_targets(q: int, r: int, seed: int):
    rng = random.Random(seed)
    n = r * q
    count = len(list(combinations(range(n), r)))
    return {e: 1 - Fraction(rng.randint(0, 12), 12 * count) for e in combinations(range(n), r)}


def random_almost_packing(q: int, r: int, seed: int) -> ExplicitPacking:
    """K_{rq}^r copies of K_{rq+1}^r, each copy's symmetric weight lowered by at most 1/C(rq, r) of itself."""
    rng = random.Random(seed)
    size = r * q
    n = size + 1
    epsilon = Fraction(1, len(list(combinations(range(size), r))))
    base = Fraction(1, n - r)
    weights = {
        tuple(v for v in range(n) if v != x): base * (1 - epsilon * Fraction(rng.randint(0, 10), 10)) for x in range(n)
    }
    return ExplicitPacking(complete_graph(n, r), FamilyTypes.clique, weights, order=size)


class TestConcatenate:
    def test_symmetric_in_symmetric(self):
        outer = complete_symmetric(6, 4, 2)
        psi = concatenate(outer, lambda S: complete_symmetric(len(S), 3, 2))
        assert validate(psi).passed
        assert psi.weight([0, 2, 5]) == Fraction(1, 4)
        assert psi.order == 3

    def test_boundary_identity(self):
        outer = scale(complete_symmetric(7, 5, 2), Fraction(9, 10))
        inner_scale = Fraction(2, 3)
        psi = concatenate(outer, lambda S: scale(complete_symmetric(len(S), 3, 2), inner_scale))
        for e in psi.host.edges:
            assert psi.boundary(e) == outer.boundary(e) * inner_scale

    def test_support_merges_copies(self):
        outer = complete_symmetric(5, 4, 2)
        psi = concatenate(outer, lambda S: complete_symmetric(len(S), 3, 2))
        support = dict(psi.support())
        assert len(support) == 10
        assert sum(support.values()) == Fraction(10, 3)

    def test_inner_failure_names_element(self):
        def inner(S):
            raise InputError("no decomposition")

        with pytest.raises(PreconditionError) as info:
            concatenate(complete_symmetric(5, 4, 2), inner)
        assert info.value.witness == (0, 1, 2, 3)

    def test_beta_checked(self):
        outer = complete_symmetric(5, 4, 2)
        with pytest.raises(PreconditionError, match="almost"):
            concatenate(outer, lambda S: scale(complete_symmetric(len(S), 3, 2), Fraction(1, 2)), beta=Fraction(1, 4))

    def test_limit(self):
        with pytest.raises(ResourceBudgetError):
            concatenate(complete_symmetric(10, 5, 2), lambda S: complete_symmetric(len(S), 3, 2), limit=10)


class TestFixPacking:
    def test_all_ones_is_symmetric(self):
        P = fix_packing({e: Fraction(1) for e in combinations(range(6), 2)}, 3, 2)
        assert all(value == Fraction(1, 4) for _, value in P.support())

    @pytest.mark.parametrize("seed", range(100))
    def test_hits_targets(self, seed):
        targets = random_targets(3, 2, seed)
        P = fix_packing(targets, 3, 2)
        assert all(P.boundary(e) == value for e, value in targets.items())
        assert all(value >= 0 for _, value in P.support())

    def test_lowest_targets(self):
        targets = {e: Fraction(14, 15) for e in combinations(range(6), 2)}
        P = fix_packing(targets, 3, 2)
        assert all(P.boundary(e) == Fraction(14, 15) for e in targets)

    def test_targets_by_rank(self):
        targets = random_targets(3, 2, 7)
        by_rank = {complete_graph(6, 2).rank(e): value for e, value in targets.items()}
        assert fix_packing(by_rank, 3, 2).entries == fix_packing(targets, 3, 2).entries

    def test_target_out_of_range(self):
        targets = {e: Fraction(1) for e in combinations(range(6), 2)}
        targets[(2, 4)] = Fraction(13, 15)
        with pytest.raises(PreconditionError) as info:
            fix_packing(targets, 3, 2)
        assert info.value.witness == (2, 4)

    def test_target_above_one(self):
        targets = {e: Fraction(1) for e in combinations(range(6), 2)}
        targets[(0, 5)] = Fraction(16, 15)
        with pytest.raises(PreconditionError):
            fix_packing(targets, 3, 2)

    def test_missing_target(self):
        with pytest.raises(InputError, match="no target"):
            fix_packing({(0, 1): Fraction(1)}, 3, 2)

    @pytest.mark.slow
    def test_hits_targets_r3(self):
        targets = random_targets(4, 3, 1)
        P = fix_packing(targets, 4, 3)
        assert all(P.boundary(e) == value for e, value in targets.items())


class TestAlmostToFull:
    def test_uniform_deficiency(self):
        P = scale(complete_symmetric(7, 6, 2), Fraction(14, 15))
        full = almost_to_full(P, 3, 2)
        report = validate(full)
        assert report.passed
        assert report.min_boundary == report.max_boundary == 1

    def test_uneven_deficiency(self):
        host = complete_graph(7, 2)
        weights = {tuple(v for v in range(7) if v != x): Fraction(1, 5) for x in range(7)}
        weights[(1, 2, 3, 4, 5, 6)] = Fraction(1, 5) - Fraction(1, 60)
        P = ExplicitPacking(host, FamilyTypes.clique, weights, order=6)
        assert validate(P).eta == Fraction(1, 60)
        full = almost_to_full(P, 3, 2)
        assert validate(full).passed
        assert all(value > 0 for _, value in full.support())

    @pytest.mark.parametrize("q,seed", [(3, seed) for seed in range(10)] + [(4, seed) for seed in range(6)])
    def test_random_almost_packings(self, q, seed):
        P = random_almost_packing(q, 2, seed)
        assert validate(P, Fraction(1, len(list(combinations(range(2 * q), 2))))).passed
        full = almost_to_full(P, q, 2)
        report = validate(full)
        assert report.min_boundary == report.max_boundary == 1
        assert all(value >= 0 for _, value in full.support())

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(4))
    def test_random_almost_packings_r3(self, seed):
        P = random_almost_packing(4, 3, seed)
        full = almost_to_full(P, 4, 3)
        report = validate(full)
        assert report.min_boundary == report.max_boundary == 1
        assert all(value >= 0 for _, value in full.support())

    def test_deficiency_too_large(self):
        P = scale(complete_symmetric(7, 6, 2), Fraction(1, 2))
        with pytest.raises(PreconditionError, match="eta exceeds"):
            almost_to_full(P, 3, 2)

    def test_zero_boundary(self):
        P = ExplicitPacking(complete_graph(7, 2), FamilyTypes.clique, {tuple(range(6)): Fraction(1)}, order=6)
        with pytest.raises(PreconditionError, match="zero boundary"):
            almost_to_full(P, 3, 2)

    def test_wrong_copy_size(self):
        with pytest.raises(InputError):
            almost_to_full(complete_symmetric(7, 3, 2), 3, 2)
