"""Tests for the packing views and the boundary operator."""

from fractions import Fraction
from itertools import combinations

import pytest

from fracDec.errorhandling import InputError, ResourceBudgetError
from fracDec.hypercore import complete_graph, complete_minus
from fracDec.models.families import FamilyTypes
from fracDec.packing import ExplicitPacking, linear_combine, relabel, scale, validate, with_host
from fracDec.symdecomp import complete_symmetric


def triangles_of_k4() -> ExplicitPacking:
    host = complete_graph(4, 2)
    return ExplicitPacking(host, FamilyTypes.clique, {Q: Fraction(1, 2) for Q in combinations(range(4), 3)}, order=3)


class TestExplicitPacking:
    def test_boundary_of_k4(self):
        P = triangles_of_k4()
        assert all(P.boundary(e) == 1 for e in P.host.edges)
        assert validate(P).passed

    def test_boundary_matches_summation(self):
        P = triangles_of_k4()
        assert all(P.boundary(e) == P.boundary_by_summation(e) for e in P.host.edges)

    def test_negative_weight(self):
        with pytest.raises(InputError, match="negative weight"):
            ExplicitPacking(complete_graph(4, 2), FamilyTypes.clique, {(0, 1, 2): Fraction(-1, 2)}, order=3)

    def test_not_a_clique(self):
        host = complete_minus(4, 2, [[0, 1]])
        with pytest.raises(InputError, match="not a clique"):
            ExplicitPacking(host, FamilyTypes.clique, {(0, 1, 2): Fraction(1, 2)}, order=3)

    def test_wrong_order(self):
        with pytest.raises(InputError, match="does not have 3 vertices"):
            ExplicitPacking(complete_graph(5, 2), FamilyTypes.clique, {(0, 1, 2, 3): Fraction(1)}, order=3)

    def test_boundary_outside_host(self):
        P = ExplicitPacking(complete_minus(4, 2, [[0, 1]]), FamilyTypes.clique, {}, order=3)
        with pytest.raises(InputError, match="not an edge"):
            P.boundary([0, 1])

    def test_zero_weights_dropped(self):
        P = ExplicitPacking(complete_graph(4, 2), FamilyTypes.clique, {(0, 1, 2): 0, (1, 2, 3): 1}, order=3)
        assert list(P.support()) == [((1, 2, 3), Fraction(1))]


class TestOperations:
    def test_linear_combine_is_linear(self):
        P = triangles_of_k4()
        Q = ExplicitPacking(P.host, FamilyTypes.clique, {(0, 1, 2): Fraction(1)}, order=3)
        R = linear_combine([(Fraction(1, 3), P), (Fraction(2, 3), Q)])
        for e in P.host.edges:
            assert R.boundary(e) == Fraction(1, 3) * P.boundary(e) + Fraction(2, 3) * Q.boundary(e)

    def test_linear_combine_implicit(self):
        P = complete_symmetric(6, 3, 2)
        R = linear_combine([(Fraction(1, 2), P), (Fraction(1, 2), P.materialize())])
        assert not R.explicit
        assert validate(R).passed

    def test_linear_combine_rejects_host_mismatch(self):
        with pytest.raises(InputError, match="host mismatch"):
            linear_combine([(Fraction(1), triangles_of_k4()), (Fraction(1), complete_symmetric(5, 3, 2))])

    def test_linear_combine_rejects_negative(self):
        with pytest.raises(InputError, match="negative coefficient"):
            linear_combine([(Fraction(-1), triangles_of_k4())])

    def test_scale_past_one_fails_validation(self):
        report = validate(scale(triangles_of_k4(), 2))
        assert not report.passed
        assert report.max_boundary == 2

    def test_scale_down_is_almost(self):
        report = validate(scale(triangles_of_k4(), Fraction(3, 4)), eta=Fraction(1, 4))
        assert report.passed
        assert report.eta == Fraction(1, 4)

    def test_relabel_onto_larger_host(self):
        host = complete_graph(6, 2)
        moved = relabel(triangles_of_k4(), [5, 3, 1, 0], host)
        assert moved.boundary([3, 5]) == 1
        assert moved.boundary([2, 4]) == 0
        assert moved.weight([0, 3, 5]) == Fraction(1, 2)

    def test_relabel_rejects_collisions(self):
        with pytest.raises(InputError, match="injective"):
            relabel(triangles_of_k4(), [0, 0, 1, 2], complete_graph(6, 2))

    def test_relabel_implicit(self):
        P = complete_symmetric(4, 3, 2)
        moved = relabel(P, [2, 4, 6, 8], complete_graph(9, 2))
        assert moved.boundary([4, 8]) == 1
        assert moved.boundary([0, 1]) == 0

    def test_with_host_drops_removed_edges(self):
        P = complete_symmetric(5, 3, 2)
        host = complete_minus(5, 2, [[0, 1]])
        restricted = with_host(P, host)
        assert validate(restricted).passed
        with pytest.raises(InputError):
            restricted.boundary([0, 1])


class TestMaterialize:
    def test_implicit_matches_explicit(self):
        P = complete_symmetric(7, 4, 3)
        explicit = P.materialize()
        assert all(P.boundary(e) == explicit.boundary(e) for e in P.host.edges)
        assert len(list(explicit.support())) == 35

    def test_limit(self):
        with pytest.raises(ResourceBudgetError) as info:
            complete_symmetric(12, 5, 2).materialize(limit=100)
        assert info.value.budget == "materialize_limit"


class TestValidate:
    def test_empty_host(self):
        P = ExplicitPacking(complete_minus(3, 2, [[0, 1], [0, 2], [1, 2]]), FamilyTypes.clique, {}, order=3)
        report = validate(P)
        assert report.passed
        assert report.eta == 0

    def test_failures_listed(self):
        P = ExplicitPacking(complete_graph(4, 2), FamilyTypes.clique, {(0, 1, 2): Fraction(1)}, order=3)
        report = validate(P)
        assert not report.passed
        assert len(report.failures) == 3
        assert report.min_boundary == 0

    def test_parallel_agrees(self):
        P = complete_symmetric(8, 4, 2)
        assert validate(P, workers=4) == validate(P, workers=1)
