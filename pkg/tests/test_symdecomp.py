"""Tests for the symmetric and missing-edge decompositions."""

from fractions import Fraction
from itertools import combinations

import pytest

from fracDec.errorhandling import InputError
from fracDec.hypercore import complete_minus
from fracDec.packing import validate
from fracDec.symdecomp import build_matrix, complete_symmetric, missing_edge_packing, solve_weights

MATRIX_CASES = [(r, q) for r in range(2, 6) for q in range(r + 1, 41) if r * q <= 40]


class TestBuildMatrix:
    def test_r2_q3(self):
        assert build_matrix(3, 2).a == ((2, 2), (0, 3))

    @pytest.mark.parametrize("r,q", MATRIX_CASES)
    def test_shape(self, r, q):
        a = build_matrix(q, r).a
        assert all(a[t][i] == 0 for t in range(r) for i in range(t))
        assert all(a[i][i] > 0 for i in range(r))
        assert all(a[t][i] <= a[t + 1][i] for i in range(r) for t in range(i))

    @pytest.mark.parametrize("r,q", [(2, 3), (2, 4), (3, 4)])
    def test_counts_cliques(self, r, q):
        n = r * q
        e = tuple(range(r))
        a = build_matrix(q, r).a
        for t in range(r):
            f = tuple(range(r - t, 2 * r - t))
            assert len(set(f) & set(e)) == t
            for i in range(t, r):
                count = sum(
                    1 for Q in combinations(range(n), q) if set(f) <= set(Q) and len(set(Q) & set(e)) == i
                )
                assert count == a[t][i]

    @pytest.mark.parametrize("r,q", [(1, 3), (2, 2), (3, 2)])
    def test_rejects(self, r, q):
        with pytest.raises(InputError):
            build_matrix(q, r)


class TestSolveWeights:
    def test_r2_q3(self):
        assert solve_weights(3, 2).w == (Fraction(1, 6), Fraction(1, 3))

    def test_r3_q4(self):
        assert solve_weights(4, 3).w == (Fraction(19, 168), Fraction(3, 28), Fraction(1, 8))

    @pytest.mark.parametrize("r,q", MATRIX_CASES)
    def test_nonnegative_solution(self, r, q):
        a, w = build_matrix(q, r).a, solve_weights(q, r).w
        assert all(value >= 0 for value in w)
        assert all(sum(a[t][i] * w[i] for i in range(r)) == 1 for t in range(r))


class TestMissingEdgePacking:
    def test_hand_computed_edge(self):
        P = missing_edge_packing(3, 2, [0, 1])
        assert P.boundary([2, 3]) == 1
        assert P.weight([0, 2, 3]) == Fraction(1, 3)
        assert P.weight([2, 3, 4]) == Fraction(1, 6)
        assert P.host == complete_minus(6, 2, [[0, 1]])

    @pytest.mark.parametrize("r,q", [(2, 3), (2, 4), (2, 5), (3, 4)])
    def test_exact_by_enumeration(self, r, q):
        P = missing_edge_packing(q, r, range(r)).materialize()
        report = validate(P)
        assert report.passed
        assert report.min_boundary == report.max_boundary == 1

    @pytest.mark.slow
    def test_exact_by_enumeration_r4_q5(self):
        assert validate(missing_edge_packing(5, 4, [3, 7, 11, 19]).materialize()).passed

    def test_any_missing_edge(self):
        P = missing_edge_packing(4, 2, [5, 2])
        assert validate(P).passed
        assert P.weight([2, 5, 0, 1]) == 0

    def test_rejects_bad_edge(self):
        with pytest.raises(InputError):
            missing_edge_packing(3, 2, [0, 6])
        with pytest.raises(InputError):
            missing_edge_packing(3, 2, [0, 1, 2])


class TestCompleteSymmetric:
    @pytest.mark.parametrize("n,q,r", [(5, 3, 2), (7, 4, 3), (8, 8, 2), (6, 3, 3)])
    def test_full_decomposition(self, n, q, r):
        P = complete_symmetric(n, q, r)
        assert validate(P.materialize()).passed
        assert validate(P).passed

    def test_rejects(self):
        with pytest.raises(InputError):
            complete_symmetric(4, 5, 2)
