"""Tests for the quasi-independent sampler and the K_n^r - M constructions."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from fracDec.calculus import concatenate
from fracDec.errorhandling import DeficiencyError, InputError, PreconditionError
from fracDec.hypercore import build_graph, build_matching, complete_minus, vertex_degree_max
from fracDec.lporacle import build_feasibility_lp, certificate_from_packing, feasible, verify_certificate
from fracDec.matchdist import (
    SizeDistribution,
    auxiliary_distribution,
    conditional_size_distribution,
    decompose_minus_matching,
    decompose_minus_matchings,
    deficiency_by_enumeration,
    deficiency_exact,
    deficiency_report,
    edge_classes,
    greedy_edge_color,
    iter_outcomes,
    matching_almost_packing,
    matching_clique_packing,
    quasi_independent_distribution,
    signature,
    size_distribution,
)
from fracDec.packing import validate
from fracDec.symdecomp import complete_symmetric

HALF = Fraction(1, 2)
OUTCOME_LIMIT = 2**15


def random_matching_instances(count: int, seed: int):
    """(n, r, q, M, p) with n <= 16 and at most OUTCOME_LIMIT sampler outcomes."""
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        r = rng.choice([2, 2, 3])
        q = rng.randint(r + 1, r + 2)
        if r * q > 16:
            continue
        n = rng.randint(r * q, 16)
        size = rng.randint(0, n // r)
        if (2**r - 1) ** size * 2 ** (n - r * size) > OUTCOME_LIMIT:
            continue
        vertices = rng.sample(range(n), r * size)
        M = [sorted(vertices[i * r : (i + 1) * r]) for i in range(size)]
        p = rng.choice([HALF, Fraction(1, 3), Fraction(2, 5), Fraction(1, 4)])
        found.append((n, r, q, M, p))
    return found


class TestSizeDistribution:
    def test_binomial_mass(self):
        dist = SizeDistribution.binomial(8, HALF)
        assert dist.mass_below(3) == Fraction(37, 256)
        assert dist.mean() == 4

    def test_power_matches_convolution(self):
        coin = SizeDistribution.bernoulli(Fraction(1, 3))
        assert coin.power(5) == SizeDistribution.binomial(5, Fraction(1, 3))

    def test_trailing_zeros_dropped(self):
        assert SizeDistribution([HALF, HALF, 0, 0]).masses == (HALF, HALF)


class TestQuasiIndependent:
    @pytest.mark.parametrize("r", range(2, 7))
    @pytest.mark.parametrize("p", [HALF, Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(2, 7)])
    def test_marginals(self, r, p):
        dist = quasi_independent_distribution(r, p)
        assert all(dist.marginal(t) == p**t for t in range(r))
        assert dist.prob(range(r)) == 0
        assert all(mass >= 0 for mass in dist.by_size)

    def test_r2_half_picks_one_vertex(self):
        assert quasi_independent_distribution(2, HALF).by_size == (0, HALF, 0)

    @pytest.mark.parametrize("r", range(2, 7))
    @pytest.mark.parametrize("p", [Fraction(3, 5), Fraction(2, 3)])
    def test_p_above_half(self, r, p):
        with pytest.raises(PreconditionError) as info:
            quasi_independent_distribution(r, p)
        assert info.value.witness == r - 2

    def test_p_out_of_range(self):
        with pytest.raises(InputError):
            quasi_independent_distribution(3, Fraction(1))

    def test_conditioning_on_full_set(self):
        with pytest.raises(PreconditionError):
            size_distribution(quasi_independent_distribution(3, HALF), 3)

    def test_conditioned_sizes(self):
        dist = size_distribution(quasi_independent_distribution(2, HALF), 1)
        assert dist == SizeDistribution.point(1)


class TestDeficiency:
    def test_free_edge_next_to_one_matching_edge(self):
        assert deficiency_exact(12, 2, 3, [[0, 1]], HALF, [4, 5]) == Fraction(37, 256)

    def test_perfect_matching(self):
        M = [[0, 1], [2, 3], [4, 5], [6, 7], [8, 9]]
        assert deficiency_exact(10, 2, 3, M, HALF, [0, 2]) == 1

    def test_matching_edge(self):
        with pytest.raises(PreconditionError):
            deficiency_exact(8, 2, 3, [[0, 1]], HALF, [0, 1])

    def test_sampler_parameters(self):
        with pytest.raises(InputError):
            deficiency_exact(5, 2, 3, [[0, 1]], HALF, [2, 3])
        with pytest.raises(InputError):
            deficiency_exact(8, 2, 3, [[0, 1]], Fraction(3, 4), [2, 3])

    @pytest.mark.parametrize(
        "n,r,q,M,p",
        [
            (8, 2, 3, [[0, 1], [2, 3]], HALF),
            (8, 2, 3, [[0, 1], [2, 3]], Fraction(1, 3)),
            (9, 2, 4, [[1, 5], [0, 8], [3, 4]], Fraction(2, 5)),
            (12, 3, 4, [[0, 1, 2]], HALF),
        ],
    )
    def test_matches_enumeration(self, n, r, q, M, p):
        for _, edge in edge_classes(n, r, M):
            assert deficiency_exact(n, r, q, M, p, edge) == deficiency_by_enumeration(n, r, q, M, p, edge)

    @pytest.mark.slow
    def test_matches_enumeration_on_random_instances(self):
        for n, r, q, M, p in random_matching_instances(50, seed=11):
            for _, edge in edge_classes(n, r, M):
                exact = deficiency_exact(n, r, q, M, p, edge)
                assert exact == deficiency_by_enumeration(n, r, q, M, p, edge), (n, r, q, M, p, edge)

    def test_outcome_probabilities_sum_to_one(self):
        assert sum(prob for _, prob in iter_outcomes(7, 2, [[0, 1], [2, 3]], Fraction(1, 3))) == 1

    def test_conditional_distribution(self):
        dist = conditional_size_distribution(12, 2, [[0, 1]], HALF, [4, 5])
        assert dist.mass_below(6) == Fraction(37, 256)
        assert conditional_size_distribution(12, 2, [[0, 1]], HALF, [0, 1]) is None

    def test_auxiliary_is_dominated(self):
        n, r, q, M = 12, 2, 3, [[0, 1], [2, 3]]
        for _, edge in edge_classes(n, r, M):
            y = auxiliary_distribution(n, r, M, HALF, edge)
            assert y.mass_below(r * q) >= deficiency_exact(n, r, q, M, HALF, edge)


class TestEdgeClasses:
    @pytest.mark.parametrize("M", [[[0, 1]], [[0, 1], [2, 3]], [[0, 1], [2, 3], [4, 5], [6, 7]]])
    def test_cover_every_orbit(self, M):
        n, r = 8, 2
        matching = build_matching(n, r, M)
        host = complete_minus(n, r, M)
        found = {signature(edge, matching) for edge in host.edges}
        assert found == {sig for sig, _ in edge_classes(n, r, M)}

    def test_r3(self):
        classes = edge_classes(10, 3, [[0, 1, 2], [3, 4, 5]])
        sigs = [sig for sig, _ in classes]
        assert len(sigs) == len(set(sigs))
        assert ((2, 1), 0) in sigs
        assert ((), 3) in sigs
        assert all(sizes[0] < 3 for (sizes, _), _ in classes if sizes)

    def test_report_per_edge(self):
        report = deficiency_report(12, 2, 3, [[0, 1]])
        assert len(report.per_edge_eta) == 65
        assert report.max_eta == max(report.per_edge_eta.values())
        assert report.threshold == Fraction(1, 15)
        assert not report.passed


class TestMatchingPackings:
    def test_almost_packing_boundary(self):
        n, r, q, M = 8, 2, 3, [[0, 1], [2, 3]]
        P = matching_almost_packing(n, r, q, M)
        explicit = P.materialize()
        for edge in P.host.edges:
            expected = 1 - deficiency_exact(n, r, q, M, HALF, edge)
            assert P.boundary(edge) == expected
            assert explicit.boundary_by_summation(edge) == expected

    def test_clique_packing_closed_form(self):
        n, r, q, M = 8, 2, 3, [[0, 1], [2, 3]]
        P = matching_clique_packing(n, r, q, M)
        explicit = P.materialize()
        assert all(len(Q) == 6 and not {0, 1} <= set(Q) for Q, _ in explicit.support())
        for edge in P.host.edges:
            assert explicit.boundary(edge) == 1 - deficiency_exact(n, r, q, M, HALF, edge)

    @pytest.mark.parametrize(
        "n,M,p",
        [(8, [[0, 1], [2, 3]], HALF), (9, [[0, 1], [2, 3]], HALF), (9, [[3, 7]], Fraction(1, 3))],
    )
    def test_closed_form_is_the_concatenation(self, n, M, p):
        r, q = 2, 3
        closed = {Q: w for Q, w in matching_clique_packing(n, r, q, M, p).materialize().support() if w}
        outer = matching_almost_packing(n, r, q, M, p)
        generic = concatenate(outer, lambda S: complete_symmetric(len(S), r * q, r))
        assert closed == {Q: w for Q, w in generic.support() if w}


class TestDecomposeMinusMatching:
    def test_empty_matching(self):
        assert validate(decompose_minus_matching(7, 2, 3, [])).passed

    def test_missing_edge_case(self):
        P = decompose_minus_matching(6, 2, 3, [[2, 4]])
        assert validate(P).passed
        assert P.host == complete_minus(6, 2, [[2, 4]])

    def test_deficiency_too_large(self):
        with pytest.raises(DeficiencyError) as info:
            decompose_minus_matching(15, 2, 3, [[0, 1]])
        assert info.value.report.max_eta == Fraction(299, 4096)
        assert info.value.depth == 0

    def test_first_feasible_size(self):
        assert deficiency_report(15, 2, 3, [[0, 1]]).max_eta > Fraction(1, 15)
        assert deficiency_report(16, 2, 3, [[0, 1]]).max_eta <= Fraction(1, 15)

    @pytest.mark.slow
    def test_full_decomposition_at_16(self):
        P = decompose_minus_matching(16, 2, 3, [[0, 1]])
        report = validate(P)
        assert report.passed
        assert report.min_boundary == report.max_boundary == 1
        assert P.host == complete_minus(16, 2, [[0, 1]])
        L = build_feasibility_lp(P.host, 3)
        assert verify_certificate(L, certificate_from_packing(L, P))
        assert feasible(L).kind == "feasible"


class TestDecomposeMinusMatchings:
    def test_two_matchings(self):
        P = decompose_minus_matchings(12, 2, 3, [[[0, 1]], [[1, 2]]])
        assert P.host == complete_minus(12, 2, [[0, 1], [1, 2]])
        report = validate(P)
        assert report.passed
        assert all(not {1, 2} <= set(Q) and not {0, 1} <= set(Q) for Q, _ in P.support())
        L = build_feasibility_lp(P.host, 3)
        assert verify_certificate(L, certificate_from_packing(L, P))
        assert feasible(L).kind == "feasible"

    def test_repeated_edges_collapse(self):
        P = decompose_minus_matchings(6, 2, 3, [[[0, 1]], [[0, 1]]])
        assert validate(P).passed

    def test_no_stripping_size(self):
        with pytest.raises(DeficiencyError) as info:
            decompose_minus_matchings(11, 2, 3, [[[0, 1]], [[2, 3]]])
        assert info.value.depth == 1


class TestGreedyEdgeColor:
    def test_classes_are_matchings(self):
        H = build_graph(7, 2, [[0, 1], [1, 2], [2, 3], [3, 0], [4, 5], [5, 6], [0, 5]])
        classes = greedy_edge_color(H)
        assert sorted(e for M in classes for e in M) == sorted(H.edges)
        for M in classes:
            vertices = [v for e in M for v in e]
            assert len(vertices) == len(set(vertices))
        assert len(classes) <= H.r * (vertex_degree_max(H) - 1) + 1

    def test_star(self):
        H = build_graph(5, 3, [list(e) for e in combinations(range(5), 3) if 0 in e][:4])
        assert len(greedy_edge_color(H)) == 4
