"""Matching engine: Hopcroft-Karp vs brute force, certificate validity,
Koenig duality, star packing, and the seeded perfect-matching statistic."""

import math

import pytest

from ist_forge import (
    BipartiteGraph,
    Deficiency,
    HallViolator,
    Matching,
    ParameterError,
    gen_bipartite_gnp,
    max_matching,
    saturating_or_violator,
    disjoint_star_packing,
    Graph,
)
from ist_forge.matching import match_bitset_rows
from ist_forge.rng import Rng

from conftest import (
    brute_max_matching_size,
    brute_min_vertex_cover_size,
    brute_star_packing_exists,
    random_graph,
)


def random_bipartite(a, b, p, rng) -> BipartiteGraph:
    edges = tuple((l, r) for l in range(a) for r in range(b) if rng.gen.random() < p)
    return BipartiteGraph(a, b, edges)


class TestMaxMatching:
    def test_empty(self):
        assert max_matching(BipartiteGraph(0, 0, ())).size == 0

    def test_complete_3x3(self):
        b = BipartiteGraph(3, 3, tuple((i, j) for i in range(3) for j in range(3)))
        assert max_matching(b).size == 3

    def test_frozen_4x4_instance(self):
        # brute force over all matchings gives 4 for this instance
        b = BipartiteGraph(4, 4, ((0, 0), (0, 1), (1, 1), (2, 2), (3, 2), (3, 3)))
        assert brute_max_matching_size(b) == 4
        assert max_matching(b).size == 4

    def test_pairs_are_edges(self):
        rng = Rng(5)
        b = random_bipartite(6, 7, 0.4, rng)
        m = max_matching(b)
        es = set(b.edges)
        assert all(pair in es for pair in m.pairs)

    def test_matches_bruteforce_500(self):
        rng = Rng(42)
        for _ in range(500):
            a = int(rng.gen.integers(0, 8))
            b_sz = int(rng.gen.integers(0, 8))
            p = float(rng.gen.uniform(0.1, 0.9))
            b = random_bipartite(a, b_sz, p, rng)
            assert max_matching(b).size == brute_max_matching_size(b)

    def test_koenig_duality(self):
        rng = Rng(43)
        for _ in range(120):
            a = int(rng.gen.integers(1, 8))
            b_sz = int(rng.gen.integers(1, 8))
            b = random_bipartite(a, b_sz, float(rng.gen.uniform(0.2, 0.8)), rng)
            assert max_matching(b).size == brute_min_vertex_cover_size(b)

    def test_determinism(self):
        rng = Rng(44)
        b = random_bipartite(30, 30, 0.2, rng)
        assert max_matching(b).pairs == max_matching(b).pairs


class TestSaturatingOrViolator:
    def test_saturates_left(self):
        b = BipartiteGraph(2, 5, tuple((i, j) for i in range(2) for j in range(5)))
        res = saturating_or_violator(b, "left")
        assert isinstance(res, Matching) and res.size == 2

    def test_pigeonhole_violator(self):
        b = BipartiteGraph(2, 1, ((0, 0), (1, 0)))
        res = saturating_or_violator(b, "left")
        assert isinstance(res, HallViolator)
        assert set(res.set_vertices) == {0, 1} and set(res.neighborhood) == {0}

    def test_right_side(self):
        b = BipartiteGraph(1, 2, ((0, 0), (0, 1)))
        res = saturating_or_violator(b, "right")
        assert isinstance(res, HallViolator) and res.side == "right"
        assert set(res.set_vertices) == {0, 1}

    def test_certificates_check_out(self):
        rng = Rng(50)
        for _ in range(100):
            b = random_bipartite(50, 60, 0.3 * float(rng.gen.random()), rng)
            res = saturating_or_violator(b, "left")
            adj = b.adj_left()
            if isinstance(res, Matching):
                assert res.size == b.a
                assert all(r in adj[l] for l, r in res.pairs)
            else:
                nb = set()
                for l in res.set_vertices:
                    nb |= set(adj[l])
                assert nb == set(res.neighborhood)
                assert len(res.neighborhood) < len(res.set_vertices)

    def test_exactly_one_branch(self):
        rng = Rng(51)
        for _ in range(60):
            b = random_bipartite(5, 5, float(rng.gen.uniform(0, 1)), rng)
            res = saturating_or_violator(b, "left")
            assert isinstance(res, (Matching, HallViolator))

    @pytest.mark.statistical
    def test_perfect_matching_statistic_small(self):
        # scaled-down preview of the acceptance run (full size there);
        # n must be large enough that 40 log n / n < 1
        n = 300
        p = 40 * math.log(n) / n
        assert p < 1
        for s in range(20):
            b = gen_bipartite_gnp(n, n, p, Rng(6000 + s))
            res = saturating_or_violator(b, "left")
            assert isinstance(res, Matching), f"seed {s} lacked a perfect matching"


class TestBitsetMatcher:
    def test_saturating(self):
        assign, viol = match_bitset_rows([0b011, 0b001, 0b110], 3)
        assert viol is None and sorted(assign) == [0, 1, 2]

    def test_violator(self):
        assign, viol = match_bitset_rows([0b001, 0b001], 3)
        assert assign is None and viol == [0, 1]

    def test_empty_rows(self):
        assign, viol = match_bitset_rows([], 5)
        assert assign == [] and viol is None

    def test_agrees_with_hopcroft_karp(self):
        rng = Rng(52)
        for _ in range(300):
            a = int(rng.gen.integers(0, 9))
            b_sz = int(rng.gen.integers(0, 9))
            bp = random_bipartite(a, b_sz, float(rng.gen.uniform(0, 1)), rng)
            rows = [0] * a
            for l, r in bp.edges:
                rows[l] |= 1 << r
            assign, viol = match_bitset_rows(rows, b_sz)
            hk = max_matching(bp).size
            if assign is not None:
                assert hk == a
                assert len(set(assign)) == a
                assert all(rows[i] >> c & 1 for i, c in enumerate(assign))
            else:
                assert hk < a
                nb = 0
                for i in viol:
                    nb |= rows[i]
                assert bin(nb).count("1") < len(viol)


class TestStarPacking:
    def test_empty_centers(self):
        g = random_graph(5, 0.5, Rng(1))
        assert disjoint_star_packing(g, [], range(5), 3) == []

    def test_single_center(self):
        g = Graph.from_edges(7, [(0, i) for i in range(1, 6)] + [(6, 1)])
        stars = disjoint_star_packing(g, [0], range(1, 6), 5)
        assert stars == [(0, (1, 2, 3, 4, 5))]

    def test_deficiency_certificate(self):
        # two centers share a single pool vertex
        g = Graph.from_edges(3, [(0, 2), (1, 2)])
        res = disjoint_star_packing(g, [0, 1], [2], 1)
        assert isinstance(res, Deficiency)
        assert len(res.pool_neighborhood) < len(res.centers) * res.star_size

    def test_overlap_rejected(self):
        g = random_graph(4, 0.9, Rng(2))
        with pytest.raises(ParameterError):
            disjoint_star_packing(g, [0, 1], [1, 2], 1)

    def test_matches_bruteforce_200(self):
        rng = Rng(53)
        for _ in range(200):
            n = int(rng.gen.integers(4, 13))
            g = random_graph(n, float(rng.gen.uniform(0.2, 0.9)), rng)
            n_centers = int(rng.gen.integers(1, 4))
            centers = list(range(n_centers))
            pool = list(range(n_centers, n))
            star_size = int(rng.gen.integers(1, 4))
            res = disjoint_star_packing(g, centers, pool, star_size)
            exists = brute_star_packing_exists(g, centers, pool, star_size)
            if isinstance(res, Deficiency):
                assert not exists
                # certificate re-validates
                assert len(res.pool_neighborhood) < len(res.centers) * star_size
                pool_set = set(pool)
                for c in res.centers:
                    nb = set(int(u) for u in g.neighbors(c)) & pool_set
                    assert nb <= set(res.pool_neighborhood)
            else:
                assert exists
                seen = set()
                for c, leaves in res:
                    assert len(leaves) == star_size
                    for u in leaves:
                        assert u not in seen and g.has_edge(c, u) and u in pool
                        seen.add(u)


from hypothesis import given, settings
from hypothesis import strategies as st


class TestMatchingProperties:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 6), st.integers(0, 6), st.data())
    def test_size_bounds_and_edges(self, a, b, data):
        pairs = [(l, r) for l in range(a) for r in range(b)]
        mask = data.draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
        bp = BipartiteGraph(a, b, tuple(e for e, keep in zip(pairs, mask) if keep))
        m = max_matching(bp)
        assert m.size <= min(a, b)
        es = set(bp.edges)
        assert all(pair in es for pair in m.pairs)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 6), st.data())
    def test_branch_certificates(self, a, b, data):
        pairs = [(l, r) for l in range(a) for r in range(b)]
        mask = data.draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
        bp = BipartiteGraph(a, b, tuple(e for e, keep in zip(pairs, mask) if keep))
        res = saturating_or_violator(bp, "left")
        if isinstance(res, Matching):
            assert res.size == a
        else:
            assert len(res.neighborhood) < len(res.set_vertices)


class TestStarPackingEdges:
    def test_star_size_zero(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        assert disjoint_star_packing(g, [0], [1, 2, 3], 0) == [(0, ())]
