"""Nice collections, certification vs exhaustive search, assembly, and the
independence verifiers (three implementations cross-checked)."""

import numpy as np
import pytest

from ist_forge import (
    Graph,
    IntegrityError,
    NicenessFailure,
    NicenessWitness,
    SmallTree,
    SpanningTreeFamily,
    TreeCollection,
    assemble,
    certify_nice,
    index_set,
    verify_independent,
    verify_independent_marksweep,
)
from ist_forge.ist import check_witness, root_path
from ist_forge.rng import Rng

from conftest import (
    brute_nice,
    brute_verify_independent,
    random_graph,
    random_tree_collection,
)


def K(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_collection(g, r, k):
    branch = [int(v) for v in g.neighbors(r)[:k]]
    return TreeCollection(r, [SmallTree(np.array([r, v]), {v: r}, v) for v in branch])


class TestIndexSet:
    def test_root_always_empty(self):
        g = K(4)
        tc = star_collection(g, 0, 2)
        assert index_set(g, tc, 0) == frozenset()

    def test_k4_example(self):
        # trees {0,1} and {0,2}: vertex 3 is adjacent to both, so I(3) = {}
        g = K(4)
        tc = TreeCollection(0, [SmallTree(np.array([0, 1]), {1: 0}, 1),
                                SmallTree(np.array([0, 2]), {2: 0}, 2)])
        assert index_set(g, tc, 3) == frozenset()

    def test_far_vertex(self):
        # path 0-1-2-3-4 with tree {0,1}: vertex 3 and 4 are uncovered
        g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        tc = TreeCollection(0, [SmallTree(np.array([0, 1]), {1: 0}, 1)])
        assert index_set(g, tc, 2) == frozenset()  # adjacent to 1
        assert index_set(g, tc, 3) == frozenset({0})
        assert index_set(g, tc, 4) == frozenset({0})


class TestCertifyNice:
    def test_complete_graph_all_covered(self):
        g = K(6)
        tc = star_collection(g, 0, 5)
        res = certify_nice(g, tc)
        assert isinstance(res, NicenessWitness)
        assert res.connectors == {}

    def test_malformed_collection_rejected(self):
        g = K(4)
        # overlapping trees share vertex 1
        tc = TreeCollection(0, [SmallTree(np.array([0, 1]), {1: 0}, 1),
                                SmallTree(np.array([0, 1]), {1: 0}, 1)])
        with pytest.raises(IntegrityError):
            certify_nice(g, tc)

    def test_failure_certificate(self):
        # star: r=0 with leaves 1..3; vertex 4 attached only to leaf 1.
        # trees {0,2} and {0,3}: vertex 4 has I = {0,1} but no connectors.
        g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 4)])
        tc = TreeCollection(0, [SmallTree(np.array([0, 2]), {2: 0}, 2),
                                SmallTree(np.array([0, 3]), {3: 0}, 3)])
        res = certify_nice(g, tc)
        assert isinstance(res, NicenessFailure)
        assert res.vertex == 4
        assert len(res.violator.neighborhood) < len(res.violator.set_vertices)

    def test_matches_bruteforce_200(self):
        rng = Rng(60)
        hits = 0
        for trial in range(200):
            n = int(rng.gen.integers(6, 31))
            p = float(rng.gen.uniform(0.15, 0.7))
            g = random_graph(n, p, rng)
            r = int(rng.gen.integers(0, n))
            k = int(rng.gen.integers(1, 5))
            tc = random_tree_collection(g, r, k, 2, rng)
            if tc is None:
                continue
            res = certify_nice(g, tc)
            got = isinstance(res, NicenessWitness)
            want = brute_nice(g, tc)
            assert got == want, (trial, n, p, r, k)
            if got:
                hits += 1
                check_witness(g, tc, res)
        assert hits > 20  # the comparison exercised both branches

    def test_witness_validity_rechecked(self):
        rng = Rng(61)
        g = random_graph(25, 0.4, rng)
        tc = random_tree_collection(g, 0, 3, 2, rng)
        res = certify_nice(g, tc)
        if isinstance(res, NicenessWitness):
            check_witness(g, tc, res)
            # distinctness per vertex
            for v, imap in res.connectors.items():
                assert len(set(imap.values())) == len(imap)


class TestAssemble:
    def test_k4_family(self):
        g = K(4)
        tc = star_collection(g, 0, 3)
        w = certify_nice(g, tc)
        fam = assemble(g, tc, w)
        assert fam.k == 3 and fam.n == 4
        for i, t in enumerate(tc.trees):
            assert fam.parents[i][t.entry] == 0
        assert verify_independent(g, fam).ok

    def test_empty_collection(self):
        g = Graph.from_edges(1, [])
        tc = TreeCollection(0, [])
        fam = assemble(g, tc, NicenessWitness({}))
        assert fam.k == 0

    def test_tree_counts_and_containment(self):
        rng = Rng(62)
        g = random_graph(40, 0.5, rng)
        tc = star_collection(g, 0, 4)
        w = certify_nice(g, tc)
        assert isinstance(w, NicenessWitness)
        fam = assemble(g, tc, w)
        for i in range(fam.k):
            par = fam.parents[i]
            assert int((par == -1).sum()) == 1  # only the root
            # the seed tree is preserved
            for x, px in tc.trees[i].parent.items():
                assert par[x] == px

    def test_bad_witness_rejected(self):
        g = K(4)
        tc = TreeCollection(0, [SmallTree(np.array([0, 1]), {1: 0}, 1)])
        # vertex 2,3 adjacent to tree -> empty index sets; a spurious entry fails
        with pytest.raises(IntegrityError):
            assemble(g, tc, NicenessWitness({2: {0: 3}}))

    def test_phase1_smallest_id_parent(self):
        # vertex 3 adjacent to both tree vertices 0 and 1: parent must be 0
        g = Graph.from_edges(4, [(0, 1), (0, 3), (1, 3), (1, 2), (0, 2)])
        tc = TreeCollection(0, [SmallTree(np.array([0, 1]), {1: 0}, 1)])
        w = certify_nice(g, tc)
        fam = assemble(g, tc, w)
        assert fam.parents[0][3] == 0
        assert fam.parents[0][2] == 0


class TestVerifier:
    def test_single_tree_always_independent(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        fam = SpanningTreeFamily(0, np.array([[-1, 0, 1, 2]], dtype=np.int32))
        assert verify_independent(g, fam).ok

    def test_non_edge_rejected(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        fam = SpanningTreeFamily(0, np.array([[-1, 0, 0]], dtype=np.int32))
        rep = verify_independent(g, fam)
        assert not rep.ok and rep.kind == "edge"

    def test_cycle_rejected(self):
        g = K(4)
        fam = SpanningTreeFamily(0, np.array([[-1, 2, 3, 2]], dtype=np.int32))
        rep = verify_independent(g, fam)
        assert not rep.ok and rep.kind == "structure"

    def test_constructed_collision_named(self):
        # two trees both route 3's path through vertex 1
        g = K(4)
        fam = SpanningTreeFamily(0, np.array([
            [-1, 0, 1, 1],
            [-1, 0, 3, 1],
        ], dtype=np.int32))
        rep = verify_independent(g, fam)
        assert not rep.ok and rep.kind == "independence"
        v, i, j, x = rep.detail
        assert x == 1 and v in (2, 3)
        rep2 = verify_independent_marksweep(g, fam)
        assert not rep2.ok and rep2.detail[3] == 1

    def test_root_path_extraction(self):
        g = K(4)
        fam = SpanningTreeFamily(0, np.array([[-1, 0, 1, 2]], dtype=np.int32))
        assert root_path(fam, 0, 3) == [3, 2, 1, 0]

    def test_three_verifiers_agree_500(self):
        rng = Rng(63)
        agree_fail = 0
        for trial in range(500):
            n = int(rng.gen.integers(5, 26))
            g = random_graph(n, float(rng.gen.uniform(0.3, 0.9)), rng)
            r = int(rng.gen.integers(0, n))
            k = int(rng.gen.integers(1, 4))
            tc = random_tree_collection(g, r, k, 2, rng)
            if tc is None:
                continue
            w = certify_nice(g, tc)
            if isinstance(w, NicenessFailure):
                continue
            fam = assemble(g, tc, w)
            # randomly corrupt half the families
            if rng.gen.random() < 0.5 and n > 3:
                i = int(rng.gen.integers(0, k))
                v = int(rng.gen.integers(0, n))
                if v != r:
                    u = int(g.neighbors(v)[0])
                    if u != v:
                        fam.parents[i, v] = u
            a = verify_independent(g, fam)
            b = verify_independent_marksweep(g, fam)
            c = brute_verify_independent(g, fam)
            assert a.ok == b.ok == c, (trial, a, b.ok, c)
            if not a.ok:
                agree_fail += 1
        assert agree_fail > 30  # both outcomes exercised

    def test_menger_paths_internally_disjoint(self):
        # for a verified family, extracted root-v paths are pairwise
        # internally disjoint at the path level
        rng = Rng(64)
        g = random_graph(40, 0.5, rng)
        tc = star_collection(g, 0, 5)
        w = certify_nice(g, tc)
        fam = assemble(g, tc, w)
        assert verify_independent(g, fam).ok
        for v in rng.gen.integers(1, 40, size=20):
            v = int(v)
            paths = [root_path(fam, i, v) for i in range(fam.k)]
            for i in range(len(paths)):
                for j in range(i + 1, len(paths)):
                    shared = set(paths[i][1:-1]) & set(paths[j][1:-1])
                    assert not shared, (v, i, j, shared)


class TestMasterSoundness:
    def test_small_scale(self):
        # certified collections always assemble into verified families
        rng = Rng(65)
        successes = 0
        for trial in range(300):
            n = int(rng.gen.integers(4, 61))
            g = random_graph(n, float(rng.gen.uniform(0.2, 0.9)), rng)
            r = int(rng.gen.integers(0, n))
            k = int(rng.gen.integers(1, 6))
            tc = random_tree_collection(g, r, k, 3, rng)
            if tc is None:
                continue
            w = certify_nice(g, tc)
            if isinstance(w, NicenessFailure):
                continue
            fam = assemble(g, tc, w)
            rep = verify_independent(g, fam)
            assert rep.ok, (trial, n, r, k, rep)
            successes += 1
        assert successes > 50


class TestFamilySerialization:
    def test_json_round_trip(self):
        g = K(5)
        tc = star_collection(g, 0, 4)
        fam = assemble(g, tc, certify_nice(g, tc))
        again = SpanningTreeFamily.from_json_dict(fam.to_json_dict())
        assert again.root == fam.root
        assert np.array_equal(again.parents, fam.parents)
        assert verify_independent(g, again).ok

    def test_json_sentinel_is_minus_one(self):
        g = K(4)
        tc = star_collection(g, 2, 2)
        fam = assemble(g, tc, certify_nice(g, tc))
        d = fam.to_json_dict()
        assert all(row[2] == -1 for row in d["parents"])
