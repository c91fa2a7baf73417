"""Graph type, degree utilities, connectivity oracle, and edge-list I/O."""

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from ist_forge import (
    Graph,
    ParameterError,
    ParseError,
    common_neighbors,
    gen_gnp,
    is_k_connected,
    low_degree_set,
    max_degree,
    min_degree,
    neighbors,
    read_edge_list,
    write_edge_list,
)
from ist_forge.rng import Rng

from conftest import brute_is_k_connected, random_graph


def K(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


class TestGraphType:
    def test_rejects_self_loop(self):
        with pytest.raises(ParameterError):
            Graph.from_edges(2, [(0, 0)])

    def test_rejects_duplicate(self):
        with pytest.raises(ParameterError):
            Graph.from_edges(3, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ParameterError):
            Graph.from_edges(2, [(0, 2)])

    def test_adjacency_sorted_and_symmetric(self):
        g = Graph.from_edges(4, [(2, 1), (0, 3), (1, 0)])
        for v in range(4):
            nb = g.neighbors(v)
            assert list(nb) == sorted(nb)
            for u in nb:
                assert v in g.neighbors(int(u))

    def test_handshake(self):
        g = random_graph(30, 0.4, Rng(3))
        assert int(g.degrees().sum()) == 2 * g.m

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 10), st.data())
    def test_handshake_property(self, n, data):
        all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        mask = data.draw(st.lists(st.booleans(), min_size=len(all_pairs), max_size=len(all_pairs)))
        g = Graph.from_edges(n, [e for e, keep in zip(all_pairs, mask) if keep])
        assert int(g.degrees().sum()) == 2 * g.m
        e = g.edges()
        assert len(e) == g.m


class TestDegreeUtilities:
    def test_k4_degrees(self):
        g = K(4)
        assert min_degree(g) == 3 and max_degree(g) == 3

    def test_star_degrees(self):
        g = star(5)
        assert min_degree(g) == 1 and max_degree(g) == 5

    def test_common_neighbors_k4(self):
        assert common_neighbors(K(4), 0, 1) == 2

    def test_neighbors_out_of_range(self):
        with pytest.raises(ParameterError):
            neighbors(K(3), 5)


class TestLowDegreeSet:
    def test_k4_empty(self):
        assert len(low_degree_set(K(4), 3)) == 0

    def test_path_endpoints(self):
        assert list(low_degree_set(path(3), 2)) == [0, 2]

    def test_strictness(self):
        g = path(3)
        assert list(low_degree_set(g, 1)) == []


class TestKConnectivity:
    def test_k5(self):
        assert is_k_connected(K(5), 4)

    def test_c5(self):
        c5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        assert is_k_connected(c5, 2)
        assert not is_k_connected(c5, 3)
        assert brute_is_k_connected(c5, 2) and not brute_is_k_connected(c5, 3)

    def test_star_cut_vertex(self):
        assert not is_k_connected(star(4), 2)

    def test_disconnected(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        assert not is_k_connected(g, 1)

    def test_k_must_be_positive(self):
        with pytest.raises(ParameterError):
            is_k_connected(K(3), 0)

    def test_agrees_with_bruteforce(self):
        rng = Rng(77)
        for trial in range(200):
            n = int(rng.gen.integers(2, 10))
            p = float(rng.gen.uniform(0.1, 0.9))
            g = random_graph(n, p, rng)
            k = int(rng.gen.integers(1, n))
            assert is_k_connected(g, k) == brute_is_k_connected(g, k), (n, p, k, g.edges())


class TestEdgeListIO:
    def test_read_path_graph(self, tmp_path):
        f = tmp_path / "g.el"
        f.write_text("3 2\n0 1\n1 2\n")
        g = read_edge_list(f)
        assert g.n == 3 and g.m == 2 and g.has_edge(0, 1) and g.has_edge(1, 2)

    def test_roundtrip(self, tmp_path):
        g = gen_gnp(50, 0.3, Rng(5))
        f = tmp_path / "g.el"
        write_edge_list(g, f)
        assert read_edge_list(f) == g

    def test_self_loop_error_with_line(self, tmp_path):
        f = tmp_path / "g.el"
        f.write_text("2 1\n0 0\n")
        with pytest.raises(ParseError) as exc:
            read_edge_list(f)
        assert exc.value.line == 2

    def test_duplicate_edge_error(self, tmp_path):
        f = tmp_path / "g.el"
        f.write_text("3 2\n0 1\n1 0\n")
        with pytest.raises(ParseError):
            read_edge_list(f)

    def test_out_of_range_error(self, tmp_path):
        f = tmp_path / "g.el"
        f.write_text("2 1\n0 5\n")
        with pytest.raises(ParseError):
            read_edge_list(f)

    def test_malformed_header(self, tmp_path):
        f = tmp_path / "g.el"
        f.write_text("banana\n")
        with pytest.raises(ParseError) as exc:
            read_edge_list(f)
        assert exc.value.line == 1

    def test_truncated_body(self, tmp_path):
        f = tmp_path / "g.el"
        f.write_text("3 2\n0 1\n")
        with pytest.raises(ParseError):
            read_edge_list(f)

    def test_file_format_shape(self, tmp_path):
        g = gen_gnp(20, 0.4, Rng(9))
        f = tmp_path / "g.el"
        write_edge_list(g, f)
        lines = f.read_text().splitlines()
        assert lines[0] == f"{g.n} {g.m}"
        pairs = [tuple(map(int, ln.split())) for ln in lines[1:]]
        assert all(u < v for u, v in pairs)
        assert pairs == sorted(pairs)

    @settings(max_examples=25, deadline=None,
              suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(st.integers(0, 12), st.floats(0, 1), st.integers(0, 2**32 - 1))
    def test_roundtrip_property(self, tmp_path, n, p, seed):
        g = gen_gnp(n, p, Rng(seed))
        f = tmp_path / "g.el"
        write_edge_list(g, f)
        assert read_edge_list(f) == g
