"""Immutable undirected simple graphs with CSR adjacency, plus degree and
connectivity utilities and edge-list file I/O.

Vertices are integers ``0..n-1``.  Adjacency lists are kept sorted
ascending, which realizes the natural vertex ordering used by the
deterministic "first k neighbours" selections elsewhere in the library.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ParseError


class Graph:
    """Undirected simple graph in compressed sparse row form.

    ``indptr`` has length ``n + 1`` and ``indices[indptr[v]:indptr[v+1]]``
    is the sorted neighbor list of ``v``.  Instances are immutable after
    construction (the arrays are marked read-only) and safe to share
    across threads/processes.
    """

    __slots__ = ("n", "m", "indptr", "indices", "_edge_keys")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.m = len(indices) // 2
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self._edge_keys = None

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph from an iterable or (m, 2) array of edges.

        Validates simplicity: endpoints in range, no self-loops, no
        duplicate edges (in either orientation).
        """
        if n < 0:
            raise ParameterError("vertex count must be nonnegative")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if e.size == 0:
            e = e.reshape(0, 2)
        if e.ndim != 2 or e.shape[1] != 2:
            raise ParameterError("edges must be pairs")
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ParameterError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise ParameterError("self-loops are not allowed")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            raise ParameterError("duplicate edges are not allowed")
        return cls._from_clean_pairs(n, lo, hi)

    @classmethod
    def _from_clean_pairs(cls, n: int, lo: np.ndarray, hi: np.ndarray) -> "Graph":
        """CSR from validated u<v pairs (no loops/dups). Internal fast path."""
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order].astype(np.int32, copy=False)
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(n, indptr, dst)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of ``v`` (read-only view)."""
        if not 0 <= v < self.n:
            raise ParameterError(f"vertex {v} out of range")
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise ParameterError(f"vertex {v} out of range")
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < len(row) and row[i] == v)

    def edges(self) -> np.ndarray:
        """All edges as an (m, 2) array with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def edge_keys(self) -> np.ndarray:
        """Sorted ``u*n+v`` keys over both orientations, for vectorized membership."""
        if self._edge_keys is None:
            src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
            keys = src * self.n + self.indices
            keys.setflags(write=False)
            self._edge_keys = keys  # already sorted: rows ascending, sorted within row
        return self._edge_keys

    def has_edges(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Vectorized edge membership for parallel arrays of endpoints."""
        keys = self.edge_keys()
        q = np.asarray(u, dtype=np.int64) * self.n + np.asarray(v, dtype=np.int64)
        pos = np.searchsorted(keys, q)
        pos = np.minimum(pos, len(keys) - 1) if len(keys) else pos
        if len(keys) == 0:
            return np.zeros(len(q), dtype=bool)
        return keys[pos] == q

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.n, self.m))

    def __repr__(self) -> str:  # pragma: no cover
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph with parts ``0..a-1`` (left) and ``0..b-1`` (right).

    Edges are (left, right) pairs; duplicates and out-of-range ids are
    rejected at construction.
    """

    a: int
    b: int
    edges: tuple = field(default_factory=tuple)

    def __post_init__(self):
        seen = set()
        for (l, r) in self.edges:
            if not (0 <= l < self.a and 0 <= r < self.b):
                raise ParameterError(f"bipartite edge ({l},{r}) out of range")
            if (l, r) in seen:
                raise ParameterError(f"duplicate bipartite edge ({l},{r})")
            seen.add((l, r))

    def adj_left(self) -> list[list[int]]:
        """Left-to-right adjacency lists, each sorted ascending."""
        adj: list[list[int]] = [[] for _ in range(self.a)]
        for (l, r) in self.edges:
            adj[l].append(r)
        for row in adj:
            row.sort()
        return adj

    @property
    def m(self) -> int:
        return len(self.edges)


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise ParameterError("empty graph has no degrees")
    return int(g.degrees().min())


def max_degree(g: Graph) -> int:
    if g.n == 0:
        raise ParameterError("empty graph has no degrees")
    return int(g.degrees().max())


def neighbors(g: Graph, v: int) -> np.ndarray:
    return g.neighbors(v)


def common_neighbors(g: Graph, u: int, v: int) -> int:
    """Number of common neighbors of ``u`` and ``v``."""
    return len(np.intersect1d(g.neighbors(u), g.neighbors(v), assume_unique=True))


def low_degree_set(g: Graph, threshold: float) -> np.ndarray:
    """Vertices of degree strictly below ``threshold``, ascending."""
    return np.flatnonzero(g.degrees() < threshold)


def low_degree_threshold(n: int, p: float, factor: float = 0.9, use_one_minus_p: bool = False) -> float:
    """The small-degree cutoff ``np - factor*sqrt(2np*log n)``.

    ``use_one_minus_p`` switches to the variant with a ``(1-p)`` factor
    under the square root; both forms appear in the statistics this
    threshold is drawn from, so the choice is exposed rather than fixed.
    """
    if n <= 1:
        return 0.0
    var = 2 * n * p * (1 - p if use_one_minus_p else 1.0) * np.log(n)
    return n * p - factor * np.sqrt(max(var, 0.0))


def _connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    seen = np.zeros(g.n, dtype=bool)
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for w in g.neighbors(u):
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(int(w))
    return count == g.n


def _vertex_flow_at_least(g: Graph, s: int, t: int, k: int) -> bool:
    """True iff there are >= k internally vertex-disjoint s-t paths.

    Unit-capacity max flow on the split digraph (v_in -> v_out, cap 1;
    edge arcs cap "infinite"), BFS augmentation, early exit at k.
    Node ids: v_in = 2v, v_out = 2v+1.
    """
    n = g.n
    INF = 1 << 30
    # cap[(x, y)] residual capacities, built lazily in dicts
    cap: dict[tuple[int, int], int] = {}
    adj: list[list[int]] = [[] for _ in range(2 * n)]

    def add_arc(x: int, y: int, c: int) -> None:
        if (x, y) not in cap:
            cap[(x, y)] = 0
            cap[(y, x)] = cap.get((y, x), 0)
            adj[x].append(y)
            adj[y].append(x)
        cap[(x, y)] += c

    for v in range(n):
        add_arc(2 * v, 2 * v + 1, INF if v in (s, t) else 1)
    for (u, v) in g.edges():
        add_arc(2 * int(u) + 1, 2 * int(v), INF)
        add_arc(2 * int(v) + 1, 2 * int(u), INF)

    src, dst = 2 * s + 1, 2 * t
    flow = 0
    while flow < k:
        # BFS for an augmenting path
        parent = {src: src}
        queue = [src]
        qi = 0
        while qi < len(queue) and dst not in parent:
            x = queue[qi]
            qi += 1
            for y in adj[x]:
                if y not in parent and cap.get((x, y), 0) > 0:
                    parent[y] = x
                    queue.append(y)
        if dst not in parent:
            return False
        y = dst
        while y != src:
            x = parent[y]
            cap[(x, y)] -= 1
            cap[(y, x)] = cap.get((y, x), 0) + 1
            y = x
        flow += 1
    return True


def is_k_connected(g: Graph, k: int) -> bool:
    """Exact k-connectivity test via the standard max-flow reduction.

    True iff no vertex cut of size < k exists (graphs with no cut at all,
    e.g. complete graphs, pass for every k).  Checks Menger flow >= k
    between a fixed k-subset and all their non-neighbors, which covers
    every potential cut.  Intended as a test oracle for n up to ~2000.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    if g.n > 2000:
        warnings.warn("is_k_connected is exact but O(k n) max-flow runs; "
                      f"n = {g.n} will be slow")
    if g.n <= 1:
        return True
    if not _connected(g):
        return False
    if k == 1:
        return True
    base = list(range(min(k, g.n)))
    base_set = set(base)
    for vi in base:
        nb = set(int(x) for x in g.neighbors(vi))
        for u in range(g.n):
            if u == vi or u in nb:
                continue
            if u in base_set and u < vi:
                continue  # pair already checked from the smaller id
            if not _vertex_flow_at_least(g, vi, u, k):
                return False
    return True


def write_edge_list(g: Graph, path) -> None:
    """Write the canonical edge-list format: ``n m`` header, then ``u v``
    lines with u < v in ascending lexicographic order."""
    e = g.edges()
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(f"{g.n} {g.m}\n")
        for u, v in e:
            f.write(f"{u} {v}\n")


def read_edge_list(path) -> Graph:
    """Parse the edge-list format written by :func:`write_edge_list`.

    Raises :class:`ParseError` with a line number on malformed lines,
    out-of-range vertices, duplicate edges, or self-loops.
    """
    with open(path, "r", encoding="ascii") as f:
        header = f.readline()
        if not header:
            raise ParseError("empty file", 1)
        parts = header.split()
        if len(parts) != 2:
            raise ParseError("header must be 'n m'", 1)
        try:
            n, m = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("header must contain two integers", 1) from None
        if n < 0 or m < 0:
            raise ParseError("negative counts in header", 1)
        lo = np.empty(m, dtype=np.int64)
        hi = np.empty(m, dtype=np.int64)
        seen: set[int] = set()
        for i in range(m):
            line = f.readline()
            lineno = i + 2
            if not line:
                raise ParseError(f"expected {m} edge lines, found {i}", lineno)
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("edge line must be 'u v'", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("edge endpoints must be integers", lineno) from None
            if u == v:
                raise ParseError(f"self-loop {u} {v}", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex out of range in edge {u} {v}", lineno)
            a, b = (u, v) if u < v else (v, u)
            key = a * n + b
            if key in seen:
                raise ParseError(f"duplicate edge {u} {v}", lineno)
            seen.add(key)
            lo[i], hi[i] = a, b
        extra = f.readline()
        if extra.strip():
            raise ParseError("trailing content after last edge", m + 2)
    return Graph._from_clean_pairs(n, lo, hi)
