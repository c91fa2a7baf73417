"""Bipartite maximum matching, Hall-violator extraction, and disjoint
star packing.

``max_matching`` is Hopcroft-Karp with neighbor iteration in ascending id
order, so augmenting-path tie-breaks (and therefore the returned matching)
are reproducible.  ``saturating_or_violator`` turns a failed saturation
into a checkable Hall certificate.  ``match_bitset_rows`` is the compact
greedy+augmentation matcher used by the per-vertex certification loops,
where thousands of small instances dominate the runtime.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass

from .errors import ParameterError
from .graph import BipartiteGraph

_INF = 1 << 60


@dataclass(frozen=True)
class Matching:
    """A set of (left, right) pairs, no endpoint repeated."""

    pairs: tuple

    def __post_init__(self):
        lefts = [l for l, _ in self.pairs]
        rights = [r for _, r in self.pairs]
        if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
            raise ParameterError("matching repeats an endpoint")

    @property
    def size(self) -> int:
        return len(self.pairs)

    def left_map(self) -> dict[int, int]:
        return {l: r for l, r in self.pairs}


@dataclass(frozen=True)
class HallViolator:
    """A set A0 on one side with |N(A0)| < |A0|, certifying no saturating
    matching of that side exists."""

    side: str  # "left" or "right"
    set_vertices: tuple
    neighborhood: tuple

    def __post_init__(self):
        if len(self.neighborhood) >= len(self.set_vertices):
            raise ParameterError("not a Hall violator: |N(A0)| >= |A0|")


@dataclass(frozen=True)
class Deficiency:
    """Certificate that a star packing is impossible: the alternating-
    reachable center set demands more leaves than its pool neighborhood
    offers (|N(centers)| < |centers| * star_size)."""

    centers: tuple
    star_size: int
    pool_neighborhood: tuple


def _hopcroft_karp(n_left: int, n_right: int, adj: list[list[int]]) -> tuple[list[int], list[int]]:
    """Core HK on left adjacency lists; returns (pair_left, pair_right),
    -1 for unmatched."""
    pair_l = [-1] * n_left
    pair_r = [-1] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        q = deque()
        for l in range(n_left):
            if pair_l[l] == -1:
                dist[l] = 0
                q.append(l)
            else:
                dist[l] = _INF
        found = False
        while q:
            l = q.popleft()
            for r in adj[l]:
                l2 = pair_r[r]
                if l2 == -1:
                    found = True
                elif dist[l2] == _INF:
                    dist[l2] = dist[l] + 1
                    q.append(l2)
        return found

    def dfs(l: int) -> bool:
        for r in adj[l]:
            l2 = pair_r[r]
            if l2 == -1 or (dist[l2] == dist[l] + 1 and dfs(l2)):
                pair_l[l] = r
                pair_r[r] = l
                return True
        dist[l] = _INF
        return False

    while bfs():
        for l in range(n_left):
            if pair_l[l] == -1:
                dfs(l)
    return pair_l, pair_r


def max_matching(b: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching, deterministic for a fixed input."""
    adj = b.adj_left()
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, b.a + b.b + 100))
    try:
        pair_l, _ = _hopcroft_karp(b.a, b.b, adj)
    finally:
        sys.setrecursionlimit(old)
    pairs = tuple((l, r) for l, r in enumerate(pair_l) if r != -1)
    return Matching(pairs)


def _alternating_reach(adj, pair_r, start: int) -> tuple[list[int], list[int]]:
    """Left/right sets reachable from unmatched ``start`` by alternating
    paths (any edge left->right, matched edge right->left)."""
    seen_l = {start}
    seen_r: set[int] = set()
    stack = [start]
    while stack:
        l = stack.pop()
        for r in adj[l]:
            if r not in seen_r:
                seen_r.add(r)
                l2 = pair_r[r]
                if l2 != -1 and l2 not in seen_l:
                    seen_l.add(l2)
                    stack.append(l2)
    return sorted(seen_l), sorted(seen_r)


def saturating_or_violator(b: BipartiteGraph, side: str = "left"):
    """A matching saturating ``side``, or a HallViolator on that side.

    The violator is the alternating-reachability set of the smallest
    unmatched vertex after a maximum matching; with a maximum matching in
    hand every reachable right vertex is matched, so |N(A0)| = |A0| - 1.
    """
    if side not in ("left", "right"):
        raise ParameterError("side must be 'left' or 'right'")
    if side == "right":
        flipped = BipartiteGraph(b.b, b.a, tuple((r, l) for l, r in b.edges))
        res = saturating_or_violator(flipped, "left")
        if isinstance(res, Matching):
            return Matching(tuple((l, r) for r, l in res.pairs))
        return HallViolator("right", res.set_vertices, res.neighborhood)

    adj = b.adj_left()
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, b.a + b.b + 100))
    try:
        pair_l, pair_r = _hopcroft_karp(b.a, b.b, adj)
    finally:
        sys.setrecursionlimit(old)
    unmatched = [l for l in range(b.a) if pair_l[l] == -1]
    if not unmatched:
        return Matching(tuple((l, r) for l, r in enumerate(pair_l)))
    a0, nbh = _alternating_reach(adj, pair_r, unmatched[0])
    return HallViolator("left", tuple(a0), tuple(nbh))


def match_bitset_rows(rows: list[int], n_cols: int, degrees=None):
    """Match every row to a distinct column of its adjacency bitmask.

    ``rows[i]`` is an int whose bit c is set iff row i may use column c.
    Returns ``(assignment, None)`` with one column index per row when a
    row-saturating matching exists, else ``(None, violator_rows)``: a row
    set whose united column neighborhood is smaller than the set.

    Greedy seeding in ascending row-degree order (``degrees`` may supply
    precomputed popcounts), then BFS augmentation for the leftovers;
    fully deterministic.
    """
    n = len(rows)
    assign = [-1] * n
    owner: dict[int, int] = {}
    if degrees is None:
        order = sorted(range(n), key=lambda i: (rows[i].bit_count(), i))
    else:
        import numpy as _np

        order = _np.argsort(_np.asarray(degrees), kind="stable").tolist()
    used = 0
    for i in order:
        free = rows[i] & ~used
        if free:
            c = (free & -free).bit_length() - 1
            assign[i] = c
            owner[c] = i
            used |= 1 << c
    for i in order:
        if assign[i] != -1:
            continue
        parent_row_of_col: dict[int, int] = {}
        q = deque([i])
        rows_seen = {i}
        cols_seen = 0
        free_col = -1
        while q and free_col == -1:
            r = q.popleft()
            cc = rows[r] & ~cols_seen
            cols_seen |= cc
            while cc:
                c = (cc & -cc).bit_length() - 1
                cc &= cc - 1
                parent_row_of_col[c] = r
                o = owner.get(c)
                if o is None:
                    free_col = c
                    break
                if o not in rows_seen:
                    rows_seen.add(o)
                    q.append(o)
        if free_col == -1:
            return None, sorted(rows_seen)
        col = free_col
        while True:
            r = parent_row_of_col[col]
            released = assign[r]
            assign[r] = col
            owner[col] = r
            if r == i:
                break
            col = released
    return assign, None


def disjoint_star_packing(g, centers, leaf_pool, star_size: int):
    """Vertex-disjoint stars: for each center, ``star_size`` distinct
    leaves from ``leaf_pool`` adjacent to it, no leaf reused.

    Solved as a b-matching by Kuhn-style augmentation (each center demands
    star_size units, each leaf has capacity one).  Returns a list of
    ``(center, leaves)`` pairs, or a :class:`Deficiency` naming the
    alternating-reachable deficient center set.
    """
    centers = sorted(int(c) for c in centers)
    pool = sorted(int(u) for u in leaf_pool)
    if set(centers) & set(pool):
        raise ParameterError("centers and leaf pool must be disjoint")
    if star_size < 0:
        raise ParameterError("star size must be nonnegative")
    pool_set = set(pool)
    adj = {c: [int(u) for u in g.neighbors(c) if int(u) in pool_set] for c in centers}
    leaf_owner: dict[int, int] = {}
    quota = {c: 0 for c in centers}

    def try_assign(c0: int, banned: set[int]) -> bool:
        for u in adj[c0]:
            if u in banned:
                continue
            banned.add(u)
            owner = leaf_owner.get(u)
            if owner is None:
                leaf_owner[u] = c0
                quota[c0] += 1
                return True
            # ask the owner to shift one of its leaves elsewhere
            quota[owner] -= 1
            del leaf_owner[u]
            if try_assign(owner, banned):
                leaf_owner[u] = c0
                quota[c0] += 1
                return True
            leaf_owner[u] = owner
            quota[owner] += 1
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, len(centers) * max(star_size, 1) + 1000))
    try:
        for c in centers:
            for _ in range(star_size):
                if not try_assign(c, set()):
                    reach = {c}
                    frontier = [c]
                    nb: set[int] = set()
                    while frontier:
                        cc = frontier.pop()
                        for u in adj[cc]:
                            if u not in nb:
                                nb.add(u)
                                o = leaf_owner.get(u)
                                if o is not None and o not in reach:
                                    reach.add(o)
                                    frontier.append(o)
                    return Deficiency(tuple(sorted(reach)), star_size, tuple(sorted(nb)))
    finally:
        sys.setrecursionlimit(old)
    stars = {c: [] for c in centers}
    for u, c in leaf_owner.items():
        stars[c].append(u)
    return [(c, tuple(sorted(stars[c]))) for c in centers]
