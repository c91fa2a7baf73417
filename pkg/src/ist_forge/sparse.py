"""Sparse-regime IST builder: low-degree set handling, a branch set Q of
root neighbors, a vertex-disjoint path system grown by iterated
matchings, and niceness certification of the resulting trees.

The path system is grown in rounds: round j finds a matching that
saturates the current path endpoints into the unused, unforbidden
vertices; the union of the round matchings is a family of k disjoint
paths of the prescribed length.  Every failure carries the round index
and a Hall violator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .builders import STAGE_NICENESS, STAGE_PATH_GROWTH, BuildFailure
from .errors import IntegrityError, ParameterError
from .graph import BipartiteGraph, Graph, low_degree_set, low_degree_threshold
from .ist import NicenessFailure, SmallTree, TreeCollection, certify_nice
from .matching import HallViolator, saturating_or_violator


@dataclass
class SparseParams:
    """Tunable constants of the sparse construction.

    The asymptotic analysis uses a path-length factor of 1e5 and a cap
    divisor of 100; at desk scale those produce degenerate length-1 paths
    whose trees are too small to certify, so the defaults here are scaled
    to the sizes the empirical targets run at (factor 5, divisor 10).
    ``p_estimate`` overrides the density estimate 2m/(n(n-1)).
    ``threshold_one_minus_p`` switches the low-degree cutoff to the
    variant with a (1-p) factor under the root.

    ``min_degree_margin`` protects vertices of near-minimum degree: the
    low-degree threshold is raised to delta(G) + margin whenever the
    resulting set stays small (at most max(8, n^0.3) vertices).  Vertices
    of degree ~delta need every neighbor as a potential connector, which
    only holds for members of the low-degree set (the path system avoids
    their neighborhoods); asymptotically the minimum degree falls below
    the formula threshold on its own, but at these sizes it does not.
    ``None`` disables the adjustment.
    """

    low_degree_factor: float = 0.9
    path_len_factor: float = 5.0
    path_len_cap_divisor: float = 10.0
    p_estimate: float | None = None
    threshold_one_minus_p: bool = False
    min_degree_margin: float | None = 8.0

    def __post_init__(self):
        if self.low_degree_factor <= 0 or self.path_len_factor <= 0 or self.path_len_cap_divisor <= 0:
            raise ParameterError("SparseParams fields must be positive")
        if self.p_estimate is not None and not 0 < self.p_estimate <= 1:
            raise ParameterError("p_estimate must be in (0, 1]")
        if self.min_degree_margin is not None and self.min_degree_margin < 0:
            raise ParameterError("min_degree_margin must be nonnegative")


@dataclass
class PathSystem:
    """k vertex-disjoint paths; ``paths[i][0]`` is the branch vertex q_i
    and every path has exactly ell+1 vertices."""

    paths: list
    ell: int

    @property
    def vertex_set(self) -> np.ndarray:
        return np.concatenate(self.paths) if self.paths else np.empty(0, dtype=np.int64)


@dataclass
class GrowthFailure:
    round_index: int
    violator: HallViolator  # vertex ids of the stuck endpoints / their frontier


def validate_path_system(g: Graph, ps: PathSystem, q, forbidden) -> None:
    """Independent re-check of a grown path system; raises IntegrityError."""
    q = [int(x) for x in q]
    seen: set[int] = set()
    if len(ps.paths) != len(q):
        raise IntegrityError("one path per branch vertex required")
    fb = set(int(x) for x in forbidden)
    for i, path in enumerate(ps.paths):
        path = [int(x) for x in path]
        if len(path) != ps.ell + 1:
            raise IntegrityError(f"path {i} has {len(path)} vertices, expected {ps.ell + 1}")
        if path[0] != q[i]:
            raise IntegrityError(f"path {i} does not start at its branch vertex")
        for x in path:
            if x in seen:
                raise IntegrityError(f"paths overlap at vertex {x}")
            seen.add(x)
        for x in path[1:]:
            if x in fb:
                raise IntegrityError(f"path {i} enters the forbidden set at {x}")
        for a, b in zip(path, path[1:]):
            if not g.has_edge(a, b):
                raise IntegrityError(f"path {i} uses the non-edge ({a},{b})")


def grow_path_system(g: Graph, q, ell: int, forbidden):
    """Grow k disjoint paths of length ``ell`` from the branch set ``q``.

    Round j matches the current endpoints into unused vertices outside
    ``forbidden`` using edges of g; a deficient round yields a
    GrowthFailure with the round index and the Hall violator (in graph
    vertex ids).
    """
    q = [int(x) for x in q]
    if ell < 0:
        raise ParameterError("path length must be nonnegative")
    fb = np.zeros(g.n, dtype=bool)
    fb[[int(x) for x in forbidden]] = True
    if fb[q].any():
        raise ParameterError("branch set intersects the forbidden set")
    used = fb.copy()
    used[q] = True
    paths = [[x] for x in q]
    frontier = list(q)
    for rnd in range(ell):
        # bipartite instance: endpoints x usable neighbor targets
        cand_ids: dict[int, int] = {}
        cand_list: list[int] = []
        edges = []
        for li, x in enumerate(frontier):
            for u in g.neighbors(x):
                u = int(u)
                if used[u]:
                    continue
                j = cand_ids.get(u)
                if j is None:
                    j = len(cand_list)
                    cand_ids[u] = j
                    cand_list.append(u)
                edges.append((li, j))
        b = BipartiteGraph(len(frontier), len(cand_list), tuple(edges))
        res = saturating_or_violator(b, "left")
        if isinstance(res, HallViolator):
            viol = HallViolator(
                "left",
                tuple(frontier[i] for i in res.set_vertices),
                tuple(cand_list[j] for j in res.neighborhood),
            )
            return GrowthFailure(round_index=rnd, violator=viol)
        nxt = res.left_map()
        new_frontier = []
        for li in range(len(frontier)):
            u = cand_list[nxt[li]]
            paths[li].append(u)
            used[u] = True
            new_frontier.append(u)
        frontier = new_frontier
    return PathSystem(paths=[np.array(p, dtype=np.int64) for p in paths], ell=ell)


def path_length(n: int, p_hat: float, k: int, params: SparseParams) -> int:
    """ell = min(ceil(c * log n / (n p^2)), floor(n / (divisor * k))),
    floored at 1."""
    if n <= 1:
        return 1
    formula = int(np.ceil(params.path_len_factor * np.log(n) / (n * p_hat * p_hat)))
    cap = int(np.floor(n / (params.path_len_cap_divisor * max(k, 1))))
    return max(1, min(formula, cap))


def build_sparse(g: Graph, r: int, k: int, params: SparseParams | None = None):
    """End-to-end sparse construction on a given graph.

    Stages: (1) low-degree set S from the density estimate; (2) branch set
    Q = first k neighbors of r outside S and its neighborhood (arbitrary
    neighbors fill the gap, recorded in diagnostics); (3) path length from
    the density formula, capped; (4) disjoint path growth avoiding
    S u N(S) u {r}; (5) trees = paths plus the root edges; (6) niceness
    certification.  Failures are staged values with certificates.
    """
    params = params or SparseParams()
    if not 0 <= r < g.n:
        raise ParameterError("root out of range")
    dr = g.degree(r)
    if k < 1 or k > dr:
        raise ParameterError(f"need 1 <= k <= deg(root) = {dr}")
    n = g.n
    p_hat = params.p_estimate if params.p_estimate is not None else (2 * g.m / (n * (n - 1)) if n > 1 else 1.0)
    p_hat = min(max(p_hat, 1e-12), 1.0)
    thr = low_degree_threshold(n, p_hat, params.low_degree_factor, params.threshold_one_minus_p)
    degrees = g.degrees()
    if params.min_degree_margin is not None and n:
        thr_margin = float(degrees.min()) + params.min_degree_margin
        if thr_margin > thr:
            margin_size = int((degrees < thr_margin).sum())
            if margin_size <= max(8, int(np.ceil(n ** 0.3))):
                thr = thr_margin
    s_set = low_degree_set(g, thr)
    in_s = np.zeros(n, dtype=bool)
    in_s[s_set] = True
    s_closed = in_s.copy()  # S u N(S)
    for v in s_set:
        s_closed[g.neighbors(int(v))] = True

    nbrs = g.neighbors(r)
    diagnostics: dict = {"s_size": int(len(s_set)), "p_hat": float(p_hat), "q_fallback": 0}
    if in_s[r]:
        q = [int(x) for x in nbrs[:k]]
        diagnostics["root_in_s"] = True
    else:
        outside = nbrs[~s_closed[nbrs]]
        if len(outside) >= k:
            q = [int(x) for x in outside[:k]]
        else:
            q = [int(x) for x in outside]
            fill = [int(x) for x in nbrs if not int(x) in set(q)]
            q.extend(fill[: k - len(q)])
            diagnostics["q_fallback"] = k - len(outside)
            warnings.warn(
                f"root {r} has only {len(outside)} neighbors outside the low-degree "
                f"closure; {k - len(outside)} branch vertices fall back to arbitrary neighbors"
            )

    ell = path_length(n, p_hat, k, params)
    diagnostics["ell"] = ell
    if k * (ell + 1) > n:
        return BuildFailure(
            stage=STAGE_PATH_GROWTH,
            certificate=None,
            diagnostics={**diagnostics, "reason": f"k*(ell+1) = {k * (ell + 1)} exceeds n = {n}"},
        )
    forbidden = s_closed.copy()
    forbidden[r] = True
    forbidden[q] = False
    fb_ids = np.flatnonzero(forbidden)
    grown = grow_path_system(g, q, ell, fb_ids)
    if isinstance(grown, GrowthFailure):
        return BuildFailure(stage=STAGE_PATH_GROWTH, certificate=grown, diagnostics=diagnostics)
    validate_path_system(g, grown, q, fb_ids)

    trees = []
    for path in grown.paths:
        verts = np.concatenate([[r], path])
        parent = {int(path[0]): r}
        for a, b in zip(path, path[1:]):
            parent[int(b)] = int(a)
        trees.append(SmallTree(verts=verts, parent=parent, entry=int(path[0])))
    tc = TreeCollection(root=r, trees=trees)
    res = certify_nice(g, tc)
    if isinstance(res, NicenessFailure):
        return BuildFailure(
            stage=STAGE_NICENESS,
            certificate=res,
            diagnostics={**diagnostics, "vertex": res.vertex},
        )
    return tc, res
