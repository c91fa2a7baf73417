"""Dense-regime IST builder: depth-1 trees over the root's first k
neighbors, certified nice through per-vertex matchings.

Each tree is a single edge {r, v_i} with v_i among the first k neighbors
of r in ascending id order.  The construction succeeds exactly when the
generic niceness certification finds, for every vertex, distinct
connectors into all trees it does not touch.  Success is deterministic in
(graph, root, k).
"""

from __future__ import annotations

import numpy as np

from .builders import STAGE_NICENESS, BuildFailure
from .errors import ParameterError
from .graph import Graph
from .ist import NicenessFailure, SmallTree, TreeCollection, certify_nice


def dense_tree_collection(g: Graph, r: int, k: int) -> TreeCollection:
    """The k two-vertex trees {r, v_i} over r's first k neighbors."""
    if not 0 <= r < g.n:
        raise ParameterError("root out of range")
    if k < 1 or k > g.degree(r):
        raise ParameterError(f"need 1 <= k <= deg(root) = {g.degree(r)}")
    branch = g.neighbors(r)[:k]
    trees = [
        SmallTree(verts=np.array([r, int(v)]), parent={int(v): r}, entry=int(v))
        for v in branch
    ]
    return TreeCollection(root=r, trees=trees)


def _smaller_side_diagnostics(g: Graph, r: int, branch: np.ndarray) -> list[int]:
    """Vertices where |K \\ N(v)| > |N(v) \\ K|, i.e. where the classical
    dense-regime matching would have to cover the larger side.  Purely
    diagnostic; the generic certification may still succeed there."""
    kset = set(int(x) for x in branch)
    out = []
    for v in range(g.n):
        if v == r or v in kset:
            continue
        nb = set(int(x) for x in g.neighbors(v))
        if r in nb:
            continue
        k_minus_n = len(kset - nb)
        n_minus_k = len(nb - kset - {r})
        if k_minus_n > n_minus_k:
            out.append(v)
    return out


def build_dense(g: Graph, r: int, k: int, collect_diagnostics: bool = False):
    """Build and certify the dense-regime collection.

    Returns (TreeCollection, NicenessWitness) on success, else a
    BuildFailure at stage "niceness" naming the violating vertex and its
    Hall certificate.  ``collect_diagnostics`` additionally surveys the
    per-vertex side-cardinality inequality of the classical argument.
    """
    tc = dense_tree_collection(g, r, k)
    res = certify_nice(g, tc)
    if isinstance(res, NicenessFailure):
        diag = {"vertex": res.vertex, "index_set_size": len(res.index_set)}
        if collect_diagnostics:
            diag["larger_side_vertices"] = _smaller_side_diagnostics(g, r, g.neighbors(r)[:k])
        return BuildFailure(stage=STAGE_NICENESS, certificate=res, diagnostics=diag)
    return tc, res
