"""Nice tree collections, their matching-based certification, assembly of
full independent spanning trees, and an independent verifier.

A collection of small trees sharing only their root r is "nice" when every
vertex v, for every tree i that neither contains v nor touches N(v), has
its own connector u_i outside all trees with a two-edge path v-u_i-w_i
into tree i, the u_i distinct for fixed v.  Such a collection extends to a
family of full ISTs by attaching leaves; the verifier checks the final
family from scratch (per-vertex root paths pairwise internally disjoint),
so construction bugs cannot silently pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IntegrityError
from .graph import Graph
from .matching import HallViolator, match_bitset_rows

ROOT_SENTINEL = -1


@dataclass
class SmallTree:
    """One member of a tree collection: vertex set (including the shared
    root), parent map for every non-root vertex, and the designated
    root-adjacent entry vertex where applicable."""

    verts: np.ndarray
    parent: dict[int, int]
    entry: int | None = None

    def __post_init__(self):
        self.verts = np.unique(np.asarray(self.verts, dtype=np.int64))


@dataclass
class TreeCollection:
    root: int
    trees: list[SmallTree]

    @property
    def k(self) -> int:
        return len(self.trees)

    def tree_of(self, n: int) -> np.ndarray:
        """Vertex -> tree index; -1 outside all trees, -2 for the root."""
        out = np.full(n, -1, dtype=np.int64)
        for i, t in enumerate(self.trees):
            out[t.verts] = i
        out[self.root] = -2
        return out

    def validate(self, g: Graph) -> None:
        """Raise IntegrityError unless all collection invariants hold."""
        r = self.root
        if not 0 <= r < g.n:
            raise IntegrityError("root out of range")
        seen = np.zeros(g.n, dtype=bool)
        for i, t in enumerate(self.trees):
            vs = t.verts
            if len(vs) and (vs[0] < 0 or vs[-1] >= g.n):
                raise IntegrityError(f"tree {i} has out-of-range vertices")
            if r not in set(int(x) for x in vs):
                raise IntegrityError(f"tree {i} does not contain the root")
            others = vs[vs != r]
            if seen[others].any():
                raise IntegrityError(f"tree {i} overlaps another tree outside the root")
            seen[others] = True
            vset = set(int(x) for x in vs)
            if set(t.parent.keys()) != vset - {r}:
                raise IntegrityError(f"tree {i}: parent map keys must be exactly the non-root vertices")
            for x, px in t.parent.items():
                if px not in vset:
                    raise IntegrityError(f"tree {i}: parent of {x} outside the tree")
                if not g.has_edge(x, px):
                    raise IntegrityError(f"tree {i}: parent edge ({x},{px}) not in the graph")
            # acyclicity/connectivity: every vertex reaches r through parents
            for x in t.parent:
                cur, steps = x, 0
                while cur != r:
                    cur = t.parent[cur]
                    steps += 1
                    if steps > len(vs):
                        raise IntegrityError(f"tree {i}: parent cycle at {x}")


@dataclass
class NicenessWitness:
    """For each vertex v with nonempty index set: the map i -> u_i of
    distinct connectors (one per uncovered tree)."""

    connectors: dict[int, dict[int, int]] = field(default_factory=dict)


@dataclass
class NicenessFailure:
    vertex: int
    index_set: tuple
    candidates: tuple
    violator: HallViolator


@dataclass
class SpanningTreeFamily:
    """k full spanning trees as parent arrays; parents[i][root] == -1."""

    root: int
    parents: np.ndarray  # shape (k, n), int32

    @property
    def k(self) -> int:
        return self.parents.shape[0]

    @property
    def n(self) -> int:
        return self.parents.shape[1]

    def to_json_dict(self) -> dict:
        return {"root": int(self.root), "parents": self.parents.tolist()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "SpanningTreeFamily":
        parents = np.asarray(d["parents"], dtype=np.int32)
        if parents.ndim == 1 and parents.size == 0:
            parents = parents.reshape(0, 0)
        return cls(int(d["root"]), parents)


@dataclass
class VerifyReport:
    ok: bool
    n_trees: int
    kind: str = ""  # "", "structure", "edge", "independence"
    detail: tuple = ()

    def __bool__(self) -> bool:  # pragma: no cover
        return self.ok


def index_set(g: Graph, tc: TreeCollection, v: int) -> frozenset:
    """Indices i with v neither in tree i nor adjacent to any of its
    vertices (the uncovered trees of v)."""
    out = []
    nb = set(int(x) for x in g.neighbors(v))
    for i, t in enumerate(tc.trees):
        vset = set(int(x) for x in t.verts)
        if v in vset:
            continue
        if nb & vset:
            continue
        out.append(i)
    return frozenset(out)


def _tree_adjacency_matrix(g: Graph, tc: TreeCollection) -> np.ndarray:
    """M[i, v] = v has at least one neighbor inside tree i's vertex set."""
    k, n = tc.k, g.n
    M = np.zeros((k, n), dtype=bool)
    for i, t in enumerate(tc.trees):
        if len(t.verts) == 0:
            continue
        nb = np.concatenate([g.neighbors(int(x)) for x in t.verts]) if len(t.verts) else np.empty(0, int)
        M[i, nb] = True
    return M


def certify_nice(g: Graph, tc: TreeCollection):
    """Certify the collection nice: per vertex, a matching of its
    uncovered trees into its non-tree neighbors that can see each tree.

    Vertices are processed in ascending id order and the first failure is
    returned with its Hall violator.  Returns a NicenessWitness on
    success.
    """
    tc.validate(g)
    k, n = tc.k, g.n
    if k == 0:
        return NicenessWitness({})
    M = _tree_adjacency_matrix(g, tc)
    tree_of = tc.tree_of(n)
    covered = M.copy()
    for i, t in enumerate(tc.trees):
        covered[i, t.verts] = True
    need = k - covered.sum(axis=0)
    todo = np.flatnonzero(need > 0)
    connectors: dict[int, dict[int, int]] = {}
    for v in todo:
        v = int(v)
        rows_idx = np.flatnonzero(~covered[:, v])
        nbrs = g.neighbors(v)
        cand = nbrs[tree_of[nbrs] == -1]
        if len(cand):
            sub = M[np.ix_(rows_idx, cand)]
            rows = _pack_rows(sub)
            degs = sub.sum(axis=1)
        else:
            rows = [0] * len(rows_idx)
            degs = np.zeros(len(rows_idx), dtype=np.int64)
        assign, viol = match_bitset_rows(rows, len(cand), degs)
        if assign is None:
            nb_mask = 0
            for j in viol:
                nb_mask |= rows[j]
            nb_cols = [int(cand[c]) for c in _bits(nb_mask)]
            violator = HallViolator(
                "left",
                tuple(int(rows_idx[j]) for j in viol),
                tuple(nb_cols),
            )
            return NicenessFailure(
                vertex=v,
                index_set=tuple(int(i) for i in rows_idx),
                candidates=tuple(int(u) for u in cand),
                violator=violator,
            )
        connectors[v] = {int(rows_idx[j]): int(cand[assign[j]]) for j in range(len(rows_idx))}
    return NicenessWitness(connectors)


def _bits(mask: int):
    while mask:
        b = (mask & -mask).bit_length() - 1
        yield b
        mask &= mask - 1


def _pack_rows(sub: np.ndarray) -> list[int]:
    """Rows of a boolean matrix as little-endian bitmask ints."""
    packed = np.packbits(sub, axis=1, bitorder="little")
    rb = packed.shape[1]
    blob = packed.tobytes()
    return [int.from_bytes(blob[j * rb:(j + 1) * rb], "little") for j in range(sub.shape[0])]


def check_witness(g: Graph, tc: TreeCollection, w: NicenessWitness) -> None:
    """Independent witness re-check; raises IntegrityError on any defect.

    Confirms per vertex: the map covers exactly the uncovered trees, the
    u_i are distinct, lie outside all trees, are adjacent to v, and each
    has a neighbor inside its target tree.
    """
    if tc.k == 0:
        if w.connectors:
            raise IntegrityError("witness must be empty for an empty collection")
        return
    tree_of = tc.tree_of(g.n)
    m = _tree_adjacency_matrix(g, tc)
    covered = m.copy()
    for i, t in enumerate(tc.trees):
        covered[i, t.verts] = True
    need = tc.k - covered.sum(axis=0)
    expected = set(int(v) for v in np.flatnonzero(need > 0))
    if expected != set(w.connectors.keys()):
        raise IntegrityError("witness vertex set differs from the uncovered-vertex set")
    for v, imap in w.connectors.items():
        rows = np.flatnonzero(~covered[:, v])
        items = sorted(imap.items())
        keys = np.array([i for i, _ in items], dtype=np.int64)
        us = np.array([u for _, u in items], dtype=np.int64)
        if not np.array_equal(keys, rows):
            raise IntegrityError(f"witness index set wrong at vertex {v}")
        if len(np.unique(us)) != len(us):
            raise IntegrityError(f"witness connectors not distinct at vertex {v}")
        if (tree_of[us] != -1).any():
            raise IntegrityError(f"a connector of vertex {v} lies inside a tree")
        if len(us) and not g.has_edges(np.full(len(us), v), us).all():
            raise IntegrityError(f"a connector of vertex {v} is not adjacent to it")
        if len(us) and not m[keys, us].all():
            raise IntegrityError(f"a connector of vertex {v} has no neighbor in its tree")


def assemble(g: Graph, tc: TreeCollection, w: NicenessWitness) -> SpanningTreeFamily:
    """Extend a certified nice collection to full spanning trees.

    Phase 1 attaches every vertex adjacent to tree i as a leaf under its
    smallest-id neighbor inside the tree; phase 2 attaches each remaining
    vertex v as a leaf under its connector u_i (already placed in phase 1).
    """
    tc.validate(g)
    check_witness(g, tc, w)
    k, n = tc.k, g.n
    r = tc.root
    parents = np.full((k, n), ROOT_SENTINEL, dtype=np.int32)
    for i, t in enumerate(tc.trees):
        for x, px in t.parent.items():
            parents[i, x] = px
        vs = t.verts
        in_tree = np.zeros(n, dtype=bool)
        in_tree[vs] = True
        order = np.sort(vs)
        if len(order):
            nb_concat = np.concatenate([g.neighbors(int(x)) for x in order])
            owners = np.repeat(order, [g.degree(int(x)) for x in order])
            uniq, first = np.unique(nb_concat, return_index=True)
            outside = ~in_tree[uniq]
            for u, idx in zip(uniq[outside], first[outside]):
                parents[i, u] = owners[idx]
    if w.connectors:
        total = sum(len(imap) for imap in w.connectors.values())
        vv = np.empty(total, dtype=np.int64)
        ii = np.empty(total, dtype=np.int64)
        uu = np.empty(total, dtype=np.int64)
        pos = 0
        for v, imap in w.connectors.items():
            for i, u in imap.items():
                vv[pos], ii[pos], uu[pos] = v, i, u
                pos += 1
        parents[ii, vv] = uu
    if k:
        hole = (parents == ROOT_SENTINEL)
        hole[:, r] = False
        if hole.any():
            i, v = np.argwhere(hole)[0]
            raise IntegrityError(f"vertex {v} unreachable in tree {i}: witness does not cover it")
    return SpanningTreeFamily(r, parents)


# ---------------------------------------------------------------------------
# verification


def _depths_from_parents(par: np.ndarray, root: int, n: int) -> np.ndarray:
    """Depth of every vertex in the parent forest, -1 where the root is
    unreachable (cycle or stray)."""
    f = par.astype(np.int64).copy()
    f[root] = root
    order = np.argsort(f, kind="stable")
    fs = f[order]
    depth = np.full(n, -1, dtype=np.int64)
    depth[root] = 0
    frontier = np.array([root], dtype=np.int64)
    d = 0
    while frontier.size:
        d += 1
        lo = np.searchsorted(fs, frontier, side="left")
        hi = np.searchsorted(fs, frontier, side="right")
        parts = [order[a:b] for a, b in zip(lo.tolist(), hi.tolist())]
        kids = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
        kids = kids[kids != root]
        if not kids.size:
            break
        depth[kids] = d
        frontier = kids
    return depth


def _tree_structure_ok(g: Graph, root: int, par: np.ndarray):
    """(ok, reason, depths) for one parent array: sentinel only at the
    root, parent ids in range, parent edges in the graph, every vertex
    reaches the root (no cycles)."""
    n = g.n
    if par[root] != ROOT_SENTINEL:
        return False, ("structure", ("root parent must be -1",)), None
    others = np.flatnonzero(np.arange(n) != root)
    if n > 1:
        vals = par[others]
        if (vals < 0).any() or (vals >= n).any():
            return False, ("structure", ("parent id out of range",)), None
        present = g.has_edges(others, vals)
        if not present.all():
            bad = int(others[~present][0])
            return False, ("edge", (bad, int(par[bad]))), None
    depth = _depths_from_parents(par, root, n)
    if (depth < 0).any():
        bad = int(np.flatnonzero(depth < 0)[0])
        return False, ("structure", (f"vertex {bad} does not reach the root",)), None
    return True, None, depth


def _internal_path_block(par: np.ndarray, root: int, vs: np.ndarray, max_cols: int, pad_base: int):
    """Matrix whose row for v lists the strict internal ancestors of v in
    this tree (root and exhausted slots padded with unique fillers)."""
    f = par.astype(np.int64).copy()
    f[root] = root
    cols = []
    cur = f[vs]
    for t in range(max_cols):
        live = cur != root
        if not live.any():
            break
        cols.append(np.where(live, cur, pad_base + t))
        cur = f[cur]
    if not cols:
        return None
    return np.stack(cols, axis=1)


def verify_independent(g: Graph, fam: SpanningTreeFamily) -> VerifyReport:
    """Full independence check of a spanning-tree family.

    Validates every parent array as a spanning tree of g, then checks for
    every vertex v that the k root-v paths share no vertex outside
    {root, v}; equivalently, no vertex appears as a strict internal
    ancestor of v in two different trees.  Vectorized multiset scan with a
    python re-walk to localize the first counterexample.
    """
    k, n = fam.k, fam.n
    if n != g.n:
        return VerifyReport(False, k, "structure", ("family size differs from graph",))
    root = fam.root
    depths = []
    for i in range(k):
        ok, fail, depth = _tree_structure_ok(g, root, fam.parents[i])
        if not ok:
            kind, det = fail
            return VerifyReport(False, k, kind, (i,) + det)
        depths.append(int(depth.max()))
    if k <= 1 or n <= 2:
        return VerifyReport(True, k)
    total_cols = sum(max(d - 1, 0) for d in depths)
    if total_cols == 0:
        return VerifyReport(True, k)
    chunk = max(1, min(n, int(8e6 // max(total_cols, 1))))
    for lo in range(0, n, chunk):
        vs = np.arange(lo, min(lo + chunk, n))
        blocks = []
        pad_base = n + 1
        for i in range(k):
            blk = _internal_path_block(fam.parents[i], root, vs, max(depths[i] - 1, 0), pad_base)
            if blk is not None:
                blocks.append(blk)
                pad_base += blk.shape[1] + 1
        if not blocks:
            continue
        mat = np.concatenate(blocks, axis=1)
        mat.sort(axis=1)
        dup = (mat[:, 1:] == mat[:, :-1]).any(axis=1)
        if dup.any():
            v = int(vs[np.flatnonzero(dup)[0]])
            return VerifyReport(False, k, "independence", _localize_collision(fam, v))
    return VerifyReport(True, k)


def _localize_collision(fam: SpanningTreeFamily, v: int) -> tuple:
    """(v, i, j, x): first pair of trees whose root-v paths share internal x."""
    root = fam.root
    owner: dict[int, int] = {}
    for i in range(fam.k):
        par = fam.parents[i]
        x = int(par[v]) if v != root else root
        while x != root and x != ROOT_SENTINEL:
            if x != v:
                if x in owner and owner[x] != i:
                    return (v, owner[x], i, x)
                owner.setdefault(x, i)
            x = int(par[x])
    return (v, -1, -1, -1)  # pragma: no cover - caller guarantees a collision


def verify_independent_marksweep(g: Graph, fam: SpanningTreeFamily) -> VerifyReport:
    """Second, set-free implementation: stamp arrays along each root path.

    Walks every (vertex, tree) path marking internal vertices with the
    current vertex's stamp and the owning tree; a re-mark by a different
    tree is a violation.  Used to cross-check verify_independent.
    """
    k, n = fam.k, fam.n
    if n != g.n:
        return VerifyReport(False, k, "structure", ("family size differs from graph",))
    root = fam.root
    for i in range(k):
        ok, fail, _ = _tree_structure_ok(g, root, fam.parents[i])
        if not ok:
            kind, det = fail
            return VerifyReport(False, k, kind, (i,) + det)
    stamp = [-1] * n
    owner = [-1] * n
    pars = [fam.parents[i].tolist() for i in range(k)]
    for v in range(n):
        if v == root:
            continue
        for i in range(k):
            par = pars[i]
            x = par[v]
            while x != root:
                if x != v:
                    if stamp[x] == v and owner[x] != i:
                        return VerifyReport(False, k, "independence", (v, owner[x], i, x))
                    stamp[x] = v
                    owner[x] = i
                x = par[x]
    return VerifyReport(True, k)


def root_path(fam: SpanningTreeFamily, i: int, v: int) -> list[int]:
    """The v -> root vertex sequence in tree i (inclusive of endpoints)."""
    par = fam.parents[i]
    out = [v]
    x = v
    while x != fam.root:
        x = int(par[x])
        out.append(x)
    return out
