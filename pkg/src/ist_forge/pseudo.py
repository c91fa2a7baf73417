"""Spectral-expander IST pipeline: spectral gap measurement, the
randomized vertex partition with local-lemma-style resampling, and the
reservoir connection that threads each class into a path.

The partition assigns every non-root, non-branch vertex to one of k small
classes S_i, a reservoir R, or the unassigned pool U, then checks three
per-run invariants (class size caps, reservoir degree, and a per-vertex
matching that picks distinct U-connectors seeing each class).  Violated
checks trigger resampling of the offending vertex's radius-2 ball or of
the oversized class, up to a budget.  Connection grows BFS trees through
unused reservoir vertices from the two ends of a linear forest, splices
at the first crossing edge, and releases everything off the spliced path.

The class probabilities of the source analysis scale like eps^11/(d log d)
and underflow to empty classes at any size this library can run; defaults
are therefore solved at call time from (n, d, k) so the same invariants
are satisfiable at desk scale, and every constant stays overridable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .builders import STAGE_CONNECTION, STAGE_PARTITION, BuildFailure
from .errors import IntegrityError, ParameterError
from .graph import Graph
from .ist import SmallTree, TreeCollection, NicenessWitness, _pack_rows, _tree_adjacency_matrix
from .matching import match_bitset_rows
from .rng import Rng

U_CLASS = -1
R_CLASS = -2
EXCLUDED = -3


@dataclass(frozen=True)
class SpectralProfile:
    n: int
    d: float
    lam: float
    ratio: float
    regular: bool
    method: str  # "dense" or "power"


def _matvec(g: Graph, x: np.ndarray) -> np.ndarray:
    """Adjacency matvec via reduceat; safe for isolated vertices."""
    if g.m == 0:
        return np.zeros(g.n)
    starts = np.minimum(g.indptr[:-1], len(g.indices) - 1)
    y = np.add.reduceat(x[g.indices], starts)
    y[np.diff(g.indptr) == 0] = 0.0
    return y


def spectral_profile(g: Graph, dense_cutoff: int = 4000, tol: float = 1e-6, max_iter: int = 50000) -> SpectralProfile:
    """lambda = max(|lambda_2|, |lambda_n|) of the adjacency spectrum.

    Full symmetric eigensolve up to ``dense_cutoff`` vertices; beyond
    that, power iteration on the complement of the all-ones direction
    (exact for regular graphs; non-regular inputs fall back to deflation
    by the computed principal vector, with a warning).
    """
    if g.n == 0:
        raise ParameterError("spectral profile of the empty graph")
    degs = g.degrees()
    regular = bool((degs == degs[0]).all()) if g.n else True
    d_avg = 2 * g.m / g.n if g.n else 0.0
    d_val = float(degs[0]) if regular else d_avg
    if g.n == 1:
        return SpectralProfile(1, d_val, 0.0, math.inf, True, "dense")
    if g.n <= dense_cutoff:
        a = np.zeros((g.n, g.n))
        rows = np.repeat(np.arange(g.n), np.diff(g.indptr))
        a[rows, g.indices] = 1.0
        w = np.linalg.eigvalsh(a)
        lam = float(max(abs(w[0]), abs(w[-2])))
        method = "dense"
    else:
        if not regular:
            warnings.warn("power-iteration spectral profile on a non-regular graph; "
                          "deflating by the computed principal vector")
            v1 = np.cos(1.7 * np.arange(g.n) + 0.3) + degs / max(degs.max(), 1)
            v1 /= np.linalg.norm(v1)
            lam1 = 0.0
            for _ in range(max_iter):
                y = _matvec(g, v1)
                nrm = np.linalg.norm(y)
                if nrm == 0:
                    break
                y /= nrm
                new = float(y @ _matvec(g, y))
                if abs(new - lam1) <= tol * max(abs(new), 1.0):
                    v1 = y
                    lam1 = new
                    break
                v1, lam1 = y, new
        else:
            v1 = np.full(g.n, 1.0 / math.sqrt(g.n))
            lam1 = float(degs[0])
        # iterate the squared operator so lambda_2 and -lambda_n cannot
        # cancel; the Rayleigh quotient of A^2 estimates lambda^2
        x = np.cos(0.9 * np.arange(g.n) + 1.1)
        x -= (v1 @ x) * v1
        nrm = np.linalg.norm(x)
        x = x / nrm if nrm else x
        lam = 0.0
        settled = 0
        for _ in range(max_iter):
            y = _matvec(g, x)
            y -= (v1 @ y) * v1
            z = _matvec(g, y)
            z -= (v1 @ z) * v1
            q2 = float(x @ z)
            new = math.sqrt(max(q2, 0.0))
            nrm = np.linalg.norm(z)
            if nrm == 0:
                lam = new
                break
            x = z / nrm
            settled = settled + 1 if abs(new - lam) <= tol * max(new, 1.0) else 0
            lam = new
            if settled >= 3:
                break
        method = "power"
    ratio = d_val / lam if lam > 0 else math.inf
    return SpectralProfile(g.n, d_val, lam, ratio, regular, method)


@dataclass
class AuditReport:
    trials: int
    violations: int
    max_excess: float  # max over trials of |deviation| - bound (<= 0 when clean)
    worst: tuple = ()


def mixing_audit(g: Graph, lam: float, trials: int, rng: Rng) -> AuditReport:
    """Sample vertex-set pairs (overlap allowed) and test the mixing bound
    |e(A,B) - |A||B|d/n| <= lam * sqrt(|A||B|) on ordered-pair counts."""
    degs = g.degrees()
    if g.n == 0 or not (degs == degs[0]).all():
        raise ParameterError("mixing audit requires a regular nonempty graph")
    d = int(degs[0])
    n = g.n
    violations = 0
    max_excess = -math.inf
    worst: tuple = ()
    for t in range(trials):
        ka = int(rng.gen.integers(1, n + 1))
        kb = int(rng.gen.integers(1, n + 1))
        a_ids = rng.gen.choice(n, size=ka, replace=False)
        b_ids = rng.gen.choice(n, size=kb, replace=False)
        bmask = np.zeros(n, dtype=bool)
        bmask[b_ids] = True
        cnt = _matvec(g, bmask.astype(np.float64))
        e_ab = float(cnt[a_ids].sum())
        dev = abs(e_ab - ka * kb * d / n)
        bound = lam * math.sqrt(ka * kb)
        excess = dev - bound
        if excess > max_excess:
            max_excess = excess
            worst = (t, ka, kb, e_ab, dev, bound)
        if excess > 1e-9 * max(bound, 1.0):
            violations += 1
    return AuditReport(trials, violations, max_excess, worst)


@dataclass
class PseudoParams:
    """Knobs of the partition + connection pipeline.

    ``None`` fields are resolved from (n, d, k) at call time; see
    ``resolve``.  ``eps`` is the user-facing epsilon: the default branch
    count is k = ceil((1-eps) d).
    """

    eps: float = 0.1
    k_override: int | None = None
    s_class_prob: float | None = None
    reservoir_prob: float | None = None
    size_cap: int | None = None
    r_min: int | None = None
    max_resample_rounds: int | None = None
    infeasibility_bail_fraction: float = 0.05
    stall_window: int = 50
    connector_budget: int | None = None
    splice_retries: int = 2
    enforce_bv_filter: bool = False

    def resolve(self, n: int, d: float, k: int) -> "ResolvedPseudo":
        if not 0 < self.eps < 1:
            raise ParameterError("eps must be in (0, 1)")
        d = max(float(d), 1.0)
        if self.s_class_prob is not None and self.reservoir_prob is not None:
            p_s, p_r = self.s_class_prob, self.reservoir_prob
        else:
            # every vertex needs ~k unassigned neighbors with 4-sigma slack,
            # the rest splits 70/30 between reservoir and class mass
            p_u = (k + 2 + 4 * math.sqrt(d * 0.25)) / d
            p_u = min(0.92, max(0.45, p_u))
            rem = max(1.0 - p_u, 0.05)
            p_r = 0.7 * rem if self.reservoir_prob is None else self.reservoir_prob
            p_s = (max(1.0 - p_u - p_r, 0.01)) / max(k, 1) if self.s_class_prob is None else self.s_class_prob
        if k * p_s + p_r > 1.0 + 1e-12:
            raise ParameterError("class probabilities sum above 1")
        exp_s = n * p_s
        cap = self.size_cap if self.size_cap is not None else int(math.ceil(exp_s + 4 * math.sqrt(exp_s) + 4))
        r_min = self.r_min if self.r_min is not None else max(1, int((self.eps / 10) ** 3 * d))
        rounds = self.max_resample_rounds if self.max_resample_rounds is not None else 50 * n
        s_budget = self.connector_budget  # per-splice cap resolved at use
        return ResolvedPseudo(
            k=k, p_s=p_s, p_r=p_r, size_cap=cap, r_min=r_min,
            max_rounds=rounds, bail_fraction=self.infeasibility_bail_fraction,
            stall_window=self.stall_window, connector_budget=s_budget,
            splice_retries=self.splice_retries, eps=self.eps,
            enforce_bv_filter=self.enforce_bv_filter,
        )


@dataclass(frozen=True)
class ResolvedPseudo:
    k: int
    p_s: float
    p_r: float
    size_cap: int
    r_min: int
    max_rounds: int
    bail_fraction: float
    stall_window: int
    connector_budget: int | None
    splice_retries: int
    eps: float
    enforce_bv_filter: bool


@dataclass
class Partition:
    """Outcome of the randomized partition.

    ``assign[v]`` is the class of v: 0..k-1 for the S_i, -1 for U, -2 for
    the reservoir R, -3 for the excluded vertices (root and branch).
    ``connectors`` holds, per checked vertex, the injective map from its
    uncovered branch indices to U-neighbors seeing that class.
    """

    root: int
    branch: np.ndarray
    assign: np.ndarray
    connectors: dict = field(default_factory=dict)
    resolved: ResolvedPseudo | None = None

    def class_members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.assign == i)

    @property
    def k(self) -> int:
        return len(self.branch)


@dataclass
class PartitionFailure:
    reason: str
    bad_events: tuple = ()
    diagnostics: dict = field(default_factory=dict)


@dataclass
class ConnectFailure:
    set_index: int
    components_left: int
    diagnostics: dict = field(default_factory=dict)


class _PartitionState:
    """Mutable evaluation state shared by sampling and resampling."""

    def __init__(self, g: Graph, r: int, branch: np.ndarray, res: ResolvedPseudo, rng: Rng):
        self.g = g
        self.r = r
        self.branch = branch
        self.res = res
        self.rng = rng
        n = g.n
        k = res.k
        self.eligible = np.ones(n, dtype=bool)
        self.eligible[r] = False
        self.eligible[branch] = False
        # branch adjacency bitmasks: bit i set iff v is adjacent to branch[i]
        self.branch_bits = [0] * n
        for i, vi in enumerate(branch):
            for u in g.neighbors(int(vi)):
                self.branch_bits[int(u)] |= 1 << i
        self.full_mask = (1 << k) - 1
        self.assign = np.full(n, EXCLUDED, dtype=np.int64)
        self.sadj = np.zeros((n, k), dtype=bool)  # v sees class i
        nb_r = set(int(x) for x in g.neighbors(r))
        self.checked = [v for v in range(n) if v != r and v not in nb_r]
        self.draw_all()

    def draw_all(self) -> None:
        ids = np.flatnonzero(self.eligible)
        self.assign[self.eligible] = self._draw(len(ids))
        self.rebuild_sadj()

    def _draw(self, count: int) -> np.ndarray:
        res = self.res
        u = self.rng.gen.random(count)
        out = np.full(count, U_CLASS, dtype=np.int64)
        t1 = res.k * res.p_s
        in_s = u < t1
        out[in_s] = np.minimum((u[in_s] / res.p_s).astype(np.int64), res.k - 1)
        in_r = (~in_s) & (u < t1 + res.p_r)
        out[in_r] = R_CLASS
        return out

    def rebuild_sadj(self) -> None:
        g, n, k = self.g, self.g.n, self.res.k
        self.sadj = np.zeros((n, k), dtype=bool)
        for i in range(k):
            members = np.flatnonzero(self.assign == i)
            if len(members):
                nb = np.concatenate([g.neighbors(int(x)) for x in members])
                self.sadj[nb, i] = True

    def resample(self, verts: np.ndarray) -> None:
        verts = verts[self.eligible[verts]]
        if not len(verts):
            return
        self.assign[verts] = self._draw(len(verts))
        self.rebuild_sadj()

    def ball2(self, v: int) -> np.ndarray:
        g = self.g
        one = g.neighbors(v)
        parts = [np.array([v]), one]
        for u in one:
            parts.append(g.neighbors(int(u)))
        return np.unique(np.concatenate(parts))

    def class_sizes(self) -> np.ndarray:
        k = self.res.k
        sizes = np.bincount(self.assign[self.assign >= 0], minlength=k)
        return sizes[:k]

    def eval_vertex(self, v: int):
        """(ok, connectors_or_None). Checks reservoir degree and the
        connector matching for vertex v."""
        g, res = self.g, self.res
        nbrs = g.neighbors(v)
        cls = self.assign[nbrs]
        if int((cls == R_CLASS).sum()) < res.r_min:
            return False, None
        iv_mask = self.full_mask & ~self.branch_bits[v]
        if iv_mask == 0:
            return True, {}
        cand = nbrs[cls == U_CLASS]
        if res.enforce_bv_filter and len(cand):
            cand = self._bv_filter(v, cand)
        rows_idx = [i for i in _bits_of(iv_mask)]
        if len(cand) < len(rows_idx):
            return False, None
        sub = self.sadj[cand][:, rows_idx].T
        rows = _pack_rows(sub)
        assign, viol = match_bitset_rows(rows, len(cand), sub.sum(axis=1))
        if assign is None:
            return False, None
        return True, {rows_idx[j]: int(cand[assign[j]]) for j in range(len(rows_idx))}

    def _bv_filter(self, v: int, cand: np.ndarray) -> np.ndarray:
        """Optional fidelity filter: keep candidates with at least eps*d
        neighbors outside N(v) u L u {r}."""
        g, res = self.g, self.res
        w = set(int(x) for x in g.neighbors(v)) | set(int(x) for x in self.branch) | {self.r, v}
        thr = res.eps * (2 * g.m / g.n)
        keep = [u for u in cand if sum(1 for x in g.neighbors(int(u)) if int(x) not in w) >= thr]
        return np.array(keep, dtype=cand.dtype)


def _bits_of(mask: int):
    while mask:
        b = (mask & -mask).bit_length() - 1
        yield b
        mask &= mask - 1


def sample_partition(g: Graph, r: int, L, params: PseudoParams | None = None, rng: Rng | None = None):
    """Randomly partition V - ({r} u L), then repair by resampling until
    the three partition invariants hold (or the budget is spent).

    Vertices adjacent to the root are exempt from the connector check:
    the assembled trees all contain r, so those vertices never need
    connectors downstream.  Returns Partition or PartitionFailure.
    """
    params = params or PseudoParams()
    rng = rng or Rng()
    branch = np.asarray([int(x) for x in L], dtype=np.int64)
    if len(set(branch.tolist())) != len(branch):
        raise ParameterError("branch vertices must be distinct")
    nb_r = set(int(x) for x in g.neighbors(r))
    if any(int(v) not in nb_r for v in branch):
        raise ParameterError("branch vertices must be neighbors of the root")
    d_est = float(np.mean(g.degrees())) if g.n else 0.0
    res = params.resolve(g.n, d_est, len(branch))
    state = _PartitionState(g, r, branch, res, rng)

    def violated_events() -> list:
        bad = []
        sizes = state.class_sizes()
        for i in np.flatnonzero(sizes > res.size_cap):
            bad.append(("size", int(i)))
        for v in state.checked:
            ok, _ = state.eval_vertex(v)
            if not ok:
                bad.append(("vertex", v))
        return bad

    bad = violated_events()
    n_checked = max(len(state.checked), 1)
    if len(bad) > max(25.0, res.bail_fraction * n_checked):
        return PartitionFailure(
            reason="parameters infeasible: too many violated events on the first pass",
            bad_events=tuple(bad[:20]),
            diagnostics={"violated": len(bad), "checked": n_checked,
                         "p_s": res.p_s, "p_r": res.p_r, "size_cap": res.size_cap},
        )
    rounds = 0
    best = len(bad)
    since_best = 0
    while bad:
        if rounds >= res.max_rounds or since_best > res.stall_window:
            return PartitionFailure(
                reason="resampling budget exhausted",
                bad_events=tuple(bad[:20]),
                diagnostics={"rounds": rounds, "violated": len(bad)},
            )
        kind, ident = bad[0]
        if kind == "size":
            state.resample(np.flatnonzero(state.assign == ident))
        else:
            state.resample(state.ball2(ident))
        rounds += 1
        bad = violated_events()
        if len(bad) < best:
            best = len(bad)
            since_best = 0
        else:
            since_best += 1
    connectors: dict[int, dict[int, int]] = {}
    for v in state.checked:
        ok, conn = state.eval_vertex(v)
        if not ok:  # pragma: no cover - loop exits only with zero violations
            return PartitionFailure(reason="post-loop evaluation regressed", bad_events=(("vertex", v),))
        if conn:
            connectors[v] = conn
    return Partition(root=r, branch=branch, assign=state.assign, connectors=connectors, resolved=res)


def validate_partition(g: Graph, part: Partition) -> None:
    """Independent certificate check of a Partition; raises IntegrityError.

    Verifies the class structure (exclusions, disjointness by encoding),
    size caps, reservoir degrees, and that the stored connector maps are
    genuine: distinct U-neighbors of v, each seeing its class.
    """
    res = part.resolved
    if res is None:
        raise IntegrityError("partition carries no resolved parameters")
    n = g.n
    if part.assign.shape != (n,):
        raise IntegrityError("assignment length mismatch")
    excl = np.flatnonzero(part.assign == EXCLUDED)
    expected = np.unique(np.concatenate([[part.root], part.branch]))
    if not np.array_equal(np.sort(excl), expected):
        raise IntegrityError("excluded set must be exactly {root} u branch")
    if part.assign.max(initial=-3) >= res.k:
        raise IntegrityError("class index out of range")
    sizes = np.bincount(part.assign[part.assign >= 0], minlength=res.k)
    if (sizes > res.size_cap).any():
        raise IntegrityError("a class exceeds its size cap")
    nb_r = set(int(x) for x in g.neighbors(part.root))
    for v in range(n):
        if v == part.root or v in nb_r:
            continue
        nbrs = g.neighbors(v)
        if int((part.assign[nbrs] == R_CLASS).sum()) < res.r_min:
            raise IntegrityError(f"vertex {v} has too few reservoir neighbors")
        iv = [i for i in range(res.k) if not g.has_edge(v, int(part.branch[i]))]
        conn = part.connectors.get(v, {})
        if set(conn.keys()) != set(iv):
            raise IntegrityError(f"connector keys wrong at vertex {v}")
        us = list(conn.values())
        if len(set(us)) != len(us):
            raise IntegrityError(f"connectors not distinct at vertex {v}")
        nbset = set(int(x) for x in nbrs)
        for i, u in conn.items():
            if u not in nbset or part.assign[u] != U_CLASS:
                raise IntegrityError(f"connector {u} of {v} is not an unassigned neighbor")
            members = set(int(x) for x in part.class_members(i))
            if not members & set(int(x) for x in g.neighbors(u)):
                raise IntegrityError(f"connector {u} of {v} does not see class {i}")


def connect_through_reservoir(g: Graph, part: Partition, params: PseudoParams | None = None):
    """Thread every class S_i and its branch vertex v_i into one path whose
    internal vertices come from the unused reservoir.

    Per class: keep a linear forest (initially all singletons), repeatedly
    grow BFS trees from the endpoints of its first two components through
    unused reservoir vertices, splice at the first crossing edge, release
    all grown vertices off the spliced path, and iterate.  Budgets follow
    s/(3c) with two doubling retries.
    """
    params = params or PseudoParams()
    res = part.resolved or params.resolve(g.n, float(np.mean(g.degrees())), part.k)
    n = g.n
    available = part.assign == R_CLASS
    base_budget = res.connector_budget
    s_total = max(32, int(round(res.eps * n / 4)))
    paths: list[np.ndarray] = []
    mark = np.zeros(n, dtype=np.int64)  # attempt stamps: side marker
    parent = np.full(n, -1, dtype=np.int64)
    stamp = 0

    for i in range(part.k):
        vi = int(part.branch[i])
        comps: list[list[int]] = [[int(x)] for x in part.class_members(i)]
        comps.append([vi])
        comps.sort(key=lambda c: min(c))
        while len(comps) > 1:
            comps.sort(key=lambda c: min(c))
            c0, c1 = comps[0], comps[1]
            budget = base_budget if base_budget is not None else max(4, math.ceil(s_total / (3 * len(comps))))
            spliced = None
            for attempt in range(res.splice_retries + 1):
                cap = budget * (2 ** attempt)
                stamp += 2
                a_stamp, b_stamp = stamp, stamp + 1
                # grow side A from both endpoints of c0
                a_frontier = []
                a_ends = [c0[0]] if c0[0] == c0[-1] else [c0[0], c0[-1]]
                for e in a_ends:
                    mark[e] = a_stamp
                    parent[e] = -1
                    a_frontier.append(e)
                grown_a = 0
                qa = list(a_frontier)
                qi = 0
                while qi < len(qa) and grown_a < cap:
                    x = qa[qi]
                    qi += 1
                    for u in g.neighbors(x):
                        u = int(u)
                        if available[u] and mark[u] < a_stamp:
                            mark[u] = a_stamp
                            parent[u] = x
                            qa.append(u)
                            grown_a += 1
                            if grown_a >= cap:
                                break
                # grow side B, checking for crossing edges as we go
                cross = None
                qb = []
                b_ends = [c1[0]] if c1[0] == c1[-1] else [c1[0], c1[-1]]
                for e in b_ends:
                    mark[e] = b_stamp
                    parent[e] = -1
                    qb.append(e)
                    for u in g.neighbors(e):
                        u = int(u)
                        if mark[u] == a_stamp:
                            cross = (u, e)
                            break
                    if cross:
                        break
                grown_b = 0
                qi = 0
                while qi < len(qb) and not cross and grown_b < cap:
                    x = qb[qi]
                    qi += 1
                    for u in g.neighbors(x):
                        u = int(u)
                        if cross:
                            break
                        if available[u] and mark[u] < a_stamp:
                            mark[u] = b_stamp
                            parent[u] = x
                            qb.append(u)
                            grown_b += 1
                            for w in g.neighbors(u):
                                w = int(w)
                                if mark[w] == a_stamp:
                                    cross = (w, u)
                                    break
                            if grown_b >= cap:
                                break
                if cross:
                    ax, bx = cross
                    chain_a = _walk_to_root(parent, ax)   # ax ... a_endpoint
                    chain_b = _walk_to_root(parent, bx)   # bx ... b_endpoint
                    a_end, b_end = chain_a[-1], chain_b[-1]
                    bridge = chain_a[::-1] + chain_b  # a_end ... ax bx ... b_end
                    internals = [x for x in bridge if x not in (a_end, b_end)]
                    left = c0 if c0[-1] == a_end else c0[::-1]
                    right = c1 if c1[0] == b_end else c1[::-1]
                    merged = left + internals + right
                    for x in internals:
                        available[x] = False
                    spliced = merged
                    break
            if spliced is None:
                return ConnectFailure(
                    set_index=i,
                    components_left=len(comps),
                    diagnostics={"budget": budget, "retries": res.splice_retries,
                                 "available_reservoir": int(available.sum())},
                )
            comps = [spliced] + comps[2:]
        paths.append(np.array(comps[0], dtype=np.int64))
    return paths


def _walk_to_root(parent: np.ndarray, x: int) -> list[int]:
    out = [x]
    while parent[out[-1]] != -1:
        out.append(int(parent[out[-1]]))
    return out


def validate_connection(g: Graph, part: Partition, paths: list) -> None:
    """Independent re-check of the connection output; raises IntegrityError.

    Confirms per class: the path is a real path in g, contains S_i and the
    branch vertex, stays inside S_i u R u {v_i}, and all paths are
    pairwise vertex-disjoint.
    """
    if len(paths) != part.k:
        raise IntegrityError("one path per class required")
    seen: set[int] = set()
    for i, path in enumerate(paths):
        pl = [int(x) for x in path]
        vi = int(part.branch[i])
        members = set(int(x) for x in part.class_members(i))
        pset = set(pl)
        if len(pset) != len(pl):
            raise IntegrityError(f"path {i} repeats a vertex")
        if not members <= pset or vi not in pset:
            raise IntegrityError(f"path {i} misses its class or branch vertex")
        for x in pl:
            if x != vi and x not in members and part.assign[x] != R_CLASS:
                raise IntegrityError(f"path {i} leaves S_i u R u {{v_i}} at {x}")
        for a, b in zip(pl, pl[1:]):
            if not g.has_edge(a, b):
                raise IntegrityError(f"path {i} uses the non-edge ({a},{b})")
        if pset & seen:
            raise IntegrityError(f"path {i} overlaps an earlier path")
        seen |= pset


def build_pseudorandom(g: Graph, r: int, eps: float | None = None,
                       params: PseudoParams | None = None, rng: Rng | None = None,
                       spectral: SpectralProfile | None = None):
    """Full pipeline: branch selection, partition, reservoir connection,
    tree assembly inputs.

    k defaults to ceil((1-eps) d); the partition's connector maps,
    restricted to each vertex's final uncovered-tree set, are exactly a
    niceness witness because the unassigned pool is disjoint from every
    tree.  Returns (TreeCollection, NicenessWitness) or a staged
    BuildFailure.
    """
    params = params or PseudoParams()
    if eps is not None:
        params = replace(params, eps=eps)
    rng = rng or Rng()
    if not 0 <= r < g.n:
        raise ParameterError("root out of range")
    degs = g.degrees()
    regular = bool((degs == degs[0]).all())
    if not regular:
        warnings.warn("pseudorandom builder on a non-regular graph; using the mean degree")
    d_est = float(degs[0]) if regular else float(np.mean(degs))
    k = params.k_override if params.k_override is not None else math.ceil((1 - params.eps) * d_est - 1e-9)
    if k < 1 or k > g.degree(r):
        raise ParameterError(f"need 1 <= k <= deg(root) = {g.degree(r)}; got k = {k}")
    diagnostics: dict = {"k": k, "d": d_est}
    if spectral is not None:
        diagnostics["spectral"] = spectral
    branch = g.neighbors(r)[:k]
    part = sample_partition(g, r, branch, params, rng)
    if isinstance(part, PartitionFailure):
        return BuildFailure(stage=STAGE_PARTITION, certificate=part,
                            diagnostics={**diagnostics, "reason": part.reason})
    validate_partition(g, part)
    paths = connect_through_reservoir(g, part, params)
    if isinstance(paths, ConnectFailure):
        return BuildFailure(stage=STAGE_CONNECTION, certificate=paths,
                            diagnostics={**diagnostics, "set_index": paths.set_index})
    validate_connection(g, part, paths)
    trees = []
    for i, path in enumerate(paths):
        pl = [int(x) for x in path]
        vi = int(part.branch[i])
        pos = pl.index(vi)
        parent = {vi: r}
        for idx in range(pos - 1, -1, -1):
            parent[pl[idx]] = pl[idx + 1]
        for idx in range(pos + 1, len(pl)):
            parent[pl[idx]] = pl[idx - 1]
        trees.append(SmallTree(verts=np.array(pl + [r]), parent=parent, entry=vi))
    tc = TreeCollection(root=r, trees=trees)
    witness = _witness_from_partition(g, tc, part)
    return tc, witness


def _witness_from_partition(g: Graph, tc: TreeCollection, part: Partition) -> NicenessWitness:
    """Restrict the partition's connector maps to the final uncovered-tree
    sets (a subset of the partition-time index sets, so always defined)."""
    m = _tree_adjacency_matrix(g, tc)
    covered = m.copy()
    for i, t in enumerate(tc.trees):
        covered[i, t.verts] = True
    need = tc.k - covered.sum(axis=0)
    connectors: dict[int, dict[int, int]] = {}
    for v in np.flatnonzero(need > 0):
        v = int(v)
        rows = np.flatnonzero(~covered[:, v])
        stored = part.connectors.get(v)
        if stored is None:
            raise IntegrityError(f"partition stored no connectors for uncovered vertex {v}")
        try:
            connectors[v] = {int(i): stored[int(i)] for i in rows}
        except KeyError as exc:
            raise IntegrityError(f"partition connectors at {v} miss tree {exc}") from exc
    return NicenessWitness(connectors)
