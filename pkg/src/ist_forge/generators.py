"""Random graph generators: G(n,p), bipartite G(a,b,p), and random
d-regular graphs via the stub-pairing (configuration model) sampler.

G(n,p) uses geometric gap-skipping over the C(n,2) linearized pair
indices, so sparse generation costs O(m) draws instead of O(n^2) coin
flips.  All generators are deterministic functions of (parameters, Rng).
"""

from __future__ import annotations

import numpy as np

from .errors import GenerationError, ParameterError
from .graph import BipartiteGraph, Graph
from .rng import Rng

REGULAR_ATTEMPT_CAP = 200


def _skip_sample(total: int, p: float, rng: Rng) -> np.ndarray:
    """Indices of successes among ``total`` independent p-trials.

    Gaps between successive successes are iid Geometric(p) (support >= 1),
    sampled in blocks and cumulatively summed.
    """
    if total <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    if p < 1e-12:
        # geometric gaps would overflow int64; the count is Binomial and
        # positions are uniform, which is the same joint law
        hits = int(rng.gen.binomial(total, p))
        return np.sort(rng.gen.choice(total, size=hits, replace=False)).astype(np.int64)
    out = []
    cur = -1  # linear index of the last success
    while True:
        remaining = total - 1 - cur
        exp = remaining * p
        block = int(exp + 6.0 * np.sqrt(exp + 1.0) + 16)
        gaps = rng.gen.geometric(p, size=block)
        pos = cur + np.cumsum(gaps)
        inside = pos[(pos >= 0) & (pos < total)]
        if len(inside) < len(pos):
            out.append(inside)
            break
        out.append(inside)
        if len(inside) == 0:
            break
        cur = int(inside[-1])
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def _unrank_pairs(t: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map linear pair indices to (u, v) with u < v.

    Pairs are ordered (0,1),(0,2),...,(0,n-1),(1,2),...; row u starts at
    offset S(u) = u*(n-1) - u*(u-1)/2.  The float inversion is corrected
    by a couple of bounded fix-up passes so it is exact for all n used.
    """
    tf = t.astype(np.float64)
    u = np.floor(((2 * n - 1) - np.sqrt((2 * n - 1) ** 2 - 8.0 * tf)) / 2.0).astype(np.int64)
    np.clip(u, 0, n - 2, out=u)
    for _ in range(3):
        start = u * (n - 1) - u * (u - 1) // 2
        too_high = start > t
        u[too_high] -= 1
        start = u * (n - 1) - u * (u - 1) // 2
        nxt = start + (n - 1 - u)
        too_low = t >= nxt
        u[too_low] += 1
        if not (too_high.any() or too_low.any()):
            break
    start = u * (n - 1) - u * (u - 1) // 2
    v = u + 1 + (t - start)
    return u, v


def gen_gnp(n: int, p: float, rng: Rng) -> Graph:
    """Binomial random graph: each of the C(n,2) pairs appears
    independently with probability p."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must be in [0, 1]")
    total = n * (n - 1) // 2
    idx = _skip_sample(total, p, rng)
    u, v = _unrank_pairs(idx, n) if len(idx) else (np.empty(0, dtype=np.int64),) * 2
    return Graph._from_clean_pairs(n, u, v)


def gen_bipartite_gnp(a: int, b: int, p: float, rng: Rng) -> BipartiteGraph:
    """Binomial random bipartite graph over the a*b left-right pairs."""
    if a < 0 or b < 0:
        raise ParameterError("part sizes must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must be in [0, 1]")
    idx = _skip_sample(a * b, p, rng)
    edges = tuple((int(t) // b, int(t) % b) for t in idx)
    return BipartiteGraph(a, b, edges)


def gen_random_regular(n: int, d: int, rng: Rng) -> Graph:
    """Simple d-regular graph from the stub-pairing model.

    Stubs are shuffled and paired; pairs that would create a loop or a
    repeated edge are thrown back and the leftover stubs re-paired, with
    a restart when no legal pair remains.  Restarts are capped at
    REGULAR_ATTEMPT_CAP, comfortably enough for d = O(sqrt(n)).
    """
    if d < 0 or d >= max(n, 1):
        raise ParameterError("need 0 <= d < n")
    if (n * d) % 2 != 0:
        raise ParameterError("n*d must be even")
    if d == 0:
        return Graph._from_clean_pairs(n, np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))

    def suitable(edges: set, stubs_count: dict) -> bool:
        # Some legal pair among leftover stubs?
        keys = sorted(stubs_count)
        for i, s1 in enumerate(keys):
            for s2 in keys[i + 1:]:
                if (s1, s2) not in edges:
                    return True
        return False

    for _ in range(REGULAR_ATTEMPT_CAP):
        edges: set[tuple[int, int]] = set()
        stubs = np.repeat(np.arange(n), d)
        rng.gen.shuffle(stubs)
        stubs_list = stubs.tolist()
        ok = True
        while stubs_list:
            leftover: list[int] = []
            half = len(stubs_list) // 2
            for i in range(half):
                u, v = stubs_list[2 * i], stubs_list[2 * i + 1]
                if u > v:
                    u, v = v, u
                if u == v or (u, v) in edges:
                    leftover.append(stubs_list[2 * i])
                    leftover.append(stubs_list[2 * i + 1])
                else:
                    edges.add((u, v))
            if len(leftover) == len(stubs_list):
                counts: dict[int, int] = {}
                for s in leftover:
                    counts[s] = counts.get(s, 0) + 1
                if not suitable(edges, counts):
                    ok = False
                    break
            arr = np.array(leftover, dtype=np.int64)
            rng.gen.shuffle(arr)
            stubs_list = arr.tolist()
        if ok and not stubs_list:
            e = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
            return Graph._from_clean_pairs(n, e[:, 0], e[:, 1])
    raise GenerationError(
        f"could not sample a simple {d}-regular graph on {n} vertices "
        f"within {REGULAR_ATTEMPT_CAP} attempts"
    )
