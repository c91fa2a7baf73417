"""Monte-Carlo experiment runner: generate graphs over a parameter grid,
run a builder per root, verify, and emit one CSV row per attempt.

The CSV is a pure function of the configuration: trials are enumerated
deterministically, each trial derives its own split random streams, and
parallel workers only change who computes a row, never its content
(wall-clock timing is the one exception and can be disabled via
``record_timing``).
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .builders import STAGE_Q_SELECTION, BuildFailure
from .dense import build_dense
from .errors import ParameterError
from .generators import gen_gnp, gen_random_regular
from .graph import Graph, min_degree, read_edge_list
from .ist import assemble, verify_independent
from .pseudo import PseudoParams, build_pseudorandom, spectral_profile
from .rng import DEFAULT_SEED, Rng
from .sparse import SparseParams, build_sparse

CSV_COLUMNS = [
    "run_id",
    "algo",
    "n",
    "p_or_d",
    "seed",
    "root",
    "k_target",
    "built",
    "verified",
    "fail_stage",
    "elapsed_ms",
    "delta_G",
    "kappa_lower_bound_certified",
]

FAIL_STAGES = {"", "Q-selection", "path-growth", "niceness", "partition", "connection", "other"}


@dataclass
class ExperimentConfig:
    """Declarative description of one experiment sweep.

    ``k_policy`` is "delta", "fixed:<int>", or "eps:<float>" (branch count
    ceil((1-eps) d), with d the regular degree or delta(G) otherwise).
    """

    model: str = "gnp"  # gnp | regular | file
    n_values: list = field(default_factory=lambda: [100])
    p_values: list | None = None
    d_values: list | None = None
    graph_file: str | None = None
    roots_per_graph: int = 1
    seeds_per_cell: int = 1
    base_seed: int = DEFAULT_SEED
    algo: str = "auto"  # dense | sparse | pseudo | auto
    k_policy: str = "delta"
    sparse_params: dict = field(default_factory=dict)
    pseudo_params: dict = field(default_factory=dict)
    record_timing: bool = True
    workers: int = 1

    def validate(self) -> None:
        if self.model not in ("gnp", "regular", "file"):
            raise ParameterError(f"unknown model {self.model!r}")
        if self.algo not in ("dense", "sparse", "pseudo", "auto"):
            raise ParameterError(f"unknown algo {self.algo!r}")
        if self.seeds_per_cell < 1 or self.roots_per_graph < 1:
            raise ParameterError("seeds and roots counts must be >= 1")
        if self.model == "gnp" and not (self.n_values and self.p_values):
            raise ParameterError("gnp model needs n_values and p_values")
        if self.model == "regular" and not (self.n_values and self.d_values):
            raise ParameterError("regular model needs n_values and d_values")
        if self.model == "file" and not self.graph_file:
            raise ParameterError("file model needs graph_file")
        _parse_k_policy(self.k_policy)

    def cells(self) -> list[tuple]:
        """Grid cells as (n, p_or_d) pairs; the file model is one cell."""
        if self.model == "gnp":
            return [(int(n), float(p)) for n in self.n_values for p in self.p_values]
        if self.model == "regular":
            return [(int(n), int(d)) for n in self.n_values for d in self.d_values]
        return [(0, 0)]

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


@dataclass
class ExperimentRecord:
    run_id: int
    algo: str
    n: int
    p_or_d: float
    seed: int
    root: int
    k_target: int
    built: int
    verified: int
    fail_stage: str
    elapsed_ms: int
    delta_G: int
    kappa_lower_bound_certified: int

    def validate(self) -> None:
        if self.verified and not self.built:
            raise ParameterError("record invariant broken: verified without built")
        if bool(self.fail_stage) == bool(self.built):
            raise ParameterError("record invariant broken: fail_stage iff not built")
        if self.fail_stage not in FAIL_STAGES:
            raise ParameterError(f"unknown fail_stage {self.fail_stage!r}")

    def csv_row(self) -> str:
        vals = [getattr(self, c) for c in CSV_COLUMNS]
        return ",".join(_fmt(v) for v in vals)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_k_policy(policy: str):
    if policy == "delta":
        return ("delta", None)
    if policy.startswith("fixed:"):
        return ("fixed", int(policy.split(":", 1)[1]))
    if policy.startswith("eps:"):
        eps = float(policy.split(":", 1)[1])
        if not 0 < eps < 1:
            raise ParameterError("eps in k_policy must be in (0,1)")
        return ("eps", eps)
    raise ParameterError(f"unknown k_policy {policy!r}")


def resolve_k(policy: str, g: Graph, model: str, p_or_d) -> int:
    kind, val = _parse_k_policy(policy)
    if kind == "delta":
        return min_degree(g)
    if kind == "fixed":
        return val
    d = p_or_d if model == "regular" else min_degree(g)
    return max(1, math.ceil((1 - val) * d - 1e-9))


def choose_algo(cfg_algo: str, g: Graph, model: str) -> str:
    """Resolve "auto": pseudo for regular graphs with spectral ratio >= 4;
    dense when the density estimate clears min(log^2 n / sqrt n, 0.05)
    (the asymptotic boundary, floored at 0.05 where it exceeds 1 at these
    sizes); sparse otherwise.  Mistakes are caught by verification."""
    if cfg_algo != "auto":
        return cfg_algo
    n = max(g.n, 2)
    degs = g.degrees()
    if g.n and (degs == degs[0]).all() and degs[0] > 0:
        prof = spectral_profile(g)
        if prof.lam > 0 and prof.ratio >= 4.0:
            return "pseudo"
    p_hat = 2 * g.m / (n * (n - 1))
    if p_hat >= min(math.log(n) ** 2 / math.sqrt(n), 0.05):
        return "dense"
    return "sparse"


def run_one_build(g: Graph, root: int, k: int, algo: str,
                  sparse_params: dict, pseudo_params: dict, rng: Rng):
    """Dispatch one build; parameter errors surface as Q-selection
    failures so every harness row carries a stage."""
    try:
        if algo == "dense":
            return build_dense(g, root, k)
        if algo == "sparse":
            return build_sparse(g, root, k, SparseParams(**sparse_params))
        if algo == "pseudo":
            return build_pseudorandom(
                g, root, params=PseudoParams(k_override=k, **pseudo_params), rng=rng
            )
        raise ParameterError(f"unknown algo {algo!r}")
    except ParameterError as exc:
        return BuildFailure(stage=STAGE_Q_SELECTION, diagnostics={"error": str(exc)})


def _run_trial(args) -> list[dict]:
    cfg_dict, cell_idx, seed_idx = args
    cfg = ExperimentConfig(**cfg_dict)
    n, p_or_d = cfg.cells()[cell_idx]
    seed = cfg.base_seed + seed_idx
    if cfg.model == "gnp":
        g = gen_gnp(n, p_or_d, Rng(seed))
    elif cfg.model == "regular":
        g = gen_random_regular(n, p_or_d, Rng(seed))
    else:
        g = read_edge_list(cfg.graph_file)
        n, p_or_d = g.n, round(2 * g.m / max(g.n * (g.n - 1), 1), 6)
    algo = choose_algo(cfg.algo, g, cfg.model)
    delta = min_degree(g) if g.n else 0
    rows = []
    for root_idx in range(cfg.roots_per_graph):
        root = root_idx % max(g.n, 1)
        k = resolve_k(cfg.k_policy, g, cfg.model, p_or_d)
        rng = Rng(seed, path=(1, root_idx))
        t0 = time.perf_counter()
        try:
            out = run_one_build(g, root, k, algo, cfg.sparse_params, cfg.pseudo_params, rng)
            built = not isinstance(out, BuildFailure)
            verified = False
            if built:
                tc, w = out
                fam = assemble(g, tc, w)
                verified = bool(verify_independent(g, fam).ok)
        except Exception:  # a trial must never take down the sweep
            out = BuildFailure(stage="other")
            built = False
            verified = False
        elapsed = int(round((time.perf_counter() - t0) * 1000)) if cfg.record_timing else 0
        rows.append(dict(
            algo=algo, n=n, p_or_d=p_or_d, seed=seed, root=root, k_target=k,
            built=int(built), verified=int(verified),
            fail_stage="" if built else out.stage,
            elapsed_ms=elapsed, delta_G=delta,
            kappa_lower_bound_certified=k if verified else 0,
        ))
    return rows


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Execute the full grid; rows come back in deterministic run_id order
    regardless of worker count."""
    cfg.validate()
    cells = cfg.cells()
    trials = [
        (asdict(cfg), ci, si)
        for ci in range(len(cells))
        for si in range(cfg.seeds_per_cell)
    ]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            per_trial = list(pool.map(_run_trial, trials))
    else:
        per_trial = [_run_trial(t) for t in trials]
    records = []
    run_id = 0
    for rows in per_trial:
        for row in rows:
            rec = ExperimentRecord(run_id=run_id, **row)
            rec.validate()
            records.append(rec)
            run_id += 1
    return records


def write_csv(records: list[ExperimentRecord], path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(",".join(CSV_COLUMNS) + "\n")
        for rec in records:
            f.write(rec.csv_row() + "\n")


def run_experiment_to_csv(cfg: ExperimentConfig, path) -> list[ExperimentRecord]:
    """Run and write; on interrupt, flush the completed trial prefix."""
    cfg.validate()
    cells = cfg.cells()
    trials = [
        (asdict(cfg), ci, si)
        for ci in range(len(cells))
        for si in range(cfg.seeds_per_cell)
    ]
    done: list = [None] * len(trials)
    try:
        if cfg.workers > 1:
            from concurrent.futures import as_completed

            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                futs = {pool.submit(_run_trial, t): i for i, t in enumerate(trials)}
                for fut in as_completed(futs):
                    done[futs[fut]] = fut.result()
        else:
            for i, t in enumerate(trials):
                done[i] = _run_trial(t)
    except KeyboardInterrupt:
        pass
    records: list[ExperimentRecord] = []
    run_id = 0
    for rows in done:
        if rows is None:
            break
        for row in rows:
            rec = ExperimentRecord(run_id=run_id, **row)
            rec.validate()
            records.append(rec)
            run_id += 1
    write_csv(records, path)
    return records
