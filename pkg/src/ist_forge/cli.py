"""Command-line front end: gen / build / verify / experiment / spectrum.

Exit codes: 0 ok, 1 usage or parameter error, 2 build failure,
3 verification failure, 4 I/O error.  The environment variable
IST_FORGE_SEED supplies the default seed everywhere.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .builders import BuildFailure
from .errors import GenerationError, ParameterError, ParseError
from .experiment import ExperimentConfig, choose_algo, resolve_k, run_experiment_to_csv, run_one_build
from .generators import gen_gnp, gen_random_regular
from .graph import max_degree, min_degree, read_edge_list, write_edge_list
from .ist import SpanningTreeFamily, assemble, verify_independent
from .pseudo import spectral_profile
from .rng import DEFAULT_SEED, Rng

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUILD = 2
EXIT_VERIFY = 3
EXIT_IO = 4


def _default_seed() -> int:
    env = os.environ.get("IST_FORGE_SEED")
    return int(env) if env else DEFAULT_SEED


def _load_graph(path):
    try:
        return read_edge_list(path)
    except OSError as exc:
        print(f"error: cannot read graph file: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO) from exc
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO) from exc


def cmd_gen(args) -> int:
    rng = Rng(args.seed)
    try:
        if args.model == "gnp":
            if args.p is None:
                raise ParameterError("gnp model needs --p")
            g = gen_gnp(args.n, args.p, rng)
        elif args.model == "regular":
            if args.d is None:
                raise ParameterError("regular model needs --d")
            g = gen_random_regular(args.n, args.d, rng)
        else:
            raise ParameterError(f"unknown model {args.model!r}")
    except (ParameterError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        write_edge_list(g, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    dmin = min_degree(g) if g.n else 0
    dmax = max_degree(g) if g.n else 0
    print(f"n={g.n} m={g.m} delta={dmin} Delta={dmax}")
    return EXIT_OK


def cmd_build(args) -> int:
    g = _load_graph(args.graph)
    if not 0 <= args.root < max(g.n, 1):
        print("error: root out of range", file=sys.stderr)
        return EXIT_USAGE
    params = {}
    if args.params:
        try:
            with open(args.params) as f:
                params = json.load(f)
        except OSError as exc:
            print(f"error: cannot read params: {exc}", file=sys.stderr)
            return EXIT_IO
        except json.JSONDecodeError as exc:
            print(f"error: bad params JSON: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        algo = choose_algo(args.algo, g, "file")
        k = resolve_k(args.k, g, "file", None)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rng = Rng(args.seed, path=(1, 0))
    out = run_one_build(
        g, args.root, k, algo,
        params.get("sparse", params if algo == "sparse" else {}),
        params.get("pseudo", params if algo == "pseudo" else {}),
        rng,
    )
    if isinstance(out, BuildFailure):
        print(f"build failed at stage: {out.stage}", file=sys.stderr)
        if out.diagnostics:
            print(f"diagnostics: {out.diagnostics}", file=sys.stderr)
        return EXIT_BUILD
    tc, w = out
    fam = assemble(g, tc, w)
    if args.out:
        try:
            with open(args.out, "w") as f:
                json.dump(fam.to_json_dict(), f)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    print(f"built {fam.k} trees rooted at {fam.root} (algo={algo})")
    if args.verify:
        rep = verify_independent(g, fam)
        if not rep.ok:
            print(f"verification FAILED: {rep.kind} {rep.detail}", file=sys.stderr)
            return EXIT_VERIFY
        print("verification passed")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    try:
        with open(args.trees) as f:
            fam = SpanningTreeFamily.from_json_dict(json.load(f))
    except OSError as exc:
        print(f"error: cannot read trees: {exc}", file=sys.stderr)
        return EXIT_IO
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: bad trees JSON: {exc}", file=sys.stderr)
        return EXIT_IO
    if fam.k and fam.n != g.n:
        print(f"error: family is over {fam.n} vertices but graph has {g.n}", file=sys.stderr)
        return EXIT_IO
    rep = verify_independent(g, fam)
    if rep.ok:
        print(f"PASS: {rep.n_trees} independent spanning trees rooted at {fam.root}")
        return EXIT_OK
    print(f"FAIL [{rep.kind}]: {rep.detail}")
    return EXIT_VERIFY


def cmd_experiment(args) -> int:
    try:
        with open(args.config) as f:
            text = f.read()
        data = json.loads(text)
        if "base_seed" not in data:
            data["base_seed"] = _default_seed()
        cfg = ExperimentConfig.from_json(json.dumps(data))
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except (json.JSONDecodeError, TypeError, ParameterError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.workers is not None:
        cfg.workers = args.workers
    try:
        records = run_experiment_to_csv(cfg, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    ok = sum(r.verified for r in records)
    print(f"wrote {len(records)} records to {args.out} ({ok} verified)")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    g = _load_graph(args.graph)
    degs = g.degrees()
    if g.n and not (degs == degs[0]).all():
        print("warning: graph is not regular; values are best-effort", file=sys.stderr)
    prof = spectral_profile(g)
    ratio = "inf" if math.isinf(prof.ratio) else f"{prof.ratio:.6g}"
    print(f"n={prof.n} d={prof.d:.6g} lambda={prof.lam:.6g} d/lambda={ratio}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ist-forge",
                                description="independent spanning trees: generate, build, verify, experiment")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random graph to an edge-list file")
    g.add_argument("--model", required=True, choices=["gnp", "regular"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float)
    g.add_argument("--d", type=int)
    g.add_argument("--seed", type=int, default=_default_seed())
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build an IST family from a graph file")
    b.add_argument("--graph", required=True)
    b.add_argument("--root", type=int, default=0)
    b.add_argument("--algo", default="auto", choices=["dense", "sparse", "pseudo", "auto"])
    b.add_argument("--k", default="delta", help="delta | fixed:<int> | eps:<float>")
    b.add_argument("--seed", type=int, default=_default_seed())
    b.add_argument("--params", help="JSON file with builder parameter overrides")
    b.add_argument("--verify", action="store_true")
    b.add_argument("--out", help="write the family as JSON")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="verify a family JSON against a graph")
    v.add_argument("--graph", required=True)
    v.add_argument("--trees", required=True)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="run a Monte-Carlo sweep to CSV")
    e.add_argument("--config", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--workers", type=int)
    e.set_defaults(func=cmd_experiment)

    s = sub.add_parser("spectrum", help="print the spectral profile of a graph")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_spectrum)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
