"""plots <csv> --kind heatmap|runtime|failstage --out <file>

Aggregations are computed in pure python with deterministic formatting;
matplotlib only renders.  Exit codes: 0 ok, 1 usage/validation, 4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
from dataclasses import dataclass

REQUIRED_COLUMNS = [
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

KINDS = ("heatmap", "runtime", "failstage")


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    kind: str
    out_path: str


class SpecError(ValueError):
    pass


def load_rows(path: str) -> list[dict]:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise SpecError(f"CSV is missing required columns: {', '.join(missing)}")
        rows = list(reader)
    if not rows:
        raise SpecError("CSV contains a header but no data rows")
    return rows


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(round(x, 12))
    return str(x)


def aggregate(rows: list[dict], kind: str):
    """(column names, table rows) for the requested figure kind."""
    if kind == "heatmap":
        cells: dict[tuple, list[int]] = {}
        for r in rows:
            key = (int(r["n"]), float(r["p_or_d"]))
            cells.setdefault(key, []).append(int(r["verified"]))
        table = [
            (n, p, len(vs), sum(vs) / len(vs))
            for (n, p), vs in sorted(cells.items())
        ]
        return ["n", "p_or_d", "trials", "mean_verified"], table
    if kind == "runtime":
        groups: dict[tuple, list[int]] = {}
        for r in rows:
            key = (r["algo"], int(r["n"]))
            groups.setdefault(key, []).append(int(r["elapsed_ms"]))
        table = [
            (algo, n, len(vs), float(statistics.median(vs)))
            for (algo, n), vs in sorted(groups.items())
        ]
        return ["algo", "n", "trials", "median_elapsed_ms"], table
    if kind == "failstage":
        cells: dict[tuple, dict[str, int]] = {}
        for r in rows:
            key = (int(r["n"]), float(r["p_or_d"]))
            stage = r["fail_stage"] or "ok"
            cells.setdefault(key, {})
            cells[key][stage] = cells[key].get(stage, 0) + 1
        table = []
        for (n, p), counts in sorted(cells.items()):
            total = sum(counts.values())
            for stage in sorted(counts):
                table.append((n, p, stage, counts[stage], counts[stage] / total))
        return ["n", "p_or_d", "stage", "count", "proportion"], table
    raise SpecError(f"unknown figure kind {kind!r}")


def write_sidecar(path: str, kind: str, columns: list[str], table: list[tuple]) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(f"# kind: {kind}\n")
        f.write("\t".join(columns) + "\n")
        for row in table:
            f.write("\t".join(_fmt(x) for x in row) + "\n")


def render(spec: FigureSpec) -> None:
    """Aggregate, draw the figure, and write the sidecar table."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = load_rows(spec.csv_path)
    columns, table = aggregate(rows, spec.kind)
    fig, ax = plt.subplots(figsize=(7, 5))
    if spec.kind == "heatmap":
        ns = sorted({t[0] for t in table})
        ps = sorted({t[1] for t in table})
        grid = [[float("nan")] * len(ps) for _ in ns]
        lookup = {(t[0], t[1]): t[3] for t in table}
        for i, n in enumerate(ns):
            for j, p in enumerate(ps):
                if (n, p) in lookup:
                    grid[i][j] = lookup[(n, p)]
        im = ax.imshow(grid, vmin=0.0, vmax=1.0, aspect="auto", origin="lower", cmap="viridis")
        ax.set_xticks(range(len(ps)), [f"{p:g}" for p in ps])
        ax.set_yticks(range(len(ns)), [str(n) for n in ns])
        ax.set_xlabel("p or d")
        ax.set_ylabel("n")
        ax.set_title("built-and-verified rate")
        for i in range(len(ns)):
            for j in range(len(ps)):
                v = grid[i][j]
                if v == v:
                    ax.text(j, i, f"{v:.2f}", ha="center", va="center", color="w")
        fig.colorbar(im, ax=ax)
    elif spec.kind == "runtime":
        algos = sorted({t[0] for t in table})
        for algo in algos:
            pts = [(t[1], t[3]) for t in table if t[0] == algo]
            pts.sort()
            ax.plot([x for x, _ in pts], [y for _, y in pts], marker="o", label=algo)
        ax.set_xlabel("n")
        ax.set_ylabel("median elapsed (ms)")
        ax.set_title("runtime by graph size")
        ax.legend()
    else:  # failstage
        cells = sorted({(t[0], t[1]) for t in table})
        stages = sorted({t[2] for t in table})
        bottoms = [0.0] * len(cells)
        xs = range(len(cells))
        for stage in stages:
            vals = []
            for c in cells:
                match = [t[4] for t in table if (t[0], t[1]) == c and t[2] == stage]
                vals.append(match[0] if match else 0.0)
            ax.bar(xs, vals, bottom=bottoms, label=stage)
            bottoms = [b + v for b, v in zip(bottoms, vals)]
        ax.set_xticks(list(xs), [f"n={n}\n{p:g}" for n, p in cells])
        ax.set_ylabel("proportion")
        ax.set_title("outcome breakdown by cell")
        ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)
    write_sidecar(spec.out_path + ".data.txt", spec.kind, columns, table)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plots",
                                     description="figures from experiment CSVs")
    parser.add_argument("csv", help="experiment results CSV")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--out", required=True, help="output image path")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    spec = FigureSpec(args.csv, args.kind, args.out)
    try:
        render(spec)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {spec.out_path} and {spec.out_path}.data.txt")
    return 0


if __name__ == "__main__":
    sys.exit(main())
