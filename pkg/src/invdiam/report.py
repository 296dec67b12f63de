"""CSV/JSON emission and figure rendering for corpus runs.

The CSV carries one row per instance with fixed columns (documented in the
README); the JSON is the superset.  Neither contains timing, so runs with
the same seed are byte-identical.  Figures are rendered next to the tables.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .corpus import PLANNER_NAMES, RunReport

__all__ = ["write_csv", "write_json", "render_figures", "write_report"]

CSV_COLUMNS = [
    "instance_id", "family", "name", "n", "m", "p", "pair_kind",
    "lower_bound", "lower_method",
    "oracle_status", "oracle_distance", "oracle_conv", "oracle_id",
    "best_planner", "best_length",
]
for _name in PLANNER_NAMES:
    CSV_COLUMNS += [f"{_name}_len", f"{_name}_bound"]
CSV_COLUMNS += ["passed", "failures"]


def write_csv(report: RunReport, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in report.rows:
            row = [
                r.instance_id, r.family, r.name, r.n, r.m, r.p, r.pair_kind,
                r.lower_bound, r.lower_method,
                r.oracle_status,
                "" if r.oracle_distance is None else r.oracle_distance,
                "" if r.oracle_conv is None else r.oracle_conv,
                "" if r.oracle_id is None else r.oracle_id,
                r.best_planner, r.best_length,
            ]
            for name in PLANNER_NAMES:
                row.append(r.planner_lengths.get(name, ""))
                row.append(r.planner_bounds.get(name, ""))
            row.append(int(r.passed))
            row.append(";".join(r.failures))
            writer.writerow(row)


def write_json(report: RunReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report.to_dict(), indent=1, sort_keys=True) + "\n")


def render_figures(report: RunReport, out_dir: str | Path) -> list[Path]:
    """Three overview figures: tree plan lengths against the per-p curves,
    planner length against the exact oracle, and lower bound against the
    oracle converse number."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    made: list[Path] = []

    tree_rows = [
        r for r in report.rows
        if r.family == "random_tree" and r.pair_kind == "converse"
    ]
    if tree_rows:
        fig, ax = plt.subplots(figsize=(7, 5))
        ps = sorted({r.p for r in tree_rows})
        cmap = plt.get_cmap("viridis")
        for i, p in enumerate(ps):
            pts = [(r.n, r.best_length) for r in tree_rows if r.p == p]
            pts.sort()
            ax.scatter(
                [x for x, _ in pts], [y for _, y in pts],
                s=14, label=f"p={p}", color=cmap(i / max(len(ps) - 1, 1)),
            )
        ns = range(2, max(r.n for r in tree_rows) + 1)
        ax.plot(ns, [-(-(n - 1) // 2) for n in ns], "k--", lw=1,
                label="ceil((n-1)/2)")
        ax.plot(ns, [-(-(3 * (n - 1)) // 8) for n in ns], "k-.", lw=1,
                label="ceil(3(n-1)/8)")
        ax.plot(ns, [-(-(2 * n - 2) // 7) for n in ns], "k:", lw=1,
                label="ceil((2n-2)/7)")
        ax.set_xlabel("tree order n")
        ax.set_ylabel("best plan length (full reversal)")
        ax.set_title("Tree reversal plans against the per-p guarantees")
        ax.legend(fontsize=7, ncol=2)
        path = out_dir / "tree_plans.png"
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        made.append(path)

    ok_rows = [r for r in report.rows if r.oracle_status == "ok"]
    if ok_rows:
        fig, ax = plt.subplots(figsize=(6, 5))
        ax.scatter([r.oracle_distance for r in ok_rows],
                   [r.best_length for r in ok_rows], s=12, alpha=0.6)
        top = max(max(r.best_length for r in ok_rows), 1)
        ax.plot([0, top], [0, top], "k--", lw=1)
        ax.set_xlabel("exact distance (oracle)")
        ax.set_ylabel("best planner length")
        ax.set_title("Planners never beat the oracle")
        path = out_dir / "oracle_vs_planner.png"
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        made.append(path)

        fig, ax = plt.subplots(figsize=(6, 5))
        ax.scatter([r.lower_bound for r in ok_rows],
                   [r.oracle_conv for r in ok_rows], s=12, alpha=0.6)
        top = max(max(r.oracle_conv for r in ok_rows), 1)
        ax.plot([0, top], [0, top], "k--", lw=1)
        ax.set_xlabel("certified lower bound")
        ax.set_ylabel("oracle converse number")
        ax.set_title("Lower bounds against the exact converse number")
        path = out_dir / "lower_vs_oracle.png"
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        made.append(path)
    return made


def write_report(
    report: RunReport, out_dir: str | Path, figures: bool = True
) -> dict[str, object]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "corpus.csv"
    json_path = out_dir / "corpus.json"
    write_csv(report, csv_path)
    write_json(report, json_path)
    paths: list[Path] = [csv_path, json_path]
    if figures:
        paths += render_figures(report, out_dir)
    return {"paths": paths, "passed": report.passed, "failures": report.failures}
