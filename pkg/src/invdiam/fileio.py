"""Text/JSON file formats for graphs, orientations and plans.

Graph file: first line ``n m``, then ``m`` lines ``u v`` with ``u < v``,
0-based labels.  Orientation file: a single line of ``m`` characters over
``{0,1}`` in edge order.  Plan file: a JSON object with ``p``,
``provenance`` and ``steps`` (an array of integer arrays).
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import InversionPlan, LabelledGraph, Orientation, build_graph

__all__ = [
    "FormatError",
    "load_graph",
    "save_graph",
    "load_orientation",
    "save_orientation",
    "load_plan",
    "save_plan",
    "roundtrip",
]


class FormatError(ValueError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def load_graph(path: str | Path) -> LabelledGraph:
    lines = Path(path).read_text().splitlines()
    rows = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise FormatError("empty graph file")
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise FormatError("expected header 'n m'", lineno)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError("header fields must be integers", lineno) from None
    if len(rows) - 1 != m:
        raise FormatError(f"expected {m} edge lines, found {len(rows) - 1}", lineno)
    edges = []
    for lineno, ln in rows[1:]:
        fields = ln.split()
        if len(fields) != 2:
            raise FormatError("expected 'u v'", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise FormatError("edge endpoints must be integers", lineno) from None
        if not u < v:
            raise FormatError(f"endpoints must satisfy u < v, got {u} {v}", lineno)
        edges.append((u, v))
    try:
        return build_graph(n, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def save_graph(g: LabelledGraph, path: str | Path) -> None:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    Path(path).write_text("\n".join(out) + "\n")


def load_orientation(path: str | Path, g: LabelledGraph) -> Orientation:
    text = Path(path).read_text().strip()
    if len(text) != g.m:
        raise FormatError(f"orientation has {len(text)} characters, host has {g.m} edges", 1)
    bits = 0
    for i, ch in enumerate(text):
        if ch == "1":
            bits |= 1 << i
        elif ch != "0":
            raise FormatError(f"invalid character {ch!r} at position {i}", 1)
    return Orientation(g, bits)


def save_orientation(o: Orientation, path: str | Path) -> None:
    Path(path).write_text(o.to01() + "\n")


def load_plan(path: str | Path) -> InversionPlan:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(data, dict):
        raise FormatError("plan file must hold a JSON object")
    for key in ("p", "steps"):
        if key not in data:
            raise FormatError(f"plan object missing {key!r} field")
    if not isinstance(data["p"], int):
        raise FormatError("'p' must be an integer")
    steps = []
    for k, step in enumerate(data["steps"]):
        if not isinstance(step, list) or not all(isinstance(v, int) for v in step):
            raise FormatError(f"step {k} is not an integer array")
        steps.append(frozenset(step))
    return InversionPlan(tuple(steps), data["p"], str(data.get("provenance", "")))


def save_plan(plan: InversionPlan, path: str | Path) -> None:
    data = {
        "p": plan.p,
        "provenance": plan.provenance,
        "steps": [sorted(x) for x in plan.steps],
    }
    Path(path).write_text(json.dumps(data, indent=1) + "\n")


def roundtrip(
    graph_path: str | Path,
    orientation_path: str | Path | None = None,
    plan_path: str | Path | None = None,
    scratch_dir: str | Path | None = None,
) -> bool:
    """Parse, re-serialize and re-parse; True when the values survive intact."""
    import tempfile

    with tempfile.TemporaryDirectory(dir=scratch_dir) as tmp:
        tmp = Path(tmp)
        g = load_graph(graph_path)
        save_graph(g, tmp / "g")
        ok = load_graph(tmp / "g") == g
        if orientation_path is not None:
            o = load_orientation(orientation_path, g)
            save_orientation(o, tmp / "o")
            ok = ok and load_orientation(tmp / "o", g) == o
        if plan_path is not None:
            plan = load_plan(plan_path)
            save_plan(plan, tmp / "plan")
            ok = ok and load_plan(tmp / "plan") == plan
    return ok
