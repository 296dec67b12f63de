"""Command-line workbench: oracle, plan, decompose, generate, bound, verify,
corpus.  All randomness takes --seed; INVDIAM_WORKERS sets the default
worker count for corpus runs."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds as _bounds
from . import corpus as _corpus
from . import decompositions as _dec
from . import families as _families
from . import fileio
from . import oracle as _oracle
from . import procedures as _proc
from . import report as _report
from .core import Orientation, verify_plan

__all__ = ["main"]


def _add_graph(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="graph file (n m / edge lines)")


def _load_pair(args, g):
    o1 = fileio.load_orientation(args.o1, g) if args.o1 else Orientation(g, 0)
    if args.o2:
        o2 = fileio.load_orientation(args.o2, g)
    else:
        o2 = o1.complement()
    return o1, o2


def _emit_plan(plan, path) -> None:
    if path:
        fileio.save_plan(plan, path)


def _cmd_oracle(args) -> int:
    g = fileio.load_graph(args.graph)
    kw = dict(max_edges=args.max_edges)
    try:
        if args.what == "distance":
            if not (args.o1 and args.o2):
                print("oracle distance needs --o1 and --o2", file=sys.stderr)
                return 2
            o1, o2 = _load_pair(args, g)
            res = _oracle.distance(g, args.p, o1, o2, **kw)
        elif args.what == "diameter":
            res = _oracle.diameter(g, args.p, **kw)
        else:
            res = _oracle.converse_number(g, args.p, **kw)
    except _oracle.BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    print(json.dumps({
        "value": res.value,
        "plan_length": None if res.witness_plan is None else len(res.witness_plan.steps),
        "stats": {k: v for k, v in res.stats.items() if k != "wall_time"},
        "wall_time": round(res.stats.get("wall_time", 0.0), 4),
    }))
    if res.witness_plan is not None:
        _emit_plan(res.witness_plan, args.emit_plan)
    return 0


_STRATEGIES = {
    "auto": None,
    "uppergen": lambda g, p, o1, o2, planar: _proc.plan_uppergen(g, p, o1, o2),
    "connected3": lambda g, p, o1, o2, planar: _proc.plan_connected3(g, o1, o2),
    "degenerate": lambda g, p, o1, o2, planar: _proc.plan_degenerate(g, p, o1, o2),
    "procedure1": lambda g, p, o1, o2, planar: _proc.plan_procedure1(g, p, o1, o2),
    "tree": lambda g, p, o1, o2, planar: _proc.lift_conv_to_id(g, p, o1, o2),
    "planar": lambda g, p, o1, o2, planar: (
        _proc.plan_planar_small(g, p, o1, o2, planar=planar)
        if p in (3, 4, 5)
        else _proc.plan_planar_general(g, p, o1, o2, planar=planar)
    ),
}


def _cmd_plan(args) -> int:
    g = fileio.load_graph(args.graph)
    o1 = fileio.load_orientation(args.o1, g)
    o2 = fileio.load_orientation(args.o2, g)
    planar = True if args.planar else None
    if args.strategy == "auto":
        rep = _proc.best_plan(g, args.p, o1, o2, planar=planar)
    else:
        rep = _STRATEGIES[args.strategy](g, args.p, o1, o2, planar)
    print(json.dumps({
        "length": len(rep.plan.steps),
        "bound": str(rep.bound),
        "route": rep.route,
        "candidates": rep.candidates,
    }))
    _emit_plan(rep.plan, args.emit_plan)
    return 0


def _cmd_decompose(args) -> int:
    g = fileio.load_graph(args.graph)
    if args.what == "kotzig":
        out = [list(part) for part in _dec.kotzig_p3(g).parts]
    elif args.what == "tree4":
        out = [sorted(s) for s in _dec.tree4_decomposition(g)]
    elif args.what == "strong-colouring":
        out = [sorted(c) for c in _dec.strong_edge_colouring(g).classes]
    elif args.what == "transversal":
        out = sorted(_dec.min_triangle_transversal(g, exact=args.exact))
    else:
        out = [list(t) for t in _dec.greedy_triangle_packing(g, exact=args.exact)]
    print(json.dumps(out))
    return 0


def _cmd_generate(args) -> int:
    g = _families.generate(
        args.family, n=args.n, q=args.q, k=args.k, m=args.m, seed=args.seed
    )
    fileio.save_graph(g, args.out)
    print(json.dumps({"name": g.name, "n": g.n, "m": g.m, "out": str(args.out)}))
    return 0


def _cmd_bound(args) -> int:
    g = fileio.load_graph(args.graph)
    rep = _bounds.lower_bound(g, args.p)
    out = {"value": rep.value, "method": rep.method}
    if args.certify and rep.certificate is not None:
        chk = _bounds.check_weight_certificate(g, args.p, rep.certificate)
        out["certificate"] = {
            "ok": chk.ok,
            "max_weight": str(chk.max_weight),
            "cap": str(rep.certificate.cap),
            "total": str(rep.certificate.total),
        }
    print(json.dumps(out))
    return 0


def _load_certificate(path, g):
    data = json.loads(Path(path).read_text())
    weights = tuple(Fraction(w) for w in data["weights"])
    return _bounds.WeightCertificate(
        weights, Fraction(data["cap"]), str(data.get("description", ""))
    )


def _cmd_verify(args) -> int:
    g = fileio.load_graph(args.graph)
    if args.what == "plan":
        plan = fileio.load_plan(args.plan)
        o1 = fileio.load_orientation(args.o1, g)
        o2 = fileio.load_orientation(args.o2, g)
        chk = verify_plan(g, o1, o2, plan, p=args.p)
        print(json.dumps({
            "valid": chk.valid, "length": chk.length,
            "violations": list(chk.violations),
        }))
        return 0 if chk.valid else 1
    if args.what == "certificate":
        cert = _load_certificate(args.cert, g)
        try:
            chk = _bounds.check_weight_certificate(g, args.p, cert)
        except _oracle.BudgetExceeded as exc:
            print(f"refused: {exc}", file=sys.stderr)
            return 3
        print(json.dumps({
            "ok": chk.ok,
            "max_weight": str(chk.max_weight),
            "implied_bound": _bounds.implied_bound(cert) if chk.ok else None,
        }))
        return 0 if chk.ok else 1
    ok = fileio.roundtrip(args.graph, args.orientation, args.plan)
    print(json.dumps({"roundtrip": ok}))
    return 0 if ok else 1


def _cmd_corpus(args) -> int:
    spec = _corpus.CorpusSpec(
        seed=args.seed,
        trees=args.trees,
        connected=args.connected,
        triangulations=args.triangulations,
        oracle_max_edges=args.max_edges,
    )
    workers = args.workers or int(os.environ.get("INVDIAM_WORKERS", "1"))
    report = _corpus.run_corpus(spec, workers=workers)
    out = _report.write_report(report, args.out_dir, figures=not args.no_figures)
    print(json.dumps({
        "instances": len(report.rows),
        "passed": report.passed,
        "failures": report.failures[:20],
        "artifacts": [str(p) for p in out["paths"]],
    }, indent=1))
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="invdiam",
        description="Exact and constructive bounded-inversion distance toolkit",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracle", help="exact distances / diameters / converse numbers")
    p.add_argument("what", choices=["distance", "diameter", "converse"])
    _add_graph(p)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--o1")
    p.add_argument("--o2")
    p.add_argument("--max-edges", type=int, default=_oracle.DEFAULT_MAX_EDGES)
    p.add_argument("--emit-plan")
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("plan", help="constructive planners with guaranteed bounds")
    _add_graph(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--o1", required=True)
    p.add_argument("--o2", required=True)
    p.add_argument("--strategy", choices=sorted(_STRATEGIES), default="auto")
    p.add_argument("--planar", action="store_true",
                   help="trust that the input is planar")
    p.add_argument("--emit-plan")
    p.set_defaults(fn=_cmd_plan)

    p = sub.add_parser("decompose", help="edge decompositions and substructures")
    p.add_argument("what", choices=[
        "kotzig", "tree4", "strong-colouring", "transversal", "packing"])
    _add_graph(p)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("generate", help="extremal families and random instances")
    p.add_argument("family")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("bound", help="verified conv/id lower bounds")
    p.add_argument("what", choices=["lower"])
    _add_graph(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--certify", action="store_true")
    p.set_defaults(fn=_cmd_bound)

    p = sub.add_parser("verify", help="check plans, certificates, file formats")
    p.add_argument("what", choices=["plan", "certificate", "roundtrip"])
    _add_graph(p)
    p.add_argument("--p", type=int)
    p.add_argument("--o1")
    p.add_argument("--o2")
    p.add_argument("--plan")
    p.add_argument("--cert")
    p.add_argument("--orientation")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("corpus", help="run the cross-check corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trees", type=int, default=220)
    p.add_argument("--connected", type=int, default=180)
    p.add_argument("--triangulations", type=int, default=100)
    p.add_argument("--max-edges", type=int, default=18)
    p.add_argument("--workers", type=int, default=0,
                   help="0 = use INVDIAM_WORKERS or 1")
    p.add_argument("--out-dir", default="corpus-out")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(fn=_cmd_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _oracle.BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except (fileio.FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
