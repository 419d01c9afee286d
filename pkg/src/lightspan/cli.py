"""Command-line interface.

Exit codes: 0 success, 1 a certification failed, 2 the input was unusable.
"""

from __future__ import annotations

import argparse
import csv
import glob
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import jsonio
from .charging import SchemeError, build_scheme, verify_scheme
from .decomposition import DecompositionError, lift_spanner, reduce, to_intervals, validate_decomposition
from .generators import GenSpec, WEIGHT_MODES, WINDOW_MODES, gen_lowerbound, gen_random, lightest_monotone_weight
from .graph import GraphError, leq, mst_weight, validate
from .monotone import MonotoneError, is_monotone
from .spanner import TREE_MODES, build_tree, greedy_spanner, prepare, run_eps, verify_stretch

log = logging.getLogger("lightspan")

CSV_HEADER = ["instance", "n", "k", "eps", "tree_ratio", "scheme_v", "spanner_ratio", "max_stretch", "runtime_ms"]

OK, FAILED, BAD_INPUT = 0, 1, 2


class CertificationFailure(Exception):
    pass


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _emit(data, path: str | None) -> None:
    if path:
        jsonio.write(path, data)
    else:
        sys.stdout.write(jsonio.dumps(data))


def _load_instance(path: str):
    g, pd = jsonio.load_graph(path)
    report = validate(g)
    if not report.valid:
        raise jsonio.InputError(f"{path}: graph invalid: " + "; ".join(report.errors))
    if pd is None:
        raise jsonio.InputError(f"{path}: no decomposition given")
    dreport = validate_decomposition(g, pd)
    if not dreport.valid:
        raise jsonio.InputError(f"{path}: decomposition invalid: " + "; ".join(dreport.errors))
    return g, pd


def cmd_gen(args) -> int:
    try:
        spec = GenSpec(
            k=args.k,
            m=args.m,
            seed=args.seed,
            weights=args.weights,
            max_weight=args.max_weight,
            density=args.density,
            window=args.window,
        )
    except ValueError as exc:
        args.parser.error(str(exc))
    g, pd = gen_random(spec)
    _emit(jsonio.graph_to_dict(g, pd), args.output)
    return OK


def cmd_lowerbound(args) -> int:
    if args.depth < 1:
        args.parser.error("depth must be at least 1")
    inst = gen_lowerbound(args.depth)
    if args.output:
        jsonio.write(args.output, inst.to_dict())
    if args.measure:
        print("depth\tn\twidth\tmst\ttree_weight\tratio")
        for d in range(1, args.depth + 1):
            cur = inst if d == args.depth else gen_lowerbound(d)
            weight, _ = lightest_monotone_weight(cur)
            base = mst_weight(cur.graph)
            print(f"{d}\t{cur.graph.n}\t{cur.td.width}\t{base:g}\t{weight:g}\t{weight / base:.6f}")
    elif not args.output:
        sys.stdout.write(jsonio.dumps(inst.to_dict()))
    return OK


def cmd_reduce(args) -> int:
    g, pd = _load_instance(args.input)
    red = reduce(g, pd)
    jsonio.save_graph(args.output, red.graph, red.decomposition)
    trace_path = args.trace or str(Path(args.output).with_suffix("")) + ".trace.json"
    jsonio.write(trace_path, red.trace.to_dict())
    log.info("reduced %d -> %d vertices, width %d -> %d", g.n, red.graph.n, pd.width, red.decomposition.width)
    return OK


def cmd_tree(args) -> int:
    g, pd = _load_instance(args.input)
    tree = build_tree(g, pd, args.mode)
    if not is_monotone(tree, to_intervals(pd)):
        raise CertificationFailure("tree is not monotone")
    _emit(tree.to_dict(), args.output)
    return OK


def cmd_scheme(args) -> int:
    g, pd = _load_instance(args.input)
    tree = jsonio.load_tree(args.tree)
    scheme, v = build_scheme(g, tree, to_intervals(pd))
    _emit(scheme.to_dict(), args.output)
    log.info("scheme value v = %s (2 * maxdeg = %d)", v, 2 * g.max_degree())
    return OK


def cmd_spanner(args) -> int:
    g, _ = _load_instance(args.input)
    tree = jsonio.load_tree(args.tree)
    sp = greedy_spanner(g, None if args.no_force else tree, args.eps)
    stretch = verify_stretch(g, sp)
    if not leq(stretch, 1 + args.eps):
        raise CertificationFailure(f"stretch {stretch} exceeds {1 + args.eps}")
    data = jsonio.spanner_to_dict(sp, args.eps)
    data["max_stretch"] = stretch
    _emit(data, args.output)
    return OK


def cmd_lift(args) -> int:
    reduced, _ = jsonio.load_graph(args.reduced)
    original, _ = jsonio.load_graph(args.original)
    trace = jsonio.load_trace(args.trace)
    sp = jsonio.load_spanner(args.input, reduced)
    lifted = lift_spanner(sp, trace, original)
    _emit(jsonio.spanner_to_dict(lifted), args.output)
    return OK


def _append_csv(path: str, rows: list[list]) -> None:
    p = Path(path)
    new = not p.exists() or p.stat().st_size == 0
    with p.open("a", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        if new:
            w.writerow(CSV_HEADER)
        w.writerows(rows)


def cmd_pipeline(args) -> int:
    inputs = list(args.input or [])
    if args.glob:
        inputs += sorted(glob.glob(args.glob))
    if not inputs:
        args.parser.error("no input instances")
    status = OK
    rows = []
    results = {}
    for path in inputs:
        name = Path(path).stem
        try:
            g, pd = _load_instance(path)
        except jsonio.InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return BAD_INPUT
        start = time.perf_counter()
        prep = prepare(g, pd, args.tree_mode)
        prep_ms = (time.perf_counter() - start) * 1000
        for eps in args.eps:
            t0 = time.perf_counter()
            res = run_eps(prep, eps, force_tree=not args.no_force)
            ms = prep_ms + (time.perf_counter() - t0) * 1000
            results[f"{name}@{eps:g}"] = res.to_dict()
            rows.append(
                [
                    name,
                    g.n,
                    pd.width,
                    eps,
                    f"{res.tree_ratio:.9g}",
                    f"{float(res.scheme_v):.9g}",
                    f"{res.spanner_ratio:.9g}",
                    f"{res.lifted_stretch:.9g}",
                    f"{ms:.1f}",
                ]
            )
            if not res.ok:
                status = FAILED
                for f in res.failures:
                    print(f"{name} eps={eps:g}: certification failed: {f}", file=sys.stderr)
    if args.csv:
        _append_csv(args.csv, rows)
    if args.output:
        jsonio.write(args.output, results if len(results) > 1 else next(iter(results.values())))
    elif not args.csv:
        sys.stdout.write(jsonio.dumps(results))
    return status


def cmd_verify(args) -> int:
    g, pd = jsonio.load_graph(args.input)
    verdict: dict = {}
    report = validate(g)
    verdict["graph"] = {"status": "pass" if report.valid else "fail", **report.to_dict()}
    if pd is not None:
        d = validate_decomposition(g, pd)
        verdict["decomposition"] = {"status": "pass" if d.valid else "fail", **d.to_dict()}
    tree = jsonio.load_tree(args.tree) if args.tree else None
    if tree is not None:
        ok = tree.is_spanning_tree() and tree.n == g.n and all(g.has_edge(*e) for e in tree.edges())
        entry = {"status": "pass" if ok else "fail"}
        if pd is not None and ok:
            entry["monotone"] = is_monotone(tree, to_intervals(pd))
        verdict["tree"] = entry
    if args.scheme:
        if tree is None:
            args.parser.error("--scheme needs --tree")
        scheme = jsonio.load_scheme(args.scheme)
        v = Fraction(args.v) if args.v is not None else None
        r = verify_scheme(g, tree, scheme, v=v, acyclic=not args.cyclic)
        verdict["scheme"] = {"status": "pass" if r.ok else "fail", **r.to_dict()}
    if args.spanner:
        sp = jsonio.load_spanner(args.spanner, g)
        entry = {}
        ok = sp.is_spanning()
        if ok:
            entry["max_stretch"] = verify_stretch(g, sp)
            if args.eps is not None:
                ok = leq(entry["max_stretch"], 1 + args.eps)
        else:
            entry["error"] = "spanner does not span the graph"
        if args.require_tree:
            if tree is None:
                args.parser.error("--require-tree needs --tree")
            missing = sorted(set(tree.edges()) - set(sp.pairs()))
            entry["missing_tree_edges"] = [list(e) for e in missing]
            ok = ok and not missing
        entry["status"] = "pass" if ok else "fail"
        verdict["spanner"] = entry
    sys.stdout.write(jsonio.dumps(verdict))
    return OK if all(v["status"] == "pass" for v in verdict.values()) else FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lightspan", description="Light spanners for bounded-pathwidth graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func, parser=p)
        return p

    p = add("gen", cmd_gen, "generate a random instance with its path decomposition")
    p.add_argument("-k", type=int, required=True, help="pathwidth")
    p.add_argument("-m", type=int, required=True, help="number of full bags")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--weights", choices=WEIGHT_MODES, default="uniform")
    p.add_argument("--max-weight", type=int, default=10)
    p.add_argument("--window", choices=WINDOW_MODES, default="sliding")
    p.add_argument("-o", "--output")

    p = add("lowerbound", cmd_lowerbound, "build the heavy-monotone-tree family")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--measure", action="store_true", help="print the ratio table for depths 1..depth")
    p.add_argument("-o", "--output")

    p = add("reduce", cmd_reduce, "make nice, bound degrees and complete")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--trace", help="trace path (default: <output>.trace.json)")

    p = add("tree", cmd_tree, "monotone spanning tree of a reduced instance")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--mode", choices=TREE_MODES, default="lightest")
    p.add_argument("-o", "--output")

    p = add("scheme", cmd_scheme, "acyclic charging scheme for a reduced instance and tree")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("-o", "--output")

    p = add("spanner", cmd_spanner, "greedy spanner on a reduced instance")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--eps", type=_positive, required=True)
    p.add_argument("--no-force", action="store_true", help="do not force the tree edges")
    p.add_argument("-o", "--output")

    p = add("lift", cmd_lift, "map a reduced-graph spanner back to the original graph")
    p.add_argument("-i", "--input", required=True, help="spanner JSON on the reduced graph")
    p.add_argument("--reduced", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--original", required=True)
    p.add_argument("-o", "--output")

    p = add("pipeline", cmd_pipeline, "run every stage and certify the result")
    p.add_argument("-i", "--input", nargs="*")
    p.add_argument("--glob")
    p.add_argument("--eps", type=_positive, action="append")
    p.add_argument("--tree-mode", choices=TREE_MODES, default="lightest")
    p.add_argument("--no-force", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("--csv")

    p = add("verify", cmd_verify, "check graph, decomposition, tree, scheme and spanner files")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--tree")
    p.add_argument("--scheme")
    p.add_argument("--v", help="scheme value to check condition (3) against")
    p.add_argument("--cyclic", action="store_true", help="skip conditions (4) and (5)")
    p.add_argument("--spanner")
    p.add_argument("--eps", type=_positive)
    p.add_argument("--require-tree", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "pipeline" and not args.eps:
        args.eps = [0.5]
    try:
        return args.func(args)
    except CertificationFailure as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return FAILED
    except (SchemeError, MonotoneError) as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return FAILED
    except (jsonio.InputError, GraphError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
