"""Command-line entry point.

Exit codes: 0 success (no counterexample), 1 usage error, 2 invalid input,
3 counterexample found (or a failed property in ``verify``).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from typing import Any, Optional, Sequence

from . import __version__
from .conjecture import (
    DEFAULT_DENSITIES,
    DEFAULT_MAX_CANDIDATES,
    DEFAULT_MAX_NODES,
    SearchError,
    SearchOutcome,
    counterexample_random_search,
    counterexample_search,
)
from .enumeration import DEFAULT_TREE_CAP, CapExceeded, all_spanning_trees, exact_minimize, local_search
from .graph import Graph, GraphError, SpanningTree, star_tree, tree_from_pairs
from .instance_io import format_instance, parse_graph6, parse_instance
from .intersection import intersection_report
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _digest(data: Any) -> str:
    raw = json.dumps(data, sort_keys=False, separators=(",", ":")).encode()
    return hashlib.sha256(raw).hexdigest()


def _load(args: argparse.Namespace) -> tuple[Graph, Optional[list[tuple[int, int]]], str]:
    with open(args.graph, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()
    text = raw.decode("utf-8")
    if args.graph6:
        graphs = parse_graph6(text)
        if not 0 <= args.index < len(graphs):
            raise GraphError(f"graph6 file has {len(graphs)} graphs; index {args.index} out of range")
        return graphs[args.index], None, digest
    g, tree = parse_instance(text)
    return g, tree, digest


def _tree(g: Graph, pairs, args: argparse.Namespace) -> Optional[SpanningTree]:
    if getattr(args, "star", None) is not None:
        return star_tree(g, args.star)
    if pairs is not None:
        return tree_from_pairs(g, pairs, 0)
    return None


def _csv(rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# Subcommands return (results, csv_rows, exit_code, input_digest, seed).

def cmd_compute(args):
    g, pairs, digest = _load(args)
    t = _tree(g, pairs, args)
    if t is None:
        raise GraphError("no tree given: add a 'tree' section or pass --star")
    report = intersection_report(g, t)
    results = {"tree": t.pairs(), **report.as_dict()}
    rows = [["u", "w", "length", "intersections", "internal", "external", "transit"]]
    rows += [[*e.ends, e.length, e.intersections, e.internal, e.external, e.transit] for e in report.per_cycle]
    rows.append(["total", "", "", report.total, "", "", ""])
    return results, rows, EXIT_OK, digest, None


def cmd_optimal(args):
    g, _, digest = _load(args)
    best = exact_minimize(g, cap=args.cap)
    results = best.as_dict()
    results["count"] = len(best.minimizers)
    rows = [["best_value", "minimizer", "edges"]]
    rows += [[best.best_value, i, " ".join(f"{u}-{w}" for u, w in t.pairs())] for i, t in enumerate(best.minimizers)]
    return results, rows, EXIT_OK, digest, None


def cmd_local_search(args):
    g, pairs, digest = _load(args)
    t0 = _tree(g, pairs, args) or next(all_spanning_trees(g))
    best = local_search(g, t0)
    results = {"start": t0.pairs(), **best.as_dict()}
    rows = [["step", "value"]] + [[i, v] for i, v in enumerate(best.trace)]
    return results, rows, EXIT_OK, digest, None


def _search_rows(out: SearchOutcome, timing: bool) -> list[list[Any]]:
    head = ["nodes", "instances", "counterexamples", "equalities", "min_margin", "seed"]
    row = [out.n, out.instances, len(out.counterexamples), out.equalities, out.min_margin, out.seed if out.seed is not None else ""]
    if timing:
        head.append("wall_time")
        row.append(round(out.wall_time, 6))
    return [head, row]


def _finish_search(out: SearchOutcome, args):
    results = out.as_dict(timing=not args.no_timing)
    code = EXIT_OK
    if out.counterexamples:
        code = EXIT_COUNTEREXAMPLE
        first = out.counterexamples[0]
        text = format_instance(first.graph(), first.tree_edges)
        dump = args.dump or f"mstci-counterexample-n{out.n}.txt"
        with open(dump, "w", encoding="utf-8") as fh:
            fh.write(text)
        results["dumped_to"] = dump
    return results, _search_rows(out, not args.no_timing), code


def cmd_search_small(args):
    if args.nodes < 4:
        raise UsageError("--nodes must be at least 4")
    if args.nodes > args.max_nodes:
        raise UsageError(f"--nodes {args.nodes} exceeds --max-nodes {args.max_nodes}")
    out = counterexample_search(args.nodes, args.max_nodes, args.max_candidates, jobs=args.jobs)
    results, rows, code = _finish_search(out, args)
    return results, rows, code, None, None


def _densities(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad density list {text!r}") from None
    if not values or any(not 0.0 < p <= 1.0 for p in values):
        raise argparse.ArgumentTypeError(f"densities must lie in (0, 1], got {text!r}")
    return values


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MSTCI_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"MSTCI_SEED must be an integer, got {env!r}") from None


def cmd_search_random(args):
    if args.nodes < 4:
        raise UsageError("--nodes must be at least 4")
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    seed = _seed(args)
    out = counterexample_random_search(args.nodes, args.samples, args.densities, seed, jobs=args.jobs)
    results, rows, code = _finish_search(out, args)
    return results, rows, code, None, seed


def cmd_verify(args):
    seed = _seed(args)
    checks = run_suite(args.suite, seed)
    results = {"suite": args.suite, "checks": [c.as_dict() for c in checks], "passed": all(c.passed for c in checks)}
    rows = [["property", "passed", "cases"]] + [[c.name, c.passed, c.cases] for c in checks]
    code = EXIT_OK if results["passed"] else EXIT_COUNTEREXAMPLE
    return results, rows, code, None, seed


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--no-timing", action="store_true", help="omit wall times so reports replay byte for byte")

    graph_in = _Parser(add_help=False)
    graph_in.add_argument("graph", help="instance file (or graph6 with --graph6)")
    graph_in.add_argument("--graph6", action="store_true", help="read the file as graph6, one graph per line")
    graph_in.add_argument("--index", type=int, default=0, help="which graph6 line to use")

    parallel = _Parser(add_help=False)
    parallel.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parallel.add_argument("--dump", help="where to write a counterexample instance")

    parser = _Parser(prog="mstci", description="Spanning tree cycle intersection workbench.")
    parser.add_argument("--version", action="version", version=f"mstci {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", parents=[common, graph_in], help="intersection numbers of one tree")
    p.add_argument("--star", type=int, help="use the star tree at this vertex")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("optimal", parents=[common, graph_in], help="all minimising spanning trees")
    p.add_argument("--cap", type=int, default=DEFAULT_TREE_CAP)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("local-search", parents=[common, graph_in], help="steepest descent over edge swaps")
    p.add_argument("--star", type=int, help="start from the star tree at this vertex")
    p.set_defaults(func=cmd_local_search)

    p = sub.add_parser("search-small", parents=[common, parallel], help="exhaustive counterexample search")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES)
    p.set_defaults(func=cmd_search_small)

    p = sub.add_parser("search-random", parents=[common, parallel], help="randomised counterexample search")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, help="defaults to $MSTCI_SEED, then 0")
    p.add_argument("--densities", type=_densities, default=DEFAULT_DENSITIES)
    p.set_defaults(func=cmd_search_random)

    p = sub.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--seed", type=int, help="defaults to $MSTCI_SEED, then 0")
    p.set_defaults(func=cmd_verify)
    return parser


def _parameters(args: argparse.Namespace) -> dict:
    skip = {"func", "command", "format", "output", "no_timing", "jobs", "dump"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = list(value) if isinstance(value, tuple) else value
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help/--version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    start = time.perf_counter()
    try:
        results, rows, code, digest, seed = args.func(args)
    except UsageError as exc:
        print(f"mstci: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, SearchError, CapExceeded, OSError, UnicodeDecodeError) as exc:
        message = str(exc)
        if isinstance(exc, CapExceeded):
            message += " (try: mstci local-search)"
        print(f"mstci: {message}", file=sys.stderr)
        return EXIT_INPUT

    if args.format == "csv":
        text = _csv(rows)
    else:
        report = {
            "command": args.command,
            "parameters": _parameters(args),
            "version": __version__,
            "input_digest": digest,
            "seed": seed,
            "results": results,
            "result_digest": _digest({k: v for k, v in results.items() if k != "wall_time"}),
        }
        if not args.no_timing:
            report["wall_time"] = round(time.perf_counter() - start, 6)
        text = json.dumps(report, indent=2) + "\n"

    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
