"""netclique command line.

Exit codes: 0 pass, 1 falsification, 2 usage, 3 resource cap.
"""

from __future__ import annotations

import argparse
import inspect
import json
import math
import os
import signal
import sys

from .autgroup import GroupError
from .cliques import DEFAULT_MAX_CLIQUES, ResourceCapError
from .gf import FieldError
from .netgraph import (
    GraphError,
    NetSpec,
    build_net_graph,
    build_paley,
    build_peisert,
    build_taylor,
    check_srg,
    export_graph,
    ingest_graph,
    intersection_array,
)
from .structure import TheoremViolation
from .tables import FAMILIES, compute_row, format_rows, graph_row, smallest_row
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FALSIFIED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _r_values(args) -> list[int]:
    rs = list(args.rs or [])
    if getattr(args, "r", None):
        rs += args.r
    for q in getattr(args, "q", None) or []:
        r = math.isqrt(q)
        if r * r != q:
            raise UsageError(f"q = {q} is not a square")
        rs.append(r)
    return rs


def _directions(args, r):
    if args.directions:
        return [int(t) for t in args.directions.split(",") if t.strip()]
    if args.m is not None:
        return NetSpec.canonical(r, args.m).sorted_directions()
    raise UsageError("family 'net' needs --directions or --m")


def cmd_table(args) -> int:
    common = {"max_cliques": args.max_cliques, "jobs": args.jobs}
    rows = []
    if args.family == "graph":
        if not args.graph:
            raise UsageError("family 'graph' needs --graph PATH")
        g = ingest_graph(args.graph)
        rows.append(graph_row(g, group=args.group or "brute", generators=args.generators, **common))
    else:
        rs = _r_values(args)
        if not rs:
            raise UsageError("give at least one r (positional, --r or --q)")
        for r in rs:
            kw = dict(common)
            if args.family == "net":
                kw["directions"] = _directions(args, r)
                kw["group"] = args.group or "closed-form"
            elif args.family == "peisert":
                kw["group"] = args.group
                kw["allow_subgroup"] = args.allow_subgroup
            elif args.family == "taylor-paley":
                kw["group"] = args.group
            else:
                kw["group"] = args.group or "closed-form"
            if kw.get("group") == "file":
                raise UsageError("--group file is only supported with family 'graph'")
            rows.append(compute_row(args.family, r, **kw))
    print(format_rows(rows, args.format))
    for row in rows:
        for flag in row.flags:
            print(f"warning: r={row.r}: {flag}", file=sys.stderr)
    return EXIT_OK


def cmd_smallest(args) -> int:
    rs = _r_values(args)
    if not rs:
        raise UsageError("give at least one r")
    rows = [smallest_row(args.family, r, max_cliques=args.max_cliques, jobs=args.jobs) for r in rs]
    print(format_rows(rows, args.format))
    return EXIT_OK


def _suite_params(name: str, args) -> dict:
    from . import verify

    fn = getattr(verify, f"suite_{name}")
    accepted = inspect.signature(fn).parameters
    params = {}
    rs = _r_values(args)
    if rs and "rs" in accepted:
        params["rs"] = tuple(rs)
    if args.r_max is not None:
        if "r_max" in accepted:
            params["r_max"] = args.r_max
        elif "rs" in accepted and not rs:
            raise UsageError(f"suite {name} takes --r, not --r-max")
    elif rs and "r_max" in accepted:
        params["r_max"] = max(rs)
    if args.m is not None and "ms" in accepted and not args.all_m:
        params["ms"] = (args.m,)
    return params


def cmd_verify(args) -> int:
    report = run_suite(args.suite, **_suite_params(args.suite, args))
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=1))
    else:
        print(report.summary())
        for c in report.failures:
            print(f"FAIL {json.dumps(c.params)} {json.dumps(c.detail)}")
    if report.failures:
        if args.witness_dir:
            os.makedirs(args.witness_dir, exist_ok=True)
            path = os.path.join(args.witness_dir, f"witnesses-{args.suite}.json")
            with open(path, "w") as fh:
                json.dump([{"params": c.params, **c.detail} for c in report.failures], fh, indent=1)
            print(f"witnesses written to {path}", file=sys.stderr)
        return EXIT_FALSIFIED
    return EXIT_OK


def _build(args):
    from .gf import field_of_order

    rs = _r_values(args)
    if len(rs) != 1:
        raise UsageError("give exactly one r")
    r = rs[0]
    F = field_of_order(r * r)
    if args.family == "paley":
        return build_paley(F)[0]
    if args.family == "peisert":
        return build_peisert(F)
    if args.family == "taylor-paley":
        return build_taylor(build_paley(F)[0])
    if args.family == "net":
        return build_net_graph(F, NetSpec(r, frozenset(_directions(args, r))))
    raise UsageError(f"cannot build family {args.family!r}")


def cmd_export(args) -> int:
    g = _build(args)
    text = export_graph(g)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_ingest(args) -> int:
    g = ingest_graph(args.path)
    info = {"vertices": g.n, "edges": g.n_edges()}
    srg = check_srg(g)
    info["srg"] = list(srg.as_tuple()) if srg else None
    if not srg:
        info["srg_failure"] = srg.reason
    if args.drg:
        ia = intersection_array(g)
        info["intersection_array"] = [list(ia[0]), list(ia[1])] if ia else None
    print(json.dumps(info))
    return EXIT_OK


def _add_common(p, r_positional=True):
    if r_positional:
        p.add_argument("rs", nargs="*", type=int, metavar="R", help="values of r (graphs on r^2 points)")
    p.add_argument("--r", type=int, action="append", help="value of r (repeatable)")
    p.add_argument("--q", type=int, action="append", help="field order q = r^2 (repeatable)")
    p.add_argument("--m", type=int, help="net degree (canonical directions 0..m-1)")
    p.add_argument("--directions", help="comma list of direction classes mod r+1")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    p.add_argument("--max-cliques", type=int, default=DEFAULT_MAX_CLIQUES)
    p.add_argument("--max-seconds", type=float, default=None, help="wall-clock cap (exit 3)")
    p.add_argument("--format", choices=("paper", "json", "tsv"), default="paper")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netclique", description="Maximal cliques in Desarguesian net graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="orbit table of maximal clique sizes")
    t.add_argument("family", choices=FAMILIES)
    _add_common(t)
    t.add_argument("--group", choices=("closed-form", "brute", "file"))
    t.add_argument("--generators", help="generator file (lines 'a b i') for --group file")
    t.add_argument("--allow-subgroup", action="store_true", help="accept orbit counts under a known proper subgroup")
    t.add_argument("--graph", help="edge-list file for family 'graph'")
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("smallest", help="smallest maximal cliques and their orbit count")
    s.add_argument("family", choices=("paley", "peisert"))
    _add_common(s)
    s.set_defaults(func=cmd_smallest)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    _add_common(v, r_positional=False)
    v.set_defaults(rs=None)
    v.add_argument("--r-max", type=int)
    v.add_argument("--all-m", action="store_true", help="every degree m (the default)")
    v.add_argument("--witness-dir", help="directory for JSON witness dumps on failure")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="write a graph as an edge list")
    e.add_argument("family", choices=("paley", "peisert", "taylor-paley", "net"))
    _add_common(e)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export)

    i = sub.add_parser("ingest", help="read an edge list and report its parameters")
    i.add_argument("path")
    i.add_argument("--drg", action="store_true", help="also compute the intersection array")
    i.set_defaults(func=cmd_ingest, max_seconds=None)
    return ap


def _alarm(signum, frame):
    raise ResourceCapError("wall-clock cap reached")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "max_seconds", None):
        signal.signal(signal.SIGALRM, _alarm)
        signal.setitimer(signal.ITIMER_REAL, args.max_seconds)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except TheoremViolation as exc:
        print(f"falsified: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except (UsageError, GraphError, GroupError, FieldError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if getattr(args, "max_seconds", None):
            signal.setitimer(signal.ITIMER_REAL, 0)


if __name__ == "__main__":
    sys.exit(main())
