"""Command line: ``nucifera {verify,search,iso,groups,report}``.

Exit codes: 0 success (nuciferous / isomorphic / valid), 1 negative
verdict, 2 usage or parse error, 3 internal exactness violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import shutil
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .canon import is_isomorphic
from .cayley import GraphError
from .certify import (ExactnessNotGuaranteed, ExactnessViolation, certified_range,
                      is_nuciferous)
from .graphio import load_graph, to_graph6
from .groups import GroupError, parse_group_spec, parse_table_text, validate_table
from .search import (TABLE1_GROUPS, SearchError, group_dir, rebuild_from_results, search_group,
                     write_results)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("nucifera")


def data_path(name: str) -> Path:
    return Path(str(resources.files("nucifera") / "data" / name))


def table2_printed_inverse() -> list[list[int]]:
    """The 24x24 integer matrix ``21 * A^-1`` of the bundled Table 2 graph."""
    text = data_path("table2_inverse21.txt").read_text()
    return [[int(t) for t in line.split()] for line in text.splitlines() if line.strip()]


def table1_expected() -> str:
    return data_path("table1.csv").read_text()


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    default = args.path is None
    path = data_path("table2.adj") if default else Path(args.path)
    graph = load_graph(path)
    cert = is_nuciferous(graph)
    status = EXIT_OK if cert.nuciferous else EXIT_NEGATIVE
    matches = None
    if default:
        printed = table2_printed_inverse()
        inv = cert.inverse()
        matches = all(inv[i][j] * 21 == printed[i][j] for i in range(24) for j in range(24))
        if not matches:
            status = EXIT_NEGATIVE
    if args.format == "json":
        d = {"file": str(path), **cert.to_dict()}
        if matches is not None:
            d["matches_printed_inverse"] = matches
        print(json.dumps(d, indent=1))
        return status
    print(f"file: {path}")
    if args.format == "graph6":
        print(f"graph6: {to_graph6(graph)}")
    print(f"n: {graph.n}  degree: {graph.degree if graph.degree is not None else 'irregular'}")
    print(f"det: {cert.det}")
    extra = f" {cert.witness}" if cert.witness else ""
    print(f"verdict: {cert.verdict.value}{extra}")
    if matches is not None:
        print(f"21*A^-1 matches printed matrix: {'yes' if matches else 'NO'}")
    if args.inverse and cert.det != 0:
        print("A^-1:")
        for row in cert.inverse():
            print(" ".join(_fmt_frac(x) for x in row))
    return status


# ---------------------------------------------------------------- search

def _progress(name: str):
    def report(done: int, total: int) -> None:
        if done == total or done % max(1, total // 16) == 0:
            log.info("%s: block %d/%d", name, done, total)
    return report


def cmd_search(args) -> int:
    specs = list(args.group or [])
    if args.table1:
        specs += [s for s in TABLE1_GROUPS if s not in specs]
    if not specs:
        raise GroupError("no groups given (use --group SPEC or --table1)", axiom="syntax")
    if args.jobs < 1:
        raise GroupError("--jobs must be at least 1", axiom="syntax")
    groups = [parse_group_spec(s) for s in specs]
    out = Path(args.out)
    reports = []
    for g in groups:
        dmax = g.order - 1 if args.degree_max is None else min(args.degree_max, g.order - 1)
        if args.degree_min > dmax:
            raise GroupError(f"empty degree range {args.degree_min}..{dmax}", axiom="syntax")
        ck = group_dir(out, g.order, g.name)
        if not args.resume and (ck / "resume.json").exists():
            (ck / "resume.json").unlink()
            shutil.rmtree(ck / "blocks", ignore_errors=True)
        rep = search_group(g, args.degree_min, dmax, jobs=args.jobs, prune=not args.no_prune,
                           checkpoint_dir=ck, progress=_progress(g.name), seed=args.seed)
        log.info("%s done: %d hits in %.1fs", g.name, len(rep.records), rep.wall_time)
        reports.append(rep)
    # stale hit files from earlier runs would leak into ``report``
    for rep in reports:
        shutil.rmtree(group_dir(out, rep.order, rep.group) / "hits", ignore_errors=True)
    csv, totals = write_results(reports, out)
    if args.format == "json":
        print(json.dumps([r.to_dict(timing=True) for r in reports], indent=1))
    else:
        sys.stdout.write(csv)
        sys.stdout.write(totals)
    if args.check_table1:
        return _check_table1(csv)
    return EXIT_OK


def _check_table1(csv: str) -> int:
    expected = table1_expected()
    if csv == expected:
        print("table1: match")
        return EXIT_OK
    print("table1: MISMATCH")
    want, got = set(expected.splitlines()), set(csv.splitlines())
    for line in sorted(want - got):
        print(f"  missing  {line}")
    for line in sorted(got - want):
        print(f"  extra    {line}")
    return EXIT_NEGATIVE


# ---------------------------------------------------------------- iso

def cmd_iso(args) -> int:
    g, h = load_graph(args.path_a), load_graph(args.path_b)
    iso, mapping = is_isomorphic(g, h, witness=True)
    print("isomorphic" if iso else "non-isomorphic")
    if iso and args.witness:
        print(" ".join(f"{v}->{w}" for v, w in enumerate(mapping)))
    return EXIT_OK if iso else EXIT_NEGATIVE


# ---------------------------------------------------------------- groups

def cmd_groups(args) -> int:
    if args.action == "list":
        print("C(n)   cyclic group of order n, 1 <= n <= 64")
        print("D(n)   dihedral group of order n (n even, 4 <= n <= 64)")
        print("S(k)   symmetric group on k points, k <= 4")
        print("A(k)   alternating group on k points, k <= 5")
        print("G x H  direct product, total order <= 64")
        print(f"exact certification range: order <= {certified_range()}")
        print("Table 1 groups: " + "; ".join(TABLE1_GROUPS))
        return EXIT_OK
    if args.action == "show":
        if not args.target:
            raise GroupError("groups show needs a group spec", axiom="syntax")
        sys.stdout.write(parse_group_spec(args.target).to_text())
        return EXIT_OK
    if not args.target:
        raise GroupError(f"groups {args.action} needs a table file", axiom="syntax")
    text = Path(args.target).read_text()
    try:
        g = validate_table(parse_table_text(text), name=Path(args.target).stem)
    except GroupError as exc:
        print(f"invalid: {exc}")
        if exc.witness:
            print(f"witness: {' '.join(map(str, exc.witness))}")
        return EXIT_NEGATIVE
    orders = g.element_orders()
    print(f"valid: order {g.order}, {sum(1 for o in orders if o == 2)} involutions, "
          f"abelian: {'yes' if all(g.mul[a][b] == g.mul[b][a] for a in range(g.order) for b in range(a)) else 'no'}")
    if args.action == "import" and args.out_file:
        Path(args.out_file).write_text(g.to_text())
        print(f"written: {args.out_file}")
    return EXIT_OK


# ---------------------------------------------------------------- report

def cmd_report(args) -> int:
    root = Path(args.results_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"no results directory {root}")
    _, csv, totals = rebuild_from_results(root)
    sys.stdout.write(csv)
    sys.stdout.write(totals)
    status = EXIT_OK
    stored = root / "totals.txt"
    if stored.exists() and (stored.read_text() != totals or (root / "table1.csv").read_text() != csv):
        print("stored summary differs from the rebuilt one")
        status = EXIT_NEGATIVE
    if args.check_table1:
        status = max(status, _check_table1(csv))
    return status


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nucifera", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="certify one graph (default: the bundled 24-vertex example)")
    v.add_argument("path", nargs="?", help="graph6 or 0/1 adjacency text file")
    v.add_argument("--format", choices=["adj", "json", "graph6"], default="adj",
                   help="adj: readable text (default); graph6: also print the graph6 string; json: full certificate record")
    v.add_argument("--inverse", action="store_true", help="print exact A^-1 as fractions")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="exhaustive search over one or more groups")
    s.add_argument("--group", action="append", metavar="SPEC", help='e.g. "D(12) x C(2)"; repeatable')
    s.add_argument("--table1", action="store_true", help="search all groups of Table 1")
    s.add_argument("--degree-min", type=int, default=0)
    s.add_argument("--degree-max", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", default=os.environ.get("NUCIFERA_OUT", "nucifera-results"))
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--resume", action="store_true", help="skip blocks finished by an earlier run")
    s.add_argument("--no-prune", action="store_true", help="also certify non-generating sets")
    s.add_argument("--check-table1", action="store_true", help="compare the CSV with Table 1")
    s.add_argument("--seed", type=int, default=None,
                   help="shuffle block dispatch order; results are identical for every seed")
    s.set_defaults(func=cmd_search)

    i = sub.add_parser("iso", help="isomorphism test of two graph files")
    i.add_argument("path_a")
    i.add_argument("path_b")
    i.add_argument("--witness", action="store_true", help="print a verified vertex bijection")
    i.set_defaults(func=cmd_iso)

    g = sub.add_parser("groups", help="list builders, show or validate multiplication tables")
    g.add_argument("action", choices=["list", "show", "validate", "import"])
    g.add_argument("target", nargs="?", help="group spec (show) or table file (validate/import)")
    g.add_argument("--out", dest="out_file", help="import: write the normalized table here")
    g.set_defaults(func=cmd_groups)

    r = sub.add_parser("report", help="re-certify a results directory and rebuild the tables")
    r.add_argument("results_dir")
    r.add_argument("--check-table1", action="store_true")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ExactnessViolation, AssertionError) as exc:
        print(f"internal exactness violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (GroupError, GraphError, ExactnessNotGuaranteed, SearchError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
