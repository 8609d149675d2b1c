"""Command-line front end.

Subcommands: sector, bounds, thresholds, puzzle, tables, verify. Exit status
is 0 on success, 1 on a failed verification or a brute/analytic mismatch and
2 on bad input.
"""

import argparse
import sys
from typing import List, Optional

from .bounds import MODES, bounds_csv
from .graphs import AdjacencyMatrix, make_family, read_graph
from .sectors import (
    SectorDistribution,
    ame4_analytic,
    distribution_csv,
    family_full_body,
    ghz_analytic,
    puzzle_colorings,
    sector_brute,
)
from .thresholds import CRITERIA, reports_csv, reports_json, resolve_state, threshold_table
from .verify import run_suite

TABLE_FAMILIES = ("star", "dandelion", "line", "ring")
_MIN_N = {"star": 2, "line": 2, "ring": 3, "dandelion": 5}


class UsageError(Exception):
    pass


def _graph_from_args(args) -> AdjacencyMatrix:
    if args.graph:
        return read_graph(args.graph)
    if args.family is None or args.n is None:
        raise UsageError("give --graph FILE or --family KIND --n N")
    return make_family(args.family, args.n, args.d)


def analytic_distribution(family: Optional[str], G: AdjacencyMatrix) -> SectorDistribution:
    """Closed-form sector lengths; entries without a closed form are None."""
    D, n = G.D, G.n
    if family == "star":
        return ghz_analytic(D, n)
    if family == "ame4_ring" and D % 2 == 1:
        return ame4_analytic(D)
    if family in ("line", "ring", "dandelion") and D == 2:
        vals = [None] * (n + 1)
        vals[0] = 1
        vals[n] = family_full_body(family, n)
        return SectorDistribution(D, n, tuple(vals))
    raise UsageError(f"no closed form for this state (family={family}, D={D})")


def cmd_sector(args) -> int:
    G = _graph_from_args(args)
    family = None if args.graph else args.family
    if args.method == "brute":
        print(distribution_csv([sector_brute(G)]), end="")
        return 0
    ana = analytic_distribution(family, G)
    if args.method == "analytic":
        print(distribution_csv([ana]), end="")
        return 0
    brute = sector_brute(G)
    bad = [j for j, v in enumerate(ana.values) if v is not None and v != brute[j]]
    if bad:
        for j in bad:
            print(f"mismatch at j={j}: analytic {ana[j]} vs brute {brute[j]}", file=sys.stderr)
        return 1
    print(distribution_csv([brute]), end="")
    return 0


def cmd_bounds(args) -> int:
    mode = "qubit_tight" if args.qubit_tight else "generic"
    print(bounds_csv(args.d, args.n, mode), end="")
    return 0


def cmd_thresholds(args) -> int:
    state = resolve_state(args.state)
    criteria = None
    if args.criteria:
        criteria = [c.strip() for c in args.criteria.split(",") if c.strip()]
        unknown = [c for c in criteria if c not in CRITERIA]
        if unknown:
            raise UsageError(f"unknown criteria {unknown}; choose from {', '.join(CRITERIA)}")
    reports = threshold_table(state, args.model, criteria)
    print(reports_json(reports) if args.format == "json" else reports_csv(reports), end="")
    return 0


def cmd_puzzle(args) -> int:
    G = read_graph(args.graph)
    count, sols = puzzle_colorings(G, args.list)
    print(f"count {count}")
    for s in sols or []:
        print(s)
    return 0


def family_table_csv(family: str, max_n: int, D: int = 2) -> str:
    lo = _MIN_N[family]
    if max_n < lo:
        raise UsageError(f"{family} needs --max-n >= {lo}")
    rows = [sector_brute(make_family(family, n, D)) for n in range(lo, max_n + 1)]
    head = ["family", "D", "n"] + [f"l{j}" for j in range(max_n + 1)]
    lines = [",".join(head)]
    for d in rows:
        cells = [family, str(D), str(d.n)] + [str(v) for v in d.values] + [""] * (max_n - d.n)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def cmd_tables(args) -> int:
    print(family_table_csv(args.family, args.max_n, args.d), end="")
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.deep)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qudit-sectors",
                                     description="Sector lengths, separability bounds and noise thresholds "
                                                 "for qudit graph states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sector", help="sector length distribution as CSV")
    p.add_argument("--graph", help="graph file (first line `D n`, then `i j w`)")
    p.add_argument("--family", choices=("star", "line", "ring", "dandelion", "ame4_ring"))
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--method", choices=("brute", "analytic", "both"), default="brute")
    p.set_defaults(func=cmd_sector)

    p = sub.add_parser("bounds", help="separability bounds for every partition of n")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--qubit-tight", action="store_true", help="use the tight qubit full-body bound per block")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("thresholds", help="noise threshold report")
    p.add_argument("--state", required=True, help="ghz:D,n | ame4:D | family:KIND,n,D | graph:PATH")
    p.add_argument("--model", choices=("global", "local"), required=True)
    p.add_argument("--criteria", help="comma-separated subset of: " + ", ".join(CRITERIA))
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("puzzle", help="count colourings of a qubit graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--list", action="store_true", help="also print every colouring (vertex 1 first, 1 = black)")
    p.set_defaults(func=cmd_puzzle)

    p = sub.add_parser("tables", help="sector distributions of one family for growing n")
    p.add_argument("--family", choices=TABLE_FAMILIES, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="run the dense cross-check suite")
    p.add_argument("--deep", action="store_true", help="include larger cases")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "sector" and args.graph and args.family:
        print("error: --graph and --family are exclusive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
