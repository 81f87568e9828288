"""Command-line interface: ``satisland <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cnf_core import DimacsError, read_dimacs
from .confined_search import confined_local_search, island_neighborhood_size
from .greedy_extract import Heuristic, island_extract
from .island_theory import DEFAULT_GUARD, GuardExceeded, format_count, is_island
from .oracle_harness import (
    InstanceReport,
    count_solutions,
    default_guard,
    reports_to_csv,
    reports_to_table,
    run_suite,
    stats_report,
)

HEURISTICS = [h.value for h in Heuristic]


def _count(text: str) -> int:
    """Accept plain integers and ``2^k`` / ``2**k``."""
    for sep in ("^", "**"):
        if text.startswith("2" + sep):
            return 1 << int(text[1 + len(sep):])
    return int(text)


def _guard(args) -> int:
    guard = args.guard if args.guard is not None else default_guard()
    if guard > DEFAULT_GUARD:
        print(f"note: enumeration budget raised to {guard} states", file=sys.stderr)
    return guard


def _projected(n: int, guard: int) -> None:
    size = f"2^{n}" if n >= 40 else f"2^{n} = {1 << n}"
    print(f"projected enumeration: {size} states (budget {format_count(guard)})", file=sys.stderr)


def _emit(reports: list[InstanceReport], fmt: str) -> None:
    if fmt == "json":
        for r in reports:
            print(r.to_json())
    elif fmt == "csv":
        sys.stdout.write(reports_to_csv(reports))
    else:
        print(reports_to_table(reports))


def cmd_extract(args) -> int:
    f = read_dimacs(args.file)
    res = island_extract(f, Heuristic.parse(args.heuristic))
    if args.format == "json":
        rec = res.to_record()
        rec["confined_degree"] = island_neighborhood_size(res)
        rec["primal_list"] = [lit.to_int() for lit in res.primal_list]
        print(json.dumps(rec))
    elif args.format == "csv":
        sys.stdout.write(res.to_csv_row(header=True))
    else:
        print(f"instance      {f.name}")
        print(f"clauses       {res.num_clauses}")
        print(f"island        {len(res.island)} ({res.coverage:.1f}%)")
        print(f"primal list   {len(res.primal_list)} literals")
        print(f"|n(L)|        {island_neighborhood_size(res)} of {f.num_vars}")
        print(f"seed          {res.seed}")
    return 0


def cmd_check_island(args) -> int:
    f = read_dimacs(args.file)
    guard = _guard(args)
    _projected(f.num_vars, guard)
    check = is_island(f, guard)
    out = {
        "instance": f.name,
        "island": check.is_island,
        "solutions": check.num_solutions,
        "components": check.num_components,
        "witness": [str(s) for s in check.witness] if check.witness else None,
    }
    print(json.dumps(out))
    return 0


def cmd_count(args) -> int:
    f = read_dimacs(args.file)
    guard = _guard(args)
    _projected(f.num_vars, guard)
    print(json.dumps({"instance": f.name, "model_count": count_solutions(f, guard)}))
    return 0


def cmd_stats(args) -> int:
    h = Heuristic.parse(args.heuristic)
    guard = _guard(args)
    reports = []
    for path in args.files:
        f = read_dimacs(path)
        if args.enumerate:
            _projected(f.num_vars, guard)
        reports.append(stats_report(f, h, args.enumerate, guard))
    _emit(reports, args.format)
    return 0


def cmd_solve(args) -> int:
    f = read_dimacs(args.file)
    res = island_extract(f, Heuristic.parse(args.heuristic))
    outcome = confined_local_search(f, res, budget=args.budget, rng_seed=args.seed, noise=args.noise)
    print(outcome.to_json(f.name))
    return 0 if outcome.solved else 1


def cmd_suite(args) -> int:
    guard = _guard(args)
    result = run_suite(args.paths, Heuristic.parse(args.heuristic), args.enumerate, guard, workers=args.workers)
    _emit(result.reports, args.format)
    mean = result.mean_coverage
    print(f"mean coverage: {'undefined' if mean is None else f'{mean:.1f}%'} over {len(result.reports)} instances",
          file=sys.stderr)
    for path, err in result.errors:
        print(f"error: {path}: {err}", file=sys.stderr)
    return 0 if result.ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satisland", description="Island extraction for DIMACS CNF instances.")
    parser.add_argument("--config", type=Path, help="JSON file with default option values")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = sub.choices

    def fmt(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", dest="format", action="store_const", const="json")
        g.add_argument("--csv", dest="format", action="store_const", const="csv")
        p.set_defaults(format="table")

    def heur(p):
        p.add_argument("--heuristic", choices=HEURISTICS, default="ratio")

    def guard(p):
        p.add_argument("--guard", type=_count, default=None, help="maximum number of states to enumerate")

    p = sub.add_parser("extract", help="extract an island")
    p.add_argument("file")
    heur(p)
    fmt(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("check-island", help="brute-force island test")
    p.add_argument("file")
    guard(p)
    p.set_defaults(func=cmd_check_island)

    p = sub.add_parser("count", help="exact model count by enumeration")
    p.add_argument("file")
    guard(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("stats", help="per-instance statistics")
    p.add_argument("files", nargs="+")
    p.add_argument("--enumerate", action="store_true", help="also count island space and models")
    heur(p)
    guard(p)
    fmt(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("solve", help="local search confined to the island")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0)
    heur(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("suite", help="statistics for every .cnf file in a directory")
    p.add_argument("paths", nargs="+")
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    heur(p)
    guard(p)
    fmt(p)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    parser = build_parser()
    if known.config is not None:
        # config values become defaults; flags on the command line still win
        config = {k.replace("-", "_"): v for k, v in json.loads(known.config.read_text()).items()}
        for sub in parser.subcommands.values():
            sub.set_defaults(**config)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DimacsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GuardExceeded as exc:
        print(f"error: {exc}; pass --guard {format_count(exc.required)} to override", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
