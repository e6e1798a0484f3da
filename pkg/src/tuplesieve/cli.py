"""Command-line front end.

Subcommands: search (generic pattern search), twins, quads, chains,
pseudosquares.  Searches print one line per tuple, `x f_1 ... f_k` in
decimal, then a `count=` summary; censuses add `sum=`.  Exit status is
0 on success, 2 on configuration errors, 3 on table-capacity errors.
"""

import argparse
import sys

from .apsieve import EarlyAbort, PlanError
from .apps import chain_search, smallest_chain
from .pattern import PatternError, chain_pattern, parse_pattern
from .primality import (
    EMBEDDED_TABLE,
    TableCapacityError,
    compute_pseudosquares,
    save_table,
)
from .search import CheckpointError, SearchConfig, run_striped
from .wheel import WheelError


def _add_search_options(p, with_pattern=True):
    if with_pattern:
        p.add_argument("--pattern", required=True,
                       help="comma-separated forms, e.g. 'x,x+2,x+6,x+8' or '6x+1,12x+1,18x+1'")
        p.add_argument("--n", required=True, type=int, help="search bound: max form value")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--sieve-bound", type=int, metavar="B",
                       help="explicit sieve bound (use sqrt(n) to avoid prime tests)")
    group.add_argument("--space-exp", type=float, metavar="C",
                       help="space exponent c > 2; sieve bound becomes 2^floor(log2(n)/c)")
    p.add_argument("--wheel-limit", type=int, help="cap on the wheel modulus product (default n/B)")
    p.add_argument("--workers", type=int, default=1, metavar="NU",
                   help="stripe the residues across NU logical workers")
    p.add_argument("--exclude-wheel-prime", type=int, action="append", default=[],
                   metavar="P", help="keep P out of the wheel (repeatable)")
    p.add_argument("--checkpoint", metavar="FILE", help="write (and resume from) this checkpoint file")
    p.add_argument("--checkpoint-interval", type=float, default=900.0, metavar="SEC")
    p.add_argument("--no-early-abort", action="store_true",
                   help="always sieve to the full bound before testing")
    p.add_argument("--unsorted", action="store_true",
                   help="stream tuples in discovery order instead of sorting")
    p.add_argument("--out", metavar="FILE", help="write tuple lines here instead of stdout")


def _config_from(args, pattern, n):
    return SearchConfig(
        pattern=pattern,
        n=n,
        nu=args.workers,
        sieve_bound=args.sieve_bound,
        space_exp=args.space_exp,
        wheel_limit=args.wheel_limit,
        excluded_wheel_primes=frozenset(args.exclude_wheel_prime),
        early_abort=EarlyAbort(enabled=not args.no_early_abort),
        checkpoint_interval=args.checkpoint_interval,
    )


def _run_search(cfg, args, show_sum=False):
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        emit = None
        if args.unsorted:
            def emit(x, vals):
                out.write(f"{x} {' '.join(map(str, vals))}\n")
        res = run_striped(cfg, checkpoint_path=args.checkpoint, on_tuple=emit)
        if not args.unsorted:
            for x in res.xs:
                vals = cfg.pattern.evaluate(x)
                out.write(f"{x} {' '.join(map(str, vals))}\n")
    finally:
        if args.out:
            out.close()
    print(f"count={res.count}")
    if show_sum:
        print(f"sum={res.recip_sum:.17g}")
    return 0


def _cmd_search(args):
    pattern = parse_pattern(args.pattern)
    cfg = _config_from(args, pattern, args.n)
    return _run_search(cfg, args)


def _cmd_twins(args):
    if args.x < 5:
        raise ValueError("twin census needs --x >= 5")
    from .apps import TWIN_PATTERN

    cfg = _config_from(args, TWIN_PATTERN, args.x + 1)
    return _run_census(cfg, args)


def _cmd_quads(args):
    if args.x < 2:
        raise ValueError("quadruplet census needs --x >= 2")
    if args.x <= 13:
        print("count=0")
        print("sum=0")
        return 0
    from .apps import QUAD_PATTERN

    cfg = _config_from(args, QUAD_PATTERN, args.x - 1)
    return _run_census(cfg, args)


def _run_census(cfg, args):
    out = open(args.out, "w") if args.out else None
    emit = None
    if out is not None or args.unsorted:
        sink = out or sys.stdout

        def emit(x, vals):
            sink.write(f"{x} {' '.join(map(str, vals))}\n")
    try:
        res = run_striped(cfg, checkpoint_path=args.checkpoint, on_tuple=emit)
    finally:
        if out is not None:
            out.close()
    print(f"count={res.count}")
    print(f"sum={res.recip_sum:.17g}")
    return 0


def _cmd_chains(args):
    if args.smallest:
        x = smallest_chain(args.kind, args.length, args.cap)
        if x is None:
            print("count=0")
            return 0
        vals = chain_pattern(args.kind, args.length).evaluate(x)
        print(f"{x} {' '.join(map(str, vals))}")
        print("count=1")
        return 0
    progress = None
    if args.progress:
        def progress(done):
            print(f"progress: {done} residues", file=sys.stderr)
    starts = chain_search(args.kind, args.length, args.cap,
                          nu=args.workers, progress=progress)
    pattern = chain_pattern(args.kind, args.length)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for x in starts:
            out.write(f"{x} {' '.join(map(str, pattern.evaluate(x)))}\n")
    finally:
        if args.out:
            out.close()
    print(f"count={len(starts)}")
    return 0


def _cmd_pseudosquares(args):
    covered = EMBEDDED_TABLE.entries[-1][1]
    if args.limit <= covered:
        from .primality import PseudosquareTable

        table = PseudosquareTable(
            tuple((p, L) for p, L in EMBEDDED_TABLE.entries if L <= args.limit)
        )
    else:
        print(
            f"note: limit {args.limit} exceeds the shipped table "
            f"({covered}); falling back to the exhaustive generator, which "
            f"scans every candidate and is impractical much past 10^8",
            file=sys.stderr,
        )
        table = compute_pseudosquares(args.limit)
    if args.out:
        save_table(table, args.out)
    else:
        print("PSQ v1")
        for p, L in table.entries:
            print(f"{p} {L}")
    print(f"count={len(table.entries)}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="tuplesieve",
        description="Find all x <= bound where every form of a linear pattern is prime.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="search an arbitrary pattern")
    _add_search_options(p)
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("twins", help="twin pairs (p, p+2) with p < X, with reciprocal sum")
    p.add_argument("--x", required=True, type=int, dest="x")
    _add_search_options(p, with_pattern=False)
    p.set_defaults(fn=_cmd_twins)

    p = sub.add_parser("quads", help="quadruplets (p,p+2,p+6,p+8) with largest member < X")
    p.add_argument("--x", required=True, type=int, dest="x")
    _add_search_options(p, with_pattern=False)
    p.set_defaults(fn=_cmd_quads)

    p = sub.add_parser("chains", help="Cunningham chain starts up to a cap")
    p.add_argument("--kind", required=True, choices=("first", "second"))
    p.add_argument("--length", required=True, type=int)
    p.add_argument("--cap", required=True, type=int)
    p.add_argument("--smallest", action="store_true",
                   help="report only the least complete (unextendable) chain")
    p.add_argument("--progress", action="store_true",
                   help="report residue progress on stderr")
    _add_search_options(p, with_pattern=False)
    p.set_defaults(fn=_cmd_chains)

    p = sub.add_parser("pseudosquares", help="emit a pseudosquare table up to a limit")
    p.add_argument("--limit", required=True, type=int)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(fn=_cmd_pseudosquares)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except TableCapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (PatternError, PlanError, WheelError, CheckpointError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
