"""Command-line front end: altperm <seq|verify|suite|oracle|stats|cf> ...

Global flags may appear before or after the subcommand; ALTPERM_ORDER,
ALTPERM_CACHE_DIR, ALTPERM_THREADS and ALTPERM_N_CAP supply defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import stats
from .cheb import CFSpec, cf_eval
from .formulas import DomainError, FamilyKey, anomalies, raw_coefficients
from .harness import MISMATCH, SuiteConfig, load_suspects, run_checks, suspect_origin, verify, write_ledger
from .oracle import CountQuery, Oracle, OracleConfig, constraint_from_text
from .perm import ClassLabel
from .series import DEFAULT_ORDER

ENV = {"order": "ALTPERM_ORDER", "cache_dir": "ALTPERM_CACHE_DIR", "threads": "ALTPERM_THREADS", "n_cap": "ALTPERM_N_CAP"}


def _globals_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--order", type=int, default=argparse.SUPPRESS, help="series truncation order N")
    p.add_argument("--cache-dir", default=argparse.SUPPRESS, help="oracle disk cache directory")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="oracle worker threads")
    p.add_argument("--n-cap", type=int, default=argparse.SUPPRESS, help="largest n the oracle may enumerate")
    return p


def _resolve(args: argparse.Namespace) -> None:
    defaults = {"order": DEFAULT_ORDER, "cache_dir": None, "threads": 1, "n_cap": 10}
    for name, default in defaults.items():
        if hasattr(args, name):
            continue
        env = os.environ.get(ENV[name])
        if env is None:
            setattr(args, name, default)
        else:
            setattr(args, name, env if name == "cache_dir" else int(env))


def _oracle(args) -> Oracle:
    cache = Path(args.cache_dir) if args.cache_dir else None
    return Oracle(OracleConfig(cap=args.n_cap, cache_dir=cache, threads=args.threads))


def _emit(header: Sequence[str], rows: Sequence[Sequence], as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        json.dump([dict(zip(header, r)) for r in rows], out, indent=1)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


# -------------------------------------------------------------------------
# subcommands


def cmd_seq(args) -> int:
    key = FamilyKey.parse(args.key)
    try:
        raw = raw_coefficients(key, args.n_max)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    for a in anomalies(key, raw):
        print(f"warning: {a}", file=sys.stderr)
    _emit(["n", "value"], [(n, str(v)) for n, v in sorted(raw.items())], args.json)
    return 0


def cmd_verify(args) -> int:
    rep = verify(args.key, args.n_max, oracle=_oracle(args))
    row = rep.to_row()
    suspects = load_suspects(args.suspects)
    if rep.status == MISMATCH:
        row["suspect"] = suspect_origin(rep.key, suspects)
    json.dump(row, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return 1 if rep.status == MISMATCH else 0


def cmd_suite(args) -> int:
    config = SuiteConfig.from_file(args.config) if args.config else SuiteConfig()
    if args.cache_dir and not config.cache_dir:
        config.cache_dir = args.cache_dir
    cap = max([config.n_for(f) for f in config.families] + [config.stats_n_max])
    oracle = Oracle(OracleConfig(cap=max(cap, args.n_cap), threads=args.threads,
                                 cache_dir=Path(config.cache_dir) if config.cache_dir else None))
    suspects = load_suspects(config.suspects)
    if args.preregistered_only:
        suspects = [s for s in suspects if s.origin == "pre-registered"]
    result = run_checks(config.checks(), oracle, suspects, config.threads)
    write_ledger(result, args.ledger)
    summary = result.summary()
    print(json.dumps({"ledger": str(args.ledger), **summary}, sort_keys=True))
    for rep in result.unexpected:
        print(f"unexpected mismatch: {rep.key} at n={rep.first_mismatch.n}: "
              f"formula {rep.first_mismatch.formula_value}, oracle {rep.first_mismatch.oracle_value}",
              file=sys.stderr)
    return result.exit_code


def cmd_oracle(args) -> int:
    cons = [constraint_from_text(t) for t in args.avoid] + [constraint_from_text(t, exactly=True) for t in args.exactly]
    q = CountQuery(args.n, ClassLabel.parse(args.cls), tuple(cons), args.stat)
    o = _oracle(args)
    if q.statistic is None:
        _emit(["n", "class", "constraints", "count"],
              [(q.n, q.cls.value, ";".join(str(c) for c in q.constraints), o.count_exact(q))], args.json)
    else:
        _emit(["n", "stat_value", "count"], o.distribution(q).rows(), args.json)
    return 0


def cmd_stats(args) -> int:
    cls = ClassLabel.parse(args.cls)
    a = stats.Assignment.parse(args.assign)
    try:
        s = stats.stat_gf(args.family, cls, a, args.n_max, ywin=args.y_max, variant=args.variant)
    except stats.UnsupportedStat as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    table = stats.series_table(s, args.n_max)
    _emit(["n", "stat_value", "count"], [(n, m, str(c)) for (n, m), c in sorted(table.items())], args.json)
    return 0


def cmd_cf(args) -> int:
    a = stats.Assignment.parse(args.assign)
    vs = a.var
    if args.shape == "st1":
        def rule(d):
            ad = stats.shift_s(vs, d)(1)
            return ((2 * ad[0], 2 * ad[1]), ad, ad)
    else:
        x1 = vs(1)

        def rule(d):
            b = stats.shift_t(vs, d)(2)
            return ((2 * x1[0] + b[0], 2 * x1[1] + b[1]), (x1[0] + b[0], x1[1] + b[1]), x1)
    depth = args.depth or max(1, -(-args.order // 2) + 2)
    s = cf_eval(CFSpec(depth, rule, args.shape), args.order, None, check=args.depth is None)
    _emit(["n", "stat_value", "count"], [(n, m, str(c)) for n, m, c in s.table() if c], args.json)
    return 0


# -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    g = _globals_parent()
    parser = argparse.ArgumentParser(prog="altperm", parents=[g],
                                     description="Generating functions for restricted alternating permutations, checked by brute force.")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--json", action="store_true", help="JSON output instead of CSV")
        p.add_argument("--csv", action="store_true", help="CSV output (default)")

    p = sub.add_parser("seq", parents=[g], help="print the coefficients of a catalog key")
    p.add_argument("--key", required=True)
    p.add_argument("--n-max", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("verify", parents=[g], help="compare one key or statistics cell against brute force")
    p.add_argument("--key", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--suspects", default=None, help="suspect list (defaults to the bundled one)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("suite", parents=[g], help="run the verification matrix and write the ledger")
    p.add_argument("--config", default=None, help="JSON file with SuiteConfig fields")
    p.add_argument("--ledger", default="ledger.jsonl")
    p.add_argument("--preregistered-only", action="store_true",
                   help="honour only suspect entries listed before verification ran")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("oracle", parents=[g], help="raw brute-force counts or distributions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--avoid", action="append", default=[], metavar="PATTERN")
    p.add_argument("--exactly", action="append", default=[], metavar="PATTERN:R")
    p.add_argument("--stat", default=None, help="rlmax, inc or occ:<pattern>")
    fmt(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("stats", parents=[g], help="bivariate statistic tables from the continued fractions")
    p.add_argument("--family", choices=stats.FAMILIES, required=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--assign", required=True, help="length, mark:<k>, rlmax or inc")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--variant", choices=stats.VARIANTS, default="literal")
    p.add_argument("--y-max", type=int, default=None, help="largest y-exponent kept (default: all)")
    fmt(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("cf", parents=[g], help="raw continued-fraction expansion")
    p.add_argument("--shape", choices=("st1", "st2"), required=True)
    p.add_argument("--assign", required=True)
    p.add_argument("--depth", type=int, default=None, help="fixed depth (skips the stability check)")
    fmt(p)
    p.set_defaults(func=cmd_cf)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _resolve(args)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
