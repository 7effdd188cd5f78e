"""Side-by-side (n, rlmax) tables: printed closed forms, the block-decomposition
form for up-down, and brute force."""

import argparse
from fractions import Fraction

from altperm.oracle import Oracle, OracleConfig
from altperm.perm import ClassLabel
from altperm.stats import Assignment, oracle_table, rlmax_gf, rlmax_gf_corrected, series_table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=9)
    ap.add_argument("--class", dest="cls", default="UD", choices=["UD", "UU", "DU", "DD"])
    args = ap.parse_args()
    cls = ClassLabel.parse(args.cls)
    oracle = Oracle(OracleConfig(cap=args.n_max))
    truth = oracle_table("classical", cls, Assignment("rlmax"), args.n_max, oracle)
    printed = series_table(rlmax_gf(cls, args.n_max), args.n_max)
    fixed = series_table(rlmax_gf_corrected(args.n_max), args.n_max) if cls is ClassLabel.UD else {}
    keys = sorted(set(truth) | set(printed) | set(fixed))
    print("n,rlmax,oracle,printed" + (",decomposition" if fixed else ""))
    for key in keys:
        row = [key[0], key[1], truth.get(key, 0), printed.get(key, Fraction(0))]
        if fixed:
            row.append(fixed.get(key, Fraction(0)))
        print(",".join(str(v) for v in row))


if __name__ == "__main__":
    main()
