"""Brute-force counts of up-first alternating permutations against the Euler numbers."""

import argparse
import time

from altperm.oracle import CountQuery, Oracle, OracleConfig
from altperm.perm import ClassLabel

EULER = [1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936, 50521, 353792, 2702765]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    oracle = Oracle(OracleConfig(cap=args.n_max, threads=args.threads))
    print("n,count,euler,ok,seconds")
    for n in range(1, args.n_max + 1):
        t0 = time.perf_counter()
        got = oracle.count_exact(CountQuery(n, ClassLabel.A))
        print(f"{n},{got},{EULER[n]},{got == EULER[n]},{time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
