"""Run the verification matrix, write the ledger, and print a per-family summary."""

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from altperm.harness import MISMATCH, SuiteConfig, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", type=Path, help="JSON file with SuiteConfig fields")
    ap.add_argument("--ledger", type=Path, default=Path("ledger.jsonl"))
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--cache-dir", default=None)
    args = ap.parse_args()

    config = SuiteConfig.from_file(args.config) if args.config else SuiteConfig()
    config.threads = args.threads
    config.cache_dir = args.cache_dir or config.cache_dir
    result = run_suite(config, ledger=args.ledger)

    per_group: dict[str, Counter] = {}
    for rep in result.reports:
        group = rep.key.split(":")[0] if not rep.key.startswith("S:") else ":".join(rep.key.split(":")[:2])
        per_group.setdefault(group, Counter())[rep.status] += 1
    for group, counts in sorted(per_group.items()):
        print(f"{group:14s} " + "  ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    print(json.dumps(result.summary(), sort_keys=True))
    for rep in result.reports:
        if rep.status == MISMATCH and rep.suspect is None:
            print(f"unexpected: {rep.key} {rep.first_mismatch}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
