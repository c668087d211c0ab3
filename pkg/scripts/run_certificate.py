#!/usr/bin/env python3
"""Plan and certify a block construction in one run.

Plans the block sizes from the m-chain, certifies the exact bound chains,
and prints a human-readable summary plus the full JSON report.

Example:
    python3 scripts/run_certificate.py --m 1,16 --blocks 2
"""

import argparse
import json
import sys

from rlab import counterexample as cex


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", default="1,16", help="comma-separated m-chain")
    ap.add_argument("--blocks", type=int, default=2)
    ap.add_argument("--precision", type=int, default=128)
    ap.add_argument("--json", action="store_true", help="dump the raw result as JSON")
    args = ap.parse_args()

    pl = cex.plan([int(v) for v in args.m.split(",")])
    print(f"plan: n = {pl.n}, N = {pl.N}, growth condition ok = {pl.condition_ok}")
    res = cex.certify(pl, args.blocks, precision=args.precision)
    for check in res["checks"]:
        status = "skip" if check.get("skipped") else ("ok" if check["holds"] else "VIOLATED")
        print(f"  [{status:8s}] {check['name']}")
    print(f"verdict: {res['verdict']}")
    if args.json:
        json.dump(res, sys.stdout, indent=2, default=str)
        print()
    return 0 if res["verdict"] == "PASS" else 3


if __name__ == "__main__":
    sys.exit(main())
