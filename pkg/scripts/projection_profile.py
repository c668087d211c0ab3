#!/usr/bin/env python3
"""Projection-norm lower-bound profile across spaces and truncation levels.

Emits a plot-ready CSV (space, n, lower_bound) on stdout or to --out.

Example:
    python3 scripts/projection_profile.py --spaces lp:1,lp:2,explp:2 \
        --n-list 2,4,8,16 --trials 30 --seed 0
"""

import argparse
import csv
import sys

from rlab.projections import projection_norm_profile
from rlab.spaces import parse_space
from rlab.weighted import parse_weight


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--spaces", default="lp:1,lp:2,lorentz:sqrt,explp:2")
    ap.add_argument("--weight", default="const:1")
    ap.add_argument("--n-list", default="2,4,8,16")
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    w = parse_weight(args.weight)
    ns = [int(v) for v in args.n_list.split(",")]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(fh)
    writer.writerow(["space", "n", "lower_bound"])
    for desc in args.spaces.split(","):
        X = parse_space(desc)
        for n, val in projection_norm_profile(X, w, ns, args.trials, args.seed):
            writer.writerow([desc, n, f"{val:.12g}"])
    if args.out:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
