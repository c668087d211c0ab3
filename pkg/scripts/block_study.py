#!/usr/bin/env python3
"""Compare closed-form block bounds against empirical multiplicator brackets.

For each block size n (a power of two), prints the certified upper bound for
the Hadamard-selected block, the exact witness value for the single-negative
block, and the empirical multiplicator-norm bracket for both indicator sets.

Example:
    python3 scripts/block_study.py --n-list 4,8,16 --budget 40
"""

import argparse
import sys
from fractions import Fraction

from rlab import counterexample as cex
from rlab.dyadic import hadamard_select, indicator, single_negative_select
from rlab.projections import multiplicator_norm
from rlab.spaces import Lp


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-list", default="4,8,16")
    ap.add_argument("--budget", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    X = Lp(Fraction(1))
    print(f"{'n':>4} {'bound_B':>12} {'B bracket':>26} {'bound_D':>12} {'D bracket':>26}")
    for n in (int(v) for v in args.n_list.split(",")):
        chi_b = indicator(n, hadamard_select(n))
        br_b = multiplicator_norm(X, chi_b, n, budget=args.budget, seed=args.seed)
        chi_d = indicator(n, single_negative_select(n))
        br_d = multiplicator_norm(X, chi_d, n, budget=args.budget, seed=args.seed)
        b_br = f"[{br_b.lower:.6g}, {br_b.upper:.6g}]"
        d_br = f"[{br_d.lower:.6g}, {br_d.upper:.6g}]"
        print(
            f"{n:>4} {float(cex.bound_B(n)):>12.6g} {b_br:>26} "
            f"{float(cex.bound_D(n)):>12.6g} {d_br:>26}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
