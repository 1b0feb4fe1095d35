#!/usr/bin/env python3
"""Experiments around the two q-deformations of the zeta(3) series.

Four panels:
  1. the ball-type and derivative-type series side by side over an
     (n, q) grid, with their certified difference;
  2. the exact decomposition  series = A_n zeta_q(3) - B_n  residuals;
  3. the minimal cyclotomic denominator probe for A_n, B_n (how many
     copies of d_n(1/q) clear them) with the growth of the clearing
     factor in both slope normalizations;
  4. the q -> 1 degeneration against the classical series.

Example:
    python3 scripts/weight3_experiments.py --n-max 8 --q 1/3 1/2
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fractions import Fraction

from mpmath import mp, mpf

from qzeta.upoly import parse_rat
from qzeta.zeta3 import (
    classical_ball,
    dbar_probe,
    qball_numeric,
    qbgn_numeric,
    zeta3_identity_residual,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--q", nargs="+", default=["1/3", "1/2"],
                    help="exact rationals, e.g. 1/3 1/2 -1/3")
    ap.add_argument("--prec", type=int, default=256)
    ap.add_argument("--probe-n-max", type=int, default=10)
    args = ap.parse_args()
    qs = [parse_rat(t) for t in args.q]

    print("== series pair ==")
    print(f"{'n':>3} {'q':>6} {'ball':>28} {'bgn':>28} {'|diff|':>12}")
    for q0 in qs:
        for n in range(args.n_max + 1):
            ball = qball_numeric(n, q0, args.prec)
            bgn = qbgn_numeric(n, q0, args.prec)
            print(f"{n:>3} {str(q0):>6} {mp.nstr(ball, 20):>28} "
                  f"{mp.nstr(bgn, 20):>28} {mp.nstr(abs(ball - bgn), 4):>12}")

    print("\n== exact decomposition residuals ==")
    print(f"{'n':>3} {'q':>6} {'A_n digits':>11} {'B_n digits':>11} {'residual':>12}")
    for q0 in qs:
        if q0 < 0:
            continue
        for n in range(args.n_max + 1):
            r = zeta3_identity_residual(n, q0, args.prec)
            print(f"{n:>3} {str(q0):>6} "
                  f"{len(str(abs(r['A'].numerator))):>11} "
                  f"{len(str(abs(r['B'].numerator))):>11} "
                  f"{mp.nstr(r['residual'], 4):>12}")

    print("\n== denominator probe ==")
    q0 = next((v for v in qs if v > 0), Fraction(1, 2))
    probe = dbar_probe(range(1, args.probe_n_max + 1), q0)
    print(f"q = {q0}; target (per log(1/q)) = "
          f"{mp.nstr(probe['target_over_L'], 8)}")
    print(f"{'n':>3} {'copies':>7} {'q-shift':>8} {'slope':>12} {'slope/L':>12}")
    for row in probe["rows"]:
        print(f"{row['n']:>3} {row['m']:>7} {row['e']:>8} "
              f"{mp.nstr(row['slope'], 6):>12} "
              f"{mp.nstr(row['slope_over_L'], 6):>12}")

    print("\n== q -> 1 degeneration (n = 2) ==")
    cb = classical_ball(2, 96)
    print(f"classical value: {mp.nstr(cb, 15)}")
    for q0 in (Fraction(1, 2), Fraction(3, 4), Fraction(9, 10),
               Fraction(99, 100)):
        qb = qball_numeric(2, q0, 96)
        scaled = (1 - mpf(q0.numerator) / q0.denominator) ** 3 * qb
        print(f"  q = {str(q0):>7}: (1-q)^3 * series = {mp.nstr(scaled, 15)}"
              f"   error {mp.nstr(abs(scaled - cb), 4)}")


if __name__ == "__main__":
    main()
