#!/usr/bin/env python3
"""Survey the empirical growth rates behind the dimension bound.

For a kernel family (A, r) at a rational base point q, this script
tabulates the three measured slopes

    (1/n^2) log |S_n^[eps]|   -> -(1/2) r (A - 2r) log(1/q)
    (1/n^2) log |P_s^[eps]|   <=  (1/8) (A + 4 r^2) log(1/q)
    (1/n^2) log |D_n|         ->  (3A/pi^2 + A/8 + r^2/2) log(1/q)

against their closed-form targets, then prints the exact dimension
bound delta(A, r) for a sweep of A with the optimal r highlighted.

Example:
    python3 scripts/slope_survey.py --A 4 --r 1 --q 1/2 --n-max 40
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mpmath import mp, mpf

from qzeta.asymptotics import (
    delta,
    delta_asymptotic_constant,
    delta_best_r,
    slope_D,
    slope_P,
    slope_S,
)
from qzeta.upoly import parse_rat


def print_estimate(est, kind):
    print(f"\n== {est.label} ==")
    print(f"   target {mp.nstr(mpf(est.target), 12)}")
    print(f"   fitted {mp.nstr(mpf(est.fitted), 12)}"
          f"   last {mp.nstr(mpf(est.last), 12)}"
          + (f"   rel gap {mp.nstr(mpf(est.rel_gap) * 100, 4)}%"
             if est.rel_gap is not None else ""))
    step = max(1, len(est.points) // 8)
    for n, v in est.points[::step]:
        bar = "#" * max(0, min(60, int(abs(v) * 40)))
        print(f"   n={n:3d}  {mp.nstr(mpf(v), 10):>14}  {bar}")
    if kind == "P" and est.extras and est.extras.get("violations"):
        print(f"   bound violations: {est.extras['violations']}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--A", type=int, default=4)
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--q", default="1/2", help="exact rational, e.g. 1/2")
    ap.add_argument("--eps", type=int, default=1, choices=(0, 1))
    ap.add_argument("--n-max", type=int, default=40)
    ap.add_argument("--n-max-D", type=int, default=60)
    ap.add_argument("--prec", type=int, default=192)
    ap.add_argument("--A-sweep", type=int, default=20,
                    help="tabulate delta(A, r) for even A up to this")
    args = ap.parse_args()
    q0 = parse_rat(args.q)

    est_s = slope_S(args.A, args.r, args.eps, q0,
                    range(max(4, args.n_max // 4), args.n_max + 1), args.prec)
    print_estimate(est_s, "S")

    est_p = slope_P(args.A, args.r, args.eps, q0,
                    range(max(4, args.n_max // 4), args.n_max + 1, 2), args.prec)
    print_estimate(est_p, "P")

    est_d = slope_D(args.A, args.r, q0,
                    range(max(4, args.n_max_D // 4), args.n_max_D + 1, 2),
                    args.prec)
    print_estimate(est_d, "D")
    print_estimate(est_d.extras["dn_estimate"], "d_n")

    print("\n== dimension bound sweep ==")
    print(f"{'A':>4} {'best r':>7} {'delta(A, r*)':>16}  note")
    for A in range(4, args.A_sweep + 1, 2):
        r_star, val = delta_best_r(A)
        note = "> 1" if val > 1 else ""
        print(f"{A:>4} {r_star:>7} {mp.nstr(val, 10):>16}  {note}")
    const, ustar = delta_asymptotic_constant()
    print(f"\nlarge-A scaling: delta ~ c sqrt(A), "
          f"c = {mp.nstr(const, 10)} at u* = {mp.nstr(ustar, 10)}")
    print(f"requested pair: delta({args.A}, {args.r}) = "
          f"{mp.nstr(delta(args.A, args.r), 10)}")


if __name__ == "__main__":
    main()
