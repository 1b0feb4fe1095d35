"""Growth-rate verification and the dimension-bound arithmetic.

Every object here revolves around slopes: the empirical quantities
(1/n^2) log |x_n| for the series values, the coefficient polynomials and
the clearing denominators, compared against their closed-form limits.
The same three limits recombine into the dimension bound delta(A, r),
which is also computed in exact rational arithmetic in 1/pi^2 so the
recombination can be checked with zero tolerance.

Conventions: q0 is an exact rational with 0 < |q0| < 1; L denotes
log|1/q0|; all slope targets are linear in L.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np
from mpmath import mp, mpf

from .linform import (
    D_exponent,
    Params,
    P_eps_values_hat,
    S_eps_numeric,
)
from .qcomb import cyclotomic
from .series import DEFAULT_PREC, PrecisionError, working_prec

__all__ = [
    "SlopeEstimate",
    "delta",
    "delta_asymptotic_constant",
    "delta_best_r",
    "delta_constant_grid_max",
    "delta_exact_pair",
    "fit_limit",
    "log_abs_fraction",
    "nesterenko_bound",
    "slope_D",
    "slope_P",
    "slope_S",
    "verify_delta_recombination",
]


# ----------------------------------------------------------------------
# Small numeric helpers.

def log_abs_fraction(x: Fraction) -> mpf:
    """log|x| for an exact rational, without building a float of x."""
    if x == 0:
        raise ValueError("log of zero")
    return mp.log(mpf(abs(x.numerator))) - mp.log(mpf(x.denominator))


def _log_inv_q(q0: Fraction) -> mpf:
    """L = log|1/q0| > 0 for 0 < |q0| < 1."""
    return -log_abs_fraction(q0)


def fit_limit(points) -> float:
    """Least-squares limit of value(n) = L + a/n + b*log(n)/n^2.

    Fitted on the largest third of the points (the small-n region is
    dominated by unmodeled corrections).  Returns the intercept L.
    """
    pts = sorted(points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points to fit")
    tail = pts[-max(3, len(pts) // 3):]
    ns = np.array([float(n) for n, _ in tail])
    ys = np.array([float(v) for _, v in tail])
    design = np.column_stack([np.ones_like(ns), 1.0 / ns, np.log(ns) / ns**2])
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    return float(coef[0])


@dataclass(frozen=True)
class SlopeEstimate:
    """Empirical (1/n^2) log-growth against a closed-form target.

    points are (n, value) with strictly increasing n; `fitted` is the
    extrapolated limit, `last` the raw final point; the relative gap is
    |fitted - target| / |target| (None when the target vanishes).
    """

    label: str
    points: tuple
    target: object
    fitted: object
    last: object
    rel_gap: object
    extras: dict | None = None

    def __post_init__(self):
        ns = [n for n, _ in self.points]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("points must be strictly increasing in n")

    def to_csv_rows(self):
        yield ("n", "value", "target", "gap")
        for n, v in self.points:
            yield (n, mp.nstr(mpf(v), 17), mp.nstr(mpf(self.target), 17),
                   mp.nstr(mpf(v) - mpf(self.target), 17))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "target": mp.nstr(mpf(self.target), 20),
            "fitted": mp.nstr(mpf(self.fitted), 20),
            "last": mp.nstr(mpf(self.last), 20),
            "rel_gap": (None if self.rel_gap is None
                        else mp.nstr(mpf(self.rel_gap), 10)),
            "points": [[n, mp.nstr(mpf(v), 17)] for n, v in self.points],
        }


def _make_estimate(label, pts, target, extras=None) -> SlopeEstimate:
    fitted = mpf(fit_limit(pts))
    last = mpf(pts[-1][1])
    gap = None if target == 0 else abs((fitted - target) / target)
    return SlopeEstimate(label, tuple(pts), target, fitted, last, gap, extras)


# ----------------------------------------------------------------------
# Slopes of the three ingredients.

def slope_S(A: int, r: int, eps: int, q0: Fraction, n_range,
            prec: int = DEFAULT_PREC) -> SlopeEstimate:
    """(1/n^2) log |S_n^[eps](q0)| against -(1/2) r (A-2r) L.

    The target degenerates to 0 at A = 2r (excluded: the symmetrized
    series is identically zero for eps = 1 there and the limit statement
    requires a nonzero value).
    """
    q0 = Fraction(q0)
    if A == 2 * r:
        raise ValueError("A = 2r excluded: the slope target degenerates to 0")
    target = -Fraction(r * (A - 2 * r), 2) * _log_inv_q(q0)
    pts = []
    with mp.workprec(working_prec(prec)):
        for n in n_range:
            if n < 1:
                continue
            v = S_eps_numeric(Params(A, r, n, eps), q0, prec)
            if v == 0:
                raise PrecisionError(f"series value vanished at n={n}; "
                                     "raise the working precision")
            pts.append((n, mp.log(abs(v)) / n**2))
    return _make_estimate(f"S[{eps}] slope (A={A}, r={r}, q={q0})",
                          pts, target)


def slope_P(A: int, r: int, eps: int, q0: Fraction, n_range,
            prec: int = DEFAULT_PREC, margin: float = 0.02) -> SlopeEstimate:
    """Upper-bound check: every sampled (1/n^2) log |P_s^[eps](q0)|
    against (1/8)(A + 4 r^2) L.

    The tracked curve is the per-n maximum over s (s = 0 and the parity
    family); `extras` carries the per-(n, s) samples and any bound
    violations beyond `margin` (expected none; the fitted limit is
    expected to approach the bound from below).
    """
    q0 = Fraction(q0)
    bound = Fraction(A + 4 * r * r, 8) * _log_inv_q(q0)
    pts = []
    samples = {}
    violations = []
    with mp.workprec(working_prec(prec)):
        for n in n_range:
            if n < 1:
                continue
            p0, ps = P_eps_values_hat(A, r, n, eps, q0)
            # true normalization: q0^(-(A-2r)n/4) times the hat value
            pref = Fraction(-(A - 2 * r) * n, 4) * log_abs_fraction(q0)
            best = None
            for s, val in [(0, p0)] + list(ps):
                if val == 0:
                    continue
                lv = (log_abs_fraction(val) + pref) / n**2
                samples[(n, s)] = lv
                if lv > bound + margin:
                    violations.append((n, s, lv))
                if best is None or lv > best:
                    best = lv
            if best is not None:
                pts.append((n, best))
    return _make_estimate(
        f"P[{eps}] max slope (A={A}, r={r}, q={q0})", pts, bound,
        extras={"samples": samples, "violations": violations,
                "margin": margin})


def slope_D(A: int, r: int, q0: Fraction, n_range,
            prec: int = DEFAULT_PREC) -> SlopeEstimate:
    """(1/n^2) log |D_n(q0)| against (3A/pi^2 + A/8 + r^2/2) L.

    Evaluated through the factored form — log (A-1)! + E log|q0| +
    A sum_l log |Phi_l(1/q0)| — so no huge polynomial is expanded.  The
    standalone d_n slope against (3/pi^2) L rides along in extras.
    """
    q0 = Fraction(q0)
    L = _log_inv_q(q0)
    with mp.workprec(working_prec(prec)):
        pi2 = mp.pi**2
        target = (3 * A / pi2 + mpf(A) / 8 + mpf(r * r) / 2) * L
        d_target = 3 / pi2 * L
        logfac = mp.log(mpf(factorial(A - 1)))
        logq = log_abs_fraction(q0)
        qinv = 1 / q0
        pts = []
        d_pts = []
        acc = mpf(0)  # log |d_n(1/q0)| accumulated over cyclotomic factors
        n_prev = 0
        for n in sorted(n_range):
            if n < 1:
                continue
            for l in range(n_prev + 1, n + 1):
                acc += log_abs_fraction(cyclotomic(l).eval_fraction(qinv))
            n_prev = n
            e = D_exponent(A, r, n)
            val = (logfac + mpf(e.numerator) / e.denominator * logq
                   + A * acc)
            pts.append((n, val / n**2))
            d_pts.append((n, acc / n**2))
    d_est = _make_estimate(f"d_n slope (q={q0})", d_pts, d_target)
    return _make_estimate(f"D_n slope (A={A}, r={r}, q={q0})", pts, target,
                          extras={"dn_estimate": d_est})


# ----------------------------------------------------------------------
# The dimension bound delta(A, r).

def _validate_ar(A: int, r: int) -> None:
    if A < 2 or A % 2:
        raise ValueError(f"A must be a positive even integer, got {A}")
    if not 1 <= r <= A // 2:
        raise ValueError(f"need 1 <= r <= A/2, got r={r}, A={A}")


def delta(A: int, r: int, prec: int = DEFAULT_PREC) -> mpf:
    """delta(A, r) = (4rA + A - 4r^2) / ((24/pi^2 + 2) A + 8 r^2)."""
    _validate_ar(A, r)
    with mp.workprec(working_prec(prec)):
        pi2 = mp.pi**2
        return mpf(4 * r * A + A - 4 * r * r) / ((24 / pi2 + 2) * A
                                                 + 8 * r * r)


def delta_best_r(A: int, prec: int = DEFAULT_PREC):
    """Exhaustive scan of r in 1..A/2; returns (r_best, delta(A, r_best))."""
    best = None
    for r in range(1, A // 2 + 1):
        v = delta(A, r, prec)
        if best is None or v > best[1]:
            best = (r, v)
    return best


def delta_exact_pair(A: int, r: int):
    """delta(A, r) as an exact pair of linear forms in x = 1/pi^2:

        ((a0, a1), (b0, b1))  meaning  (a0 + a1 x) / (b0 + b1 x),

    with Fraction entries.  This is the zero-tolerance side of the
    recombination check.
    """
    _validate_ar(A, r)
    num = (Fraction(4 * r * A + A - 4 * r * r), Fraction(0))
    den = (Fraction(2 * A + 8 * r * r), Fraction(24 * A))
    return num, den


def nesterenko_bound(alpha, beta) -> mpf:
    """1 - alpha/beta; beta must be positive."""
    beta = mpf(beta)
    if not beta > 0:
        raise ValueError("beta must be positive")
    return 1 - mpf(alpha) / beta


def verify_delta_recombination(A: int, r: int) -> bool:
    """Zero-tolerance identity: the slope targets recombine into delta.

    With x = 1/pi^2 and L = log|1/q| (L cancels), the three targets are
        alpha_S = -r(A-2r)/2          (series slope)
        C       = (A + 4r^2)/8        (coefficient bound)
        D       = A/8 + r^2/2 + 3A x  (denominator slope)
    and the bound 1 - alpha/beta with alpha = alpha_S + D, beta = C + D
    must equal delta(A, r) as a rational function of x.  Cross-multiplied
    over Q[x], checked coefficientwise.
    """
    _validate_ar(A, r)
    alpha_s = (Fraction(-r * (A - 2 * r), 2), Fraction(0))
    cbound = (Fraction(A + 4 * r * r, 8), Fraction(0))
    dslope = (Fraction(A, 8) + Fraction(r * r, 2), Fraction(3 * A))
    alpha = (alpha_s[0] + dslope[0], alpha_s[1] + dslope[1])
    beta = (cbound[0] + dslope[0], cbound[1] + dslope[1])
    top = (beta[0] - alpha[0], beta[1] - alpha[1])   # beta - alpha
    dnum, dden = delta_exact_pair(A, r)
    # (beta - alpha) * dden == dnum * beta in Q[x] (degree <= 2)
    lhs = (top[0] * dden[0],
           top[0] * dden[1] + top[1] * dden[0],
           top[1] * dden[1])
    rhs = (dnum[0] * beta[0],
           dnum[0] * beta[1] + dnum[1] * beta[0],
           dnum[1] * beta[1])
    return lhs == rhs


def delta_asymptotic_constant(prec: int = DEFAULT_PREC):
    """The large-A limit sup_r delta(A, r)/sqrt(A): closed form
    pi / (2 sqrt(pi^2 + 12)), attained along r ~ u* sqrt(A).

    Returns (constant, u_star) with u* = sqrt((24/pi^2 + 2)/8).
    """
    with mp.workprec(working_prec(prec)):
        pi2 = mp.pi**2
        const = mp.pi / (2 * mp.sqrt(pi2 + 12))
        u_star = mp.sqrt((24 / pi2 + 2) / 8)
        return const, u_star


def delta_constant_grid_max(prec: int = DEFAULT_PREC, lo: float = 0.05,
                            hi: float = 4.0, grid: int = 4000,
                            refine_iters: int = 200) -> mpf:
    """Independent numeric maximization of f(u) = 4u/(24/pi^2 + 2 + 8u^2):
    coarse grid scan then golden-section refinement.  Oracle for the
    closed form."""
    with mp.workprec(working_prec(prec)):
        pi2 = mp.pi**2
        c = 24 / pi2 + 2

        def f(u):
            return 4 * u / (c + 8 * u * u)

        lo_m, hi_m = mpf(lo), mpf(hi)
        step = (hi_m - lo_m) / grid
        best_i = max(range(grid + 1), key=lambda i: f(lo_m + i * step))
        a = lo_m + max(best_i - 1, 0) * step
        b = lo_m + min(best_i + 1, grid) * step
        invphi = (mp.sqrt(5) - 1) / 2
        c1 = b - invphi * (b - a)
        c2 = a + invphi * (b - a)
        f1, f2 = f(c1), f(c2)
        for _ in range(refine_iters):
            if f1 < f2:
                a, c1, f1 = c1, c2, f2
                c2 = a + invphi * (b - a)
                f2 = f(c2)
            else:
                b, c2, f2 = c2, c1, f1
                c1 = b - invphi * (b - a)
                f1 = f(c1)
            if b - a < mpf(2) ** (-prec // 2):
                break
        u = (a + b) / 2
        return f(u)
