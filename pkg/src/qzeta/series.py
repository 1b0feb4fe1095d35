"""Certified numeric summation and exact truncated-series machinery.

Floating point work is delegated to mpmath (arbitrary-precision binary
floats); this module pins down the conventions: explicit precision in
bits, a fixed reserve of guard bits, and scale-aware working precision so
that residuals of badly cancelling combinations are still certified at
the requested tolerance.

The exact half is a small toolkit of truncated power-series operations
that is deliberately generic: coefficients may be UPoly (symbolic q) or
Fraction (specialized q), since both rings support + - * and integer
scalars.  The partial-fraction extractor built on top of it is shared by
the main linear-form kernel and the weight-3 kernel.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from mpmath import mp, mpf

from .upoly import ExactArithError, RatFunc, UPoly


DEFAULT_PREC = 256
GUARD_BITS = 32


class DivergenceError(ExactArithError):
    """Series terms stopped decreasing; the sum cannot be certified."""


class PrecisionError(ExactArithError):
    """The requested tolerance could not be certified."""


def working_prec(prec: int, scale_log2: float = 0.0) -> int:
    """Working precision in bits: requested precision plus guard bits plus
    headroom for the magnitude of the largest intermediate quantity."""
    extra = int(scale_log2) + 1 if scale_log2 > 0 else 0
    return prec + GUARD_BITS + extra


def sum_with_tail(terms, ratio_bound, tol, max_terms: int = 200000):
    """Sum terms with a certified geometric tail bound.

    terms: iterable of mpf values.  ratio_bound: a constant r < 1 with
    |t_{k+1}| <= r |t_k| eventually, or a callable k -> bound valid for
    all later indices.  Summation stops once |t_k| * r/(1-r) < tol.
    Non-decreasing |t_k| beyond a cutoff raises DivergenceError.
    """
    total = mpf(0)
    prev_abs = None
    grow = 0
    for k, t in enumerate(terms):
        total += t
        ta = abs(t)
        r = ratio_bound(k) if callable(ratio_bound) else ratio_bound
        if r is not None and 0 <= r < 1 and ta * r / (1 - r) < tol:
            return total
        if prev_abs is not None and ta >= prev_abs and ta > tol:
            grow += 1
            if grow > 64:
                raise DivergenceError("terms stopped decreasing; no certified tail")
        else:
            grow = 0
        prev_abs = ta
        if k >= max_terms:
            raise PrecisionError(f"no certified tail after {max_terms} terms")
    return total


# ----------------------------------------------------------------------
# Exact truncated series over a generic coefficient ring.

def tseries_mul(a: list, b: list, order: int, zero) -> list:
    out = [zero] * order
    for i, ai in enumerate(a):
        if i >= order:
            break
        if not ai:
            continue
        top = min(order - i, len(b))
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def geometric_inverse_power(c_ratio, order: int, power: int, one):
    """Series of (1 - c X)^(-power) mod X^order: sum C(power-1+k, k) c^k X^k."""
    out = []
    cur = one
    for k in range(order):
        out.append(comb(power - 1 + k, k) * cur)
        cur = cur * c_ratio
    return out


def pf_extract(numer_T, pole_count: int, order: int, ring) -> tuple[list, list]:
    """Partial fractions of numer(T) / prod_{i=0}^{pole_count-1} (1 - q^i T)^order.

    numer_T: dense T-coefficients (ring elements, ascending).
    ring: object with attributes/methods
        one          -- multiplicative unit of the coefficient ring
        zero         -- additive unit
        qpow(m)      -- the ring element q^m (m any integer)

    Returns (dhat, bases) where dhat[j][s] for s in 1..order is the
    numerator of the coefficient of 1/(1 - q^j T)^s and bases[j] is the
    tuple of offsets m = i - j over the other poles i; the true
    coefficient is
        dhat[j][s] / prod_m (1 - q^m)^(2*order - s).

    Writing V = 1 - q^j T, the product of (numer / other poles) evaluated
    at T = q^(-j)(1 - V) is regular at V = 0 and its V^(order-s)
    coefficient is exactly the sought d-coefficient, with no sign
    bookkeeping.  The other-poles product P(V) = prod ((1-q^m) + q^m V)^order
    is inverted as a power series over the base c = prod (1 - q^m): with
    1/P = sum_k f_k / c^(order+k) V^k the f_k are polynomials satisfying
        f_0 = 1,  c^order f_k = -sum_{t=1..k} p_t f_{k-t} c^t,
    one exact division by c^order per coefficient; every denominator stays
    a known product of (1 - q^m) factors.
    """
    one, zero = ring.one, ring.zero
    dhat = []
    bases = []
    for j in range(pole_count):
        qj = ring.qpow(-j)
        # numer(q^-j (1 - V)) mod V^order, by Horner in (1 - V)
        s = [zero] * order
        for cval in reversed(numer_T):
            new = [zero] * order
            for i, si in enumerate(s):
                if si:
                    t = qj * si
                    new[i] = new[i] + t
                    if i + 1 < order:
                        new[i + 1] = new[i + 1] - t
            new[0] = new[0] + cval
            s = new
        # P(V) = prod_{i != j} ((1 - q^m) + q^m V)^order mod V^order,
        # c = prod_{i != j} (1 - q^m)
        pv = [one] + [zero] * (order - 1)
        cbase = one
        offs = []
        for i in range(pole_count):
            if i == j:
                continue
            m = i - j
            offs.append(m)
            qm = ring.qpow(m)
            om = one - qm
            cbase = cbase * om
            ompows = [one]
            for _ in range(order):
                ompows.append(ompows[-1] * om)
            fac = []
            qmk = one
            for k in range(order):
                fac.append(comb(order, k) * ompows[order - k] * qmk)
                qmk = qmk * qm
            pv = tseries_mul(pv, fac, order, zero)
        cpows = [one]
        for _ in range(order):
            cpows.append(cpows[-1] * cbase)
        # scaled inverse series: 1/P = sum f_k / c^(order+k) V^k
        f = [one]
        for k in range(1, order):
            acc = zero
            for t in range(1, k + 1):
                if pv[t]:
                    acc = acc + pv[t] * f[k - t] * cpows[t]
            f.append(ring.divexact(-acc, cpows[order]) if acc else zero)
        # (numer shift) * inverse; the V^(order-s) coefficient over the
        # common denominator c^(2*order - s):
        # sum_{t+u = order-s} n_t f_u / c^(order+u) =
        #     [sum_t n_t c^t f_(order-s-t)] / c^(2*order-s).
        h = [s[t] * cpows[t] if s[t] else zero for t in range(order)]
        hf = tseries_mul(h, f, order, zero)
        dhat.append({sdx: hf[order - sdx] for sdx in range(1, order + 1)})
        bases.append(tuple(offs))
    return dhat, bases


class UPolyRing:
    one = UPoly.one()
    zero = UPoly.zero()

    @staticmethod
    def qpow(m: int) -> UPoly:
        return UPoly.q_power(m)

    @staticmethod
    def divexact(a: UPoly, b: UPoly) -> UPoly:
        return a.divexact(b)


class FractionRing:
    def __init__(self, q0: Fraction):
        self.q0 = Fraction(q0)
        self.one = Fraction(1)
        self.zero = Fraction(0)

    def qpow(self, m: int) -> Fraction:
        return self.q0 ** m

    @staticmethod
    def divexact(a: Fraction, b: Fraction) -> Fraction:
        return a / b


def series_shift(num_T: list, den_T: list, center, order: int) -> list:
    """Taylor coefficients of (num/den)(center + X) up to X^order, exact.

    num_T, den_T: dense T-coefficient lists of UPoly (or RatFunc) entries.
    center: UPoly.  The center must not be a pole: den(center) != 0.
    Coefficients come back as RatFunc.
    """
    def shifted(coeffs):
        out = [RatFunc.from_upoly(UPoly.zero()) for _ in range(order + 1)]
        for c in reversed(coeffs):
            cr = c if isinstance(c, RatFunc) else RatFunc.from_upoly(c)
            # out = out * (center + X) + c
            new = [RatFunc.from_upoly(UPoly.zero()) for _ in range(order + 1)]
            for i, v in enumerate(out):
                if v.is_zero():
                    continue
                new[i] = new[i] + v * center
                if i + 1 <= order:
                    new[i + 1] = new[i + 1] + v
            new[0] = new[0] + cr
            out = new
        return out

    ns = shifted(num_T)
    ds = shifted(den_T)
    if ds[0].is_zero():
        raise ZeroDivisionError("series center is a pole of the denominator")
    inv0 = RatFunc.from_upoly(UPoly.one()) / ds[0]
    out = []
    for k in range(order + 1):
        acc = ns[k]
        for i in range(k):
            acc = acc - out[i] * ds[k - i]
        out.append(acc * inv0)
    return out
