"""q-combinatorics: cyclotomic polynomials, q-binomials, Pochhammer
products, Stirling/Bernoulli tables, and the Phi-product fraction field."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qzeta.qcomb import (
    PhiProduct,
    QFrac,
    alpha_weight,
    bernoulli,
    cyclotomic,
    d_poly,
    divisor_power_sum,
    qbinomial,
    qpoch,
    stirling_first,
    totient,
)
from qzeta.upoly import UPoly


def test_qbinomial_4_2():
    assert qbinomial(4, 2) == UPoly({0: 1, 2: 1, 4: 2, 6: 1, 8: 1})


def test_qbinomial_symmetry_and_specialization():
    for m in range(8):
        for k in range(m + 1):
            p = qbinomial(m, k)
            assert p == qbinomial(m, m - k)
            assert p.eval_fraction(Fraction(1)) == math.comb(m, k)


def test_cyclotomic_product_is_q_power_minus_one():
    for n in range(1, 51):
        prod = UPoly.one()
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * cyclotomic(d)
        assert prod == UPoly.q_power(n) - UPoly.one(), n


def test_cyclotomic_known_values():
    assert cyclotomic(1) == UPoly({2: 1, 0: -1})                      # q - 1
    assert cyclotomic(2) == UPoly({2: 1, 0: 1})                       # q + 1
    assert cyclotomic(6) == UPoly({4: 1, 2: -1, 0: 1})                # q^2-q+1
    # first index with a coefficient outside {0, +-1}
    assert any(abs(v) > 1 for v in cyclotomic(105).c.values())


def test_cyclotomic_palindromic_above_one():
    for l in range(2, 40):
        p = cyclotomic(l)
        lo, hi = p.min_exp(), p.max_exp()
        for e, v in p.c.items():
            assert p.c.get(lo + hi - e) == v, l


def test_d_poly_is_cyclotomic_product():
    for n in range(0, 20):
        expect = UPoly.one()
        for l in range(1, n + 1):
            expect = expect * cyclotomic(l)
        assert d_poly(n) == expect
        assert d_poly(n).max_exp() == 2 * sum(totient(l) for l in range(1, n + 1))


def test_qpoch_both_bases():
    a = UPoly.q_power(1)
    # (q; q)_2 = (1 - q)(1 - q^2)
    assert qpoch(a, 2) == (UPoly.one() - UPoly.q_power(1)) * (UPoly.one() - UPoly.q_power(2))
    # (q; 1/q)_2 = (1 - q)(1 - q * q^-1) = 0
    assert qpoch(a, 2, base="1/q").is_zero()
    assert qpoch(a, 0) == UPoly.one()
    with pytest.raises(ValueError):
        qpoch(a, -1)
    with pytest.raises(ValueError):
        qpoch(a, 2, base="p")


def _c(n, j):
    # signless Stirling with c(n, j) = 0 outside 1 <= j <= n
    if j < 1 or j > n:
        return 0
    return stirling_first(n, j)


def test_stirling_first_table():
    # signless first kind: c(4, 2) = 11, c(5, 3) = 35, row sums are n!
    assert stirling_first(4, 2) == 11
    assert stirling_first(5, 3) == 35
    for n in range(1, 9):
        assert sum(stirling_first(n, j) for j in range(1, n + 1)) == math.factorial(n)
    # recurrence c(n, j) = c(n-1, j-1) + (n-1) c(n-1, j)
    for n in range(2, 10):
        for j in range(1, n + 1):
            assert stirling_first(n, j) == _c(n - 1, j - 1) + (n - 1) * _c(n - 1, j)


def test_bernoulli_table():
    expect = {
        0: Fraction(1), 1: Fraction(-1, 2), 2: Fraction(1, 6),
        3: Fraction(0), 4: Fraction(-1, 30), 6: Fraction(1, 42),
        8: Fraction(-1, 30), 10: Fraction(5, 66), 12: Fraction(-691, 2730),
        14: Fraction(7, 6),
    }
    for m, v in expect.items():
        assert bernoulli(m) == v, m


def test_divisor_power_sum():
    assert divisor_power_sum(6, 1) == 12
    assert divisor_power_sum(2, 3) == 9
    assert divisor_power_sum(12, 0) == 6
    for k in range(1, 60):
        assert divisor_power_sum(k, 2) == sum(d ** 2 for d in range(1, k + 1)
                                              if k % d == 0)


def test_alpha_weight_values():
    # alpha(s, j) = 2 c(s-1, j-1)/(s-1)!
    assert alpha_weight(2, 2) == Fraction(2)
    assert alpha_weight(3, 2) == Fraction(2, 2) * 1       # 2*c(2,1)/2! = 1
    assert alpha_weight(3, 3) == Fraction(1)
    assert alpha_weight(4, 2) == Fraction(2 * 2, 6)
    with pytest.raises(ValueError):
        alpha_weight(2, 3)
    with pytest.raises(ValueError):
        alpha_weight(1, 1)


phi_exps = st.dictionaries(st.integers(min_value=1, max_value=8),
                           st.integers(min_value=1, max_value=3), max_size=4)


@settings(max_examples=40, deadline=None)
@given(phi_exps, phi_exps)
def test_phiproduct_lcm_cofactor(e1, e2):
    p1, p2 = PhiProduct(e1), PhiProduct(e2)
    l = p1.lcm(p2)
    # lcm is divisible by both; cofactor * part == lcm as polynomials
    for part in (p1, p2):
        cof = l.cofactor(part)
        assert cof.expand() * part.expand() == l.expand()


@settings(max_examples=40, deadline=None)
@given(phi_exps, st.fractions(min_value=Fraction(1, 9), max_value=Fraction(9, 10)))
def test_phiproduct_eval_matches_expand(e, q0):
    p = PhiProduct(e)
    assert p.eval_fraction(q0) == p.expand().eval_fraction(q0)


def _small_qfrac(seed_poly, mshift, l, p):
    return QFrac(seed_poly).mul_qpow(mshift).div_one_minus_qpow(l, p)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=-3, max_value=3),
       st.integers(min_value=1, max_value=5),
       st.integers(min_value=1, max_value=3),
       st.fractions(min_value=Fraction(1, 7), max_value=Fraction(6, 7)))
def test_qfrac_ops_match_fraction_arithmetic(mshift, l, p, q0):
    x = _small_qfrac(UPoly({0: 2, 2: -1}), mshift, l, p)
    y = _small_qfrac(UPoly({2: 3}), -mshift, l + 1, 1)
    fx = x.eval_fraction(q0)
    fy = y.eval_fraction(q0)
    assert (x + y).eval_fraction(q0) == fx + fy
    assert (x * y).eval_fraction(q0) == fx * fy
    assert (x - y).eval_fraction(q0) == fx - fy
    assert x.reduced().eval_fraction(q0) == fx


def test_qfrac_reduced_cancels():
    # (1 - q^2) / (1 - q) reduces to the polynomial 1 + q
    x = QFrac(UPoly.one() - UPoly.q_power(2)).div_one_minus_qpow(1, 1)
    r = x.reduced()
    assert r.den.is_one()
    assert r.num == UPoly({0: 1, 2: 1})


def test_qfrac_subst_inv_consistent_with_values():
    q0 = Fraction(2, 5)
    x = QFrac(UPoly({0: 1, 2: 3})).div_one_minus_qpow(2, 2).mul_qpow(-1)
    assert x.subst_inv().eval_fraction(q0) == x.eval_fraction(1 / q0)


def test_totient_values():
    assert [totient(l) for l in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
