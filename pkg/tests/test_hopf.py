from fractions import Fraction

import pytest

from gvp2.hopf import (
    HopfCache,
    W,
    W_direct,
    W_row,
    bound_attained,
    degree_bound,
    degree_bound2,
    schur_principal,
    schur_shifted,
    schur_shifted_oracle,
)
from gvp2.partitions import enumerate_partitions
from gvp2.qseries import DescSeries, HalfExp, inv_q_factorial

SMALL = [p for k in range(6) for p in enumerate_partitions(k)]
FLOOR = -25


def poly(coeffs):
    """Laurent polynomial from ``{exponent: coeff}``."""
    return DescSeries.from_terms(coeffs)


q = DescSeries.monomial(1)


def matches_rational(series, numerator, denominator):
    return (series * denominator).agrees(numerator, (series * denominator).floor2)


def test_schur_principal_examples():
    assert schur_principal((), -10).agrees(DescSeries.one())
    s1 = schur_principal((1,), -10)
    assert all(s1.coeff(Fraction(-1, 2) - k) == 1 for k in range(9))
    assert schur_principal((2, 1), -10).top == HalfExp.of(Fraction(-5, 2))


def test_shifted_row_formula():
    for m in range(4):
        for n in range(4):
            lhs = schur_shifted((n,), (m,), -15)
            rhs = DescSeries.zero()
            for k in range(n + 1):
                rhs = rhs + inv_q_factorial(k, -60).shift(m * n - (m + 1) * k)
            rhs = rhs.shift(Fraction(-n, 2))
            assert lhs.agrees(rhs, lhs.floor2)
    assert schur_shifted((1,), (), -10).agrees(schur_principal((1,), -10))


def test_jacobi_trudi_matches_character_oracle():
    for mu in SMALL:
        for nu in SMALL:
            a = schur_shifted(nu, mu, -20, HopfCache())
            b = schur_shifted_oracle(nu, mu, -20)
            assert a.agrees(b, -40), (mu, nu)


def test_w_examples():
    w11 = W((1,), (1,), -12).value
    assert [w11.coeff(-k) for k in range(5)] == [1, 1, 2, 3, 4]
    assert matches_rational(w11, q * q - q + 1, (q - 1) ** 2)
    assert W((), (), -5).value.agrees(DescSeries.one())
    w22 = W((2,), (2,), -15).value
    num = poly({8: 1, 7: -1, 6: -1, 5: 2, 3: -1, 2: 1})
    assert matches_rational(w22, num, (q - 1) ** 2 * (q * q - 1) ** 2)
    w21 = W((2,), (1,), -15).value
    num = poly({Fraction(9, 2): 1, Fraction(7, 2): -1, Fraction(3, 2): 1})
    assert matches_rational(w21, num, (q - 1) ** 2 * (q * q - 1))
    assert w21.top == HalfExp.of(Fraction(1, 2))
    w111 = W((1, 1), (1,), -15).value
    den = DescSeries.monomial(Fraction(1, 2)) * (q - 1) ** 2 * (q * q - 1)
    assert matches_rational(w111, q ** 3 - q + 1, den)


def test_w_row():
    assert W_row(1, 1, -12).agrees(W((1,), (1,), -12).value)
    for m in range(6):
        expected = inv_q_factorial(m, -40).shift(Fraction(-m, 2))
        assert W_row(m, 0, -15).agrees(expected, -30)
    assert W_row(2, 1, -15).agrees(W_row(1, 2, -15))
    for m in range(9):
        for n in range(9):
            assert W_row(m, n, -12).agrees(W((m,) if m else (), (n,) if n else (), -12).value)


def test_symmetry_exhaustive():
    cache = HopfCache()
    for mu in SMALL:
        for nu in SMALL:
            assert W_direct(mu, nu, FLOOR, cache).agrees(W_direct(nu, mu, FLOOR, cache), 2 * FLOOR)


def test_degree_bounds_and_equality_cases():
    assert degree_bound((2,), (1,)) == HalfExp.of(Fraction(1, 2))
    assert degree_bound((1, 1), (1,)) == HalfExp.of(Fraction(-3, 2))
    cache = HopfCache()
    for mu in SMALL:
        for nu in SMALL:
            top2 = W_direct(mu, nu, -30, cache).top2
            assert top2 <= degree_bound2(mu, nu)
            assert (top2 == degree_bound2(mu, nu)) == bound_attained(mu, nu), (mu, nu)


def test_cache_statistics():
    cache = HopfCache()
    W((2, 1), (1,), -10, cache)
    W((2, 1), (1,), -10, cache)
    stats = cache.stats()
    assert stats["hits"] >= 1 and stats["misses"] >= 1
    cache.clear()
    assert cache.stats()["hits"] == 0


def test_floor_required():
    with pytest.raises(ValueError):
        W((1,), (1,), None)
