from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gvp2 import closedform as cf
from gvp2.closedform import PolyInD, WindowError
from gvp2.qseries import DescSeries, PrecisionError, from_ascending, one_minus, to_ascending

PAPER_M = {
    0: PolyInD(1, Fraction(3, 2), Fraction(1, 2)),
    1: PolyInD(-2, Fraction(3, 2), Fraction(1, 2)),
    2: PolyInD(-9, Fraction(9, 2), Fraction(3, 2)),
    3: PolyInD(-24, 9, 3),
    4: PolyInD(-66, 18, 6),
    5: PolyInD(-144, Fraction(63, 2), Fraction(21, 2)),
    6: PolyInD(-320, 60, 20),
    7: PolyInD(-626, Fraction(201, 2), Fraction(67, 2)),
    8: PolyInD(-1233, Fraction(351, 2), Fraction(117, 2)),
}


def test_polyind_arithmetic():
    p = PolyInD.from_binomial(3, -2)
    assert p(4) == 3 * comb(6, 2) - 2
    assert p.as_binomial() == (3, -2)
    assert PolyInD(1, 1, 1).as_binomial() is None
    assert (p + p - p)(7) == p(7)
    assert p.scale(2)(5) == 2 * p(5)


def test_mdelta_series_matches_quoted_polynomials():
    assert cf.mdelta_series(8)[:9] == tuple(PAPER_M[j] for j in range(9))


def test_w_small():
    assert cf.wd_direct(0, -10).agrees(DescSeries.one())
    w1 = cf.wd_direct(1, -10)
    expected = (DescSeries.one().scale(3) * one_minus(1).invert(floor=-10) ** 2).with_floor2(-20)
    assert w1.agrees(expected)
    assert cf.wd_closed(4, -4).coeff(0) == 15


def test_wd_closed_matches_direct():
    for d in range(11):
        assert cf.wd_direct(d, -d).agrees(cf.wd_closed(d, -d), -2 * d)


def test_wd_closed_breaks_below_window():
    d = 3
    assert not cf.wd_direct(d, -d - 3).agrees(cf.wd_closed(d, -d - 3))


def test_tx_operator():
    f = cf.x_exp(1, 3, -10)
    assert cf.Tx(f, 0).agrees(DescSeries.one())
    with pytest.raises(PrecisionError):
        cf.Tx(f, 4)


def test_mdelta2_values():
    assert cf.mdelta2_coeff(6, 5) == 360
    assert cf.mdelta2_coeff(6, 5) == PAPER_M[5](6) - 3 * comb(7, 2)
    for d in range(4, 11):
        for delta in range(min(d - 1, 9)):
            assert cf.mdelta2_coeff(d, delta) == PAPER_M[delta](d)


def test_mdelta2_window_refusal():
    gen = cf.mdelta2_series(5)
    assert gen.valid_through == 5
    with pytest.raises(WindowError):
        gen.coeff(6)


def test_mdelta2_against_vertex(tables10):
    for d in range(4, 9):
        gen = cf.mdelta2_series(d)
        assert tables10[d].M[: 2 * d - 4] == gen.coeffs()


def test_ndelta_formulas():
    for d in range(2, 15):
        assert cf.ndelta_poly(0, d) == Fraction(d * d + 3 * d + 2, 2)
    for d in range(3, 15):
        assert cf.ndelta_poly(1, d) == Fraction(d * (d - 1) * (d * d + d - 3), 2)
    for d in range(4, 15):
        assert cf.ndelta_poly(2, d) == Fraction((d - 1) * (d**5 - 2 * d**4 - 6 * d**3 + 9 * d**2 + 36), 4)
    with pytest.raises(WindowError):
        cf.ndelta_poly(3, 4)


def test_ndelta_against_vertex(tables10):
    for d in range(2, 9):
        t = tables10[d]
        for delta in range(d - 1):
            sign = (-1) ** (t.gd + d - 1 - delta)
            assert cf.ndelta_poly(delta, d) == sign * t.n[t.gd - delta]


def test_t_q_inverse_pair():
    q_t = cf.q_of_t(20)
    t_q = cf.t_of_q(20)
    t = from_ascending([0, 1], 20)
    assert cf.compose(t_q, q_t, 20).agrees(t)
    assert cf.compose(q_t, t_q, 20).agrees(t)
    q = Fraction(1, 2)
    t_val = q / (1 - q) ** 2
    assert t_val == 2
    assert (1 + 2 * t_val - 3) / (2 * t_val) == q  # sqrt(1 + 4t) = 3


@pytest.mark.parametrize("m", range(-3, 8))
def test_sum_identity(m):
    lhs, rhs = cf.sum_identity_sides(m, 15)
    assert lhs.agrees(rhs)


def test_generating_routes_agree():
    for d in (5, 6, 7):
        ways = [cf.ndelta_generating(d, 10, m) for m in ("direct", "M&n", "NEC", "NdeltaGen")]
        assert all(w == ways[0] for w in ways)
    with pytest.raises(ValueError):
        cf.ndelta_generating(5, 3, "other")


def test_hilbert_numbers_and_kkv():
    assert cf.hilbert_euler(4) == [1, 3, 9, 22, 51]
    assert cf.e_poly(0)(5) == comb(7, 2)
    assert cf.kkv_b(7, 0) == 1
    for g in range(2, 12):
        assert cf.kkv_b(g, 1) == 2 * (g - 1) == comb(2 * g - 3, 1) + 1
    for d in range(2, 11):
        for delta in range(d + 3):
            assert cf.kkv_prediction(d, delta) == cf.ndelta_poly(delta, d, check_window=False)


def test_min_e_identity():
    order = 20
    e = [cf.e_poly(j) for j in range(order + 1)]
    M = cf.mdelta_series(order)
    factor = to_ascending(one_minus(1) ** 2 * one_minus(2), 4)
    for n in range(order + 1):
        acc = PolyInD()
        for k, c in enumerate(factor):
            if k <= n and c:
                acc = acc + e[n - k].scale(c)
        assert acc == M[n]


def test_rel_hilbert_prediction():
    for d in range(3, 12):
        gen = cf.rel_hilbert_prediction(d)
        assert gen.coeff(0) == comb(d + 2, 2)
        assert gen.coeff(1) == 3 * comb(d + 2, 2) - 3
    with pytest.raises(WindowError):
        cf.rel_hilbert_prediction(6).coeff(8)


def test_e_identity_window_against_rel_hilbert(tables10):
    for d in range(5, 9):
        t = tables10[d]
        gen = cf.rel_hilbert_prediction(d)
        sign = 1 if d % 2 else -1
        for j in range(min(2 * d - 5, t.gd - 1) + 1):
            assert t.E[t.gd - j] == sign * gen.coeff(j)


def test_corrections(tables10):
    fits = cf.correction_extract(2, range(5, 9), tables10)
    by_key = {(f.d, f.delta): f for f in fits}
    assert by_key[5, 0].value == -60
    assert by_key[6, 1].value == -207
    assert by_key[6, 2].value == -450
    for f in fits:
        if f.expected is not None and f.d >= f.delta + 6:
            assert f.value == -f.expected
    assert cf.C2_TABLE[5][0] * comb(8, 2) + cf.C2_TABLE[5][1] == -1302
    with pytest.raises(ValueError):
        cf.correction_extract(4, [5], tables10)
    with pytest.raises(PrecisionError):
        cf.correction_extract(2, [11], tables10)


def test_eisenstein_conventions():
    assert cf.G2(6) == [0, 1, 3, 4, 7, 6, 12]
    assert cf.G2_gyz(3) == [Fraction(-1, 24), 1, 3, 4]
    assert cf.DG2(5) == [0, 1, 6, 12, 28, 30]
    assert cf.inverse_delta(4) == [1, 24, 324, 3200, 25650]


@given(st.integers(0, 12), st.integers(-3, 3))
def test_polyind_binomial_round_trip(a, b):
    for j in range(3):
        assert PolyInD.from_binomial(a, b, j).as_binomial(j) == (a, b)
