from fractions import Fraction
from itertools import product

import pytest

from gvp2 import closedform as cf
from gvp2.hopf import HopfCache, W
from gvp2.partitions import stats
from gvp2.qseries import DescSeries, HalfExp, PrecisionError
from gvp2.vertex import (
    GvTable,
    IntegrityError,
    Pipeline,
    extract,
    free_energy_coeff,
    free_energy_composition,
    genus,
    instanton_coeff,
    multicover_strip,
    transforms,
)

KNOWN = {
    1: [3],
    2: [-6],
    3: [27, -10],
    4: [-192, 231, -102, 15],
    5: [1695, -4452, 5430, -3672, 1386, -270, 21],
    6: [-17064, 80948, -194022, 290853, -290400, 196857, -90390, 27538, -5310, 585, -28],
}


def top(d):
    return Fraction(d * d - 3 * d, 2)


def test_instanton_one():
    I1 = instanton_coeff(1, -10)
    assert [I1.coeff(-k) for k in range(11)] == [0] + [-3 * k for k in range(1, 11)]


def test_instanton_degrees(pipeline10):
    assert pipeline10.instanton(3).top == HalfExp.of(0)
    for d in range(1, 11):
        assert pipeline10.instanton(d).top == HalfExp.of(top(d))
        assert pipeline10.free_energy(d).top == HalfExp.of(top(d))


def row_stratum(d, floor):
    out = DescSeries.zero(HalfExp.of(floor))
    for a in range(d + 1):
        for b in range(d - a + 1):
            parts = [(x,) if x else () for x in (a, b, d - a - b)]
            kappa = sum(stats(p).kappa for p in parts)
            term = DescSeries.monomial(Fraction(kappa, 2))
            for i in range(3):
                term = term * W(parts[i], parts[(i + 1) % 3], floor - 2 * top(d)).value
            out = out + term.with_floor2(2 * floor)
    return out.scale((-1) ** d).with_floor2(2 * floor)


def test_non_row_stratum_is_lower(pipeline10):
    for d in range(2, 7):
        floor = top(d) - d - 3
        rest = pipeline10.instanton(d).with_floor2(2 * floor) - row_stratum(d, floor)
        assert rest.is_zero or rest.top.value <= top(d) - d - 2


def test_free_energy_small():
    I = {d: instanton_coeff(d, -8) for d in (1, 2)}
    assert free_energy_coeff(1, I) == I[1]
    F2 = free_energy_coeff(2, I)
    assert F2.agrees(I[2] - (I[1] * I[1]).scale(Fraction(1, 2)))


def test_recurrence_matches_composition_sum(pipeline10):
    I = {d: pipeline10.instanton(d).with_floor2(-20) for d in range(1, 6)}
    for d in range(1, 6):
        assert free_energy_coeff(d, I).agrees(free_energy_composition(d, I))


def test_products_of_instantons_are_lower(pipeline10):
    for d in range(2, 9):
        for j in range(1, d):
            prod = pipeline10.instanton(j) * pipeline10.instanton(d - j)
            assert prod.top.value <= top(d) - (d - 1)


def test_leading_window(pipeline10):
    for d in range(1, 11):
        lo = 2 * (top(d) - d + 2)
        assert pipeline10.free_energy(d).agrees(pipeline10.instanton(d), lo)


def test_refined_window(pipeline10):
    for d in range(4, 11):
        lo = 2 * (genus(d) - 1 - (2 * d - 5))
        I = pipeline10.instanton
        rhs = I(d) - I(1) * I(d - 1)
        assert pipeline10.free_energy(d).agrees(rhs, lo)


def test_known_tables(tables10):
    for d, n in KNOWN.items():
        assert tables10[d].n == n


def test_tables_integral_and_sized(tables10):
    for d, t in tables10.items():
        assert len(t.n) == len(t.N) == len(t.E) == genus(d) + 1
        for value in t.n + t.N + t.E + t.M:
            assert type(value) is int


def test_m_values(tables10):
    assert tables10[1].M == [3]
    assert tables10[3].M == [10, 7]
    assert tables10[4].M[0] == 15


def test_multicover_strip_prime_degree(pipeline10):
    # only the k = d image of the degree-one invariant is removed
    F = pipeline10.free_energy(3).with_floor2(-12)
    image = DescSeries.monomial(-3).div_one_minus(3, -12).div_one_minus(3, -12)
    assert multicover_strip(3, F, {1: GvTable(1, [3])}).agrees(F + image, -12)
    with pytest.raises(KeyError):
        multicover_strip(3, F, {})
    with pytest.raises(KeyError):
        multicover_strip(4, F, {1: GvTable(1, [3])})


def test_degree_two_strip(pipeline10):
    remainder = pipeline10.stripped(2)
    t = extract(2, remainder)
    assert t.n == [-6]


def test_extract_rejects_bad_input():
    with pytest.raises(PrecisionError):
        extract(3, DescSeries.one().truncate(0))
    asymmetric = DescSeries.from_terms({1: 1}, floor=-6)
    with pytest.raises(IntegrityError):
        extract(3, asymmetric)
    fractional = DescSeries.monomial(-1, Fraction(1, 2)).truncate(-6)
    with pytest.raises(IntegrityError):
        extract(1, fractional)


def test_transforms_fill_and_check():
    t = transforms(GvTable(3, [27, -10]))
    assert transforms(GvTable(3, [], N=t.N)).n == [27, -10]
    assert transforms(GvTable(3, [], E=t.E)).n == [27, -10]
    with pytest.raises(ValueError):
        transforms(GvTable(3, [27, -10], N=[0, 0]))
    assert GvTable.from_dict(t.to_dict()) == t


def test_thread_count_does_not_change_output():
    serial = Pipeline(7, threads=1)
    parallel = Pipeline(7, threads=2)
    assert serial.instanton(7) == parallel.instanton(7)
    assert serial.table(7) == parallel.table(7)


def test_e_identity_range(tables10):
    for d in range(1, 9):
        t = tables10[d]
        e = cf.kkv_series(d, d + 2).series
        sign = 1 if d % 2 else -1
        for j in range(min(d - 2, t.gd) + 1):
            assert t.E[t.gd - j] == sign * e.coeff(-j)


def test_e_identity_breaks_past_d_minus_2(tables10):
    d = 6
    t = tables10[d]
    e = cf.kkv_series(d, d + 2).series
    assert t.E[t.gd - (d - 1)] != -e.coeff(-(d - 1))
