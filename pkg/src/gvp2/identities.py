"""Registry of exact identities checked coefficient by coefficient.

Every entry evaluates both sides as truncated series and compares them on
the stated window only.  Identities carrying an error term ``q^{-k}(...)``
are compared strictly above ``q^{-k}``.  An entry whose windows are all
empty for the requested degrees reports ``skipped``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable

from . import closedform as cf
from .bases import binom
from .hopf import W_row, w2
from .partitions import kappa
from .qseries import (
    DescSeries,
    HalfExp,
    inv_q_factorial,
    invert_unit,
    lambert_sigma,
    one_minus,
    q_binomial_check,
    to_ascending,
)
from .vertex import Pipeline, genus

__all__ = ["IdentityResult", "IDENTITIES", "run_identity", "run_suite", "UnknownIdentityError"]


class UnknownIdentityError(KeyError):
    pass


@dataclass
class IdentityResult:
    name: str
    window: str
    status: str  # "pass" | "fail" | "skipped"
    first_mismatch_exponent: str | None = None
    checks: int = 0

    def to_dict(self) -> dict:
        out = {"name": self.name, "window": self.window, "status": self.status, "checks": self.checks}
        if self.first_mismatch_exponent is not None:
            out["first_mismatch_exponent"] = self.first_mismatch_exponent
        return out


@dataclass
class Context:
    """Shared inputs: a floor for the pure q-series checks and a degree range."""

    floor: int = -20
    dmax: int = 8
    margin: int = 2
    threads: int = 1
    _pipeline: Pipeline | None = field(default=None, repr=False)

    @property
    def floor2(self) -> int:
        return 2 * self.floor

    @property
    def order(self) -> int:
        return -self.floor

    @cached_property
    def pipeline(self) -> Pipeline:
        return self._pipeline or Pipeline(max(self.dmax, 1), self.margin, self.threads)

    def tables(self) -> dict:
        return {t.d: t for t in self.pipeline.tables()}


@dataclass
class Check:
    label: str
    mismatch2: int | float | None  # doubled exponent of the first disagreement


def _cmp(label: str, lhs: DescSeries, rhs: DescSeries, down_to2) -> Check:
    return Check(label, lhs.first_mismatch2(rhs, down_to2))


def _flag(label: str, ok: bool, where2=0) -> Check:
    return Check(label, None if ok else where2)


# ------------------------------------------------------------ building blocks
def _inv_inf(floor2) -> DescSeries:
    return inv_q_factorial(None, floor2)


def _lambert_div(order: int, start: int = 1) -> DescSeries:
    """``sum_{i>=start} q^-i/(1-q^-i)`` in the base q^-1."""
    out = [0] * (order + 1)
    for i in range(start, order + 1):
        for k in range(i, order + 1, i):
            out[k] += 1
    return DescSeries._build(0, 2, out, -2 * order)


def _diff(d: int, floor2) -> DescSeries:
    """``1/[inf]! - 1/[d]!``."""
    return (_inv_inf(floor2) - inv_q_factorial(d, floor2)).with_floor2(floor2)


@lru_cache(maxsize=None)
def _tpoch(d1: int, m: int, floor2: int) -> DescSeries:
    """``T^x_m((q^{-d1-1};q^-1)_inf / (x q^{-d1-1};q^-1)_inf - 1)``."""
    return (cf.Tx(cf.x_binomial_ratio(d1 + 1, m, HalfExp(floor2)), m) - 1).with_floor2(floor2)


def _over_one_minus(f: DescSeries, power: int, floor2) -> DescSeries:
    for _ in range(power):
        f = f.div_one_minus(1, floor2)
    return f


def _cube_prefactor(shift: int, power: int, floor2) -> DescSeries:
    """``q^shift / ((1-q^-1)^power [inf]!^3)``."""
    base = (_inv_inf(floor2) ** 3).with_floor2(floor2 - 2 * shift)
    return _over_one_minus(base, power, floor2 - 2 * shift).shift2(2 * shift).with_floor2(floor2)


def _w2_parts(d: int, floor2):
    """``W^2_d`` and ``W^3_d`` from the T^x decomposition."""
    pref = (_inv_inf(floor2) ** 3).with_floor2(floor2).scale(3)
    w2_sum = DescSeries.zero().truncate2(floor2)
    w3_sum = DescSeries.zero().truncate2(floor2)
    for d1 in range(d + 1):
        for d2 in range(d - d1 + 1):
            d3 = d - d1 - d2
            a = _tpoch(d1, d2, floor2)
            w2_sum = w2_sum + a
            w3_sum = w3_sum + (a * _tpoch(d2, d3, floor2)).with_floor2(floor2)
    return (pref * w2_sum).with_floor2(floor2), (pref * w3_sum).with_floor2(floor2)


def _w2_inf(floor2) -> DescSeries:
    """``W^2_inf``; terms with leading exponent ``-(d1+1)(d2+1)`` below the floor are dropped."""
    total = DescSeries.zero().truncate2(floor2)
    d1 = 0
    while -2 * (d1 + 1) >= floor2:
        d2 = 0
        while -2 * (d1 + 1) * (d2 + 1) >= floor2:
            total = total + _tpoch(d1, d2, floor2)
            d2 += 1
        d1 += 1
    pref = (_inv_inf(floor2) ** 3).with_floor2(floor2).scale(3)
    return (pref * total).with_floor2(floor2)


def _wt(m: int, n: int, floor2) -> DescSeries:
    return cf.w_tilde(m, n, HalfExp(floor2))


def _bracket(c, floor2) -> DescSeries:
    return cf.closed_bracket(c, -floor2 // 2)


# ------------------------------------------------------------ pure q-series identities
def _q_binomial(ctx: Context):
    rng = random.Random(0)
    out = []
    for _ in range(6):
        a = DescSeries.from_doubled({-2 * rng.randint(1, 3): rng.choice([-2, -1, 1, 3]),
                                     -2 * rng.randint(4, 6): rng.randint(-2, 2)})
        z = DescSeries.from_doubled({-2 * rng.randint(1, 3): rng.choice([-1, 1, 2])})
        out.append(_flag(f"a={a}, z={z}", q_binomial_check(a, z, HalfExp(ctx.floor2))))
    return "all exponents >= floor", out


def _euler(ctx: Context):
    floor2 = ctx.floor2
    xorder = 8
    # prod_{n>=0}(1 - x q^-n) and prod_{n>=0} 1/(1 - x q^-n), factor by factor
    E = [DescSeries.one().truncate2(floor2)] + [DescSeries.zero().truncate2(floor2)] * xorder
    H = list(E)
    n = 0
    while -2 * n >= floor2:
        c = DescSeries.from_doubled({-2 * n: 1})
        for j in range(xorder, 0, -1):
            E[j] = (E[j] - c * E[j - 1]).with_floor2(floor2)
        for j in range(1, xorder + 1):
            H[j] = (H[j] + c * H[j - 1]).with_floor2(floor2)
        n += 1
    out = []
    for k in range(xorder + 1):
        inv_k = inv_q_factorial(k, floor2)
        e_rhs = inv_k.shift2(-k * (k - 1)).scale((-1) ** k).with_floor2(floor2)
        out.append(_cmp(f"e-product x^{k}", E[k], e_rhs, floor2))
        out.append(_cmp(f"h-product x^{k}", H[k], inv_k, floor2))
    return "all exponents >= floor, x-order 8", out


def _msum1(ctx: Context):
    floor2 = ctx.floor2
    out = []
    for d in range(7):
        for m in range(7):
            lhs = DescSeries.zero()
            for k in range(1, m + 1):
                lhs = lhs + inv_q_factorial(k, floor2).shift2(-2 * k * (d + 1))
            rhs = cf.Tx(cf.x_exp(d + 1, m, HalfExp(floor2)), m) - 1
            out.append(_cmp(f"d={d}, m={m}", lhs.with_floor2(floor2), rhs, floor2))
    return "all exponents >= floor, d, m <= 6", out


def _msum2(ctx: Context):
    floor2 = ctx.floor2
    out = []
    for d2 in range(7):
        for d3 in range(7):
            rhs = (_inv_inf(floor2) * cf.Tx(cf.x_binomial_ratio(d2 + 1, d3, HalfExp(floor2)), d3)).with_floor2(floor2)
            out.append(_cmp(f"d2={d2}, d3={d3}", _wt(d2, d3, floor2), rhs, floor2))
    return "all exponents >= floor, d2, d3 <= 6", out


def _leading(ctx: Context):
    floor2 = ctx.floor2
    out = []
    for d in range(7):
        f = _diff(d, floor2)
        top = -2 * (d + 1)
        if top >= floor2:
            out.append(_flag(f"1/[inf]! - 1/[{d}]!", f.top2 == top and f.coeff2(top) == 1, f.top2))
        for m in range(7):
            g = _tpoch(d, m, floor2)
            top = -2 * (d + 1) * (m + 1)
            if top >= floor2:
                out.append(_flag(f"T^x_{m}, d={d}", g.top2 == top and g.coeff2(top) == -1, g.top2))
    return "leading exponent and coefficient, d, m <= 6", out


def _e1(ctx: Context):
    floor2 = ctx.floor2
    lhs = DescSeries.zero().truncate2(floor2)
    d = 0
    while -2 * (d + 1) >= floor2:
        lhs = lhs + _diff(d, floor2)
        d += 1
    rhs = (_inv_inf(floor2) * _lambert_div(ctx.order)).with_floor2(floor2)
    return "all exponents >= floor", [_cmp("E1", lhs, rhs, floor2)]


def _e2(ctx: Context):
    floor2 = ctx.floor2
    rhs = (_inv_inf(floor2) ** 3 * lambert_sigma(ctx.order)).with_floor2(floor2).scale(-3)
    return "all exponents >= floor", [_cmp("E2", _w2_inf(floor2), rhs, floor2)]


def _w2d(ctx: Context):
    out = []
    for d in range(ctx.dmax + 1):
        floor2 = -2 * d
        w2d, _ = _w2_parts(d, floor2)
        rhs = (_inv_inf(floor2) ** 3 * lambert_sigma(d)).with_floor2(floor2).scale(-3)
        out.append(_cmp(f"d={d}", w2d, rhs, floor2))
    return "q >= -d", out


def _wbwc(ctx: Context):
    out = []
    for d in range(1, ctx.dmax + 1):
        floor2 = -2 * (2 * d + 2)
        w2d, w3d = _w2_parts(d, floor2)
        w2p = (w2d - _w2_inf(floor2)).with_floor2(floor2)
        rhs2 = _cube_prefactor(-(d + 2), 2, floor2).scale(6)
        out.append(_cmp(f"W2' d={d}", w2p, rhs2, -2 * (2 * d) + 1))
        inner = (d + 1) - _lambert_div(2 * d + 2, 2).scale(2)
        rhs3 = (_cube_prefactor(-(d + 2), 2, floor2) * inner).with_floor2(floor2).scale(3)
        out.append(_cmp(f"W3 d={d}", w3d, rhs3, -2 * (2 * d + 2) + 1))
    return "W2': q > -2d; W3: q > -2d-2", out


def _double_sum(ctx: Context):
    floor2 = ctx.floor2
    lhs = DescSeries.zero().truncate2(floor2)
    d1 = 0
    # the (d1, k) term has degree <= d1 + 1 - k - (k+1) = d1 - 2k
    while d1 - 2 * (d1 + 1) >= ctx.floor:
        k = d1 + 1
        while d1 - 2 * k >= ctx.floor:
            lhs = lhs + _diff(k, floor2 - 2 * (d1 + 1 - k)).shift2(2 * (d1 + 1 - k))
            k += 1
        d1 += 1
    rhs = _over_one_minus((_inv_inf(floor2) * _lambert_div(ctx.order, 2)).with_floor2(floor2), 1, floor2)
    return "all exponents >= floor", [_cmp("double sum", lhs.with_floor2(floor2), rhs, floor2)]


def _sum_lemma(ctx: Context):
    out = []
    for d in range(ctx.dmax + 1):
        floor2 = -2 * d
        lhs = DescSeries.zero()
        for d1 in range(d + 1):
            lhs = lhs + inv_q_factorial(d1, floor2) * inv_q_factorial(d - d1, floor2)
        rhs = ((_inv_inf(floor2) ** 2) * ((d + 1) - _lambert_div(d).scale(2))).with_floor2(floor2)
        out.append(_cmp(f"d={d}", lhs.with_floor2(floor2), rhs, floor2))
    return "q >= -d", out


def _wt_symmetry(ctx: Context):
    floor2 = ctx.floor2
    out = []
    for m in range(8):
        for n in range(m, 8):
            out.append(_cmp(f"({m}),({n})", _wt(m, n, floor2), _wt(n, m, floor2), floor2))
            shift2 = -2 * m * n + m + n
            row = W_row(m, n, HalfExp(floor2 - shift2)).shift2(shift2).with_floor2(floor2)
            out.append(_cmp(f"W~ vs W ({m}),({n})", _wt(m, n, floor2), row, floor2))
    return "all exponents >= floor, m, n <= 7", out


def _w_hook(ctx: Context):
    """``W_{(m),(n-1,1)}`` in terms of ``W~_{(m),(n-1)}``."""
    floor2 = ctx.floor2
    out = []
    for m in range(6):
        for n in range(2, 7):
            shift2 = 2 * (m * (n - 1) - 1) - (m + n)
            f2 = floor2 - shift2
            inner = _over_one_minus(_wt(m, n - 1, f2), 1, f2)
            tail = (inv_q_factorial(m, f2) * inv_q_factorial(n, f2)).shift2(-2 * (m + 1) * (n - 1))
            rhs = (inner - tail).with_floor2(f2).shift2(shift2)
            lhs = w2(tuple([m]) if m else (), (n - 1, 1), floor2)
            out.append(_cmp(f"({m}),({n - 1},1)", lhs, rhs, floor2))
    return "all exponents >= floor, m <= 5, 2 <= n <= 6", out


def _i2b(ctx: Context):
    out = []
    for d in range(2, ctx.dmax + 1):
        floor2 = -2 * (2 * d + 2)
        total = DescSeries.zero().truncate2(floor2)
        for d2 in range(2, d + 1):
            for d3 in range(d - d2 + 1):
                d1 = d - d2 - d3
                term = _wt(d1, d2 - 1, floor2) * _wt(d3, d1, floor2)
                term = term * inv_q_factorial(d3, floor2) * inv_q_factorial(d2, floor2)
                term = _over_one_minus(term.with_floor2(floor2), 1, floor2)
                total = total + term.shift2(-2 * (d3 + 1) * (d2 - 1))
        lhs = total.shift2(-2 * (d + 2)).with_floor2(floor2).scale(-6)
        rhs = _cube_prefactor(-(d + 3), 3, floor2).scale(-6)
        out.append(_cmp(f"d={d}", lhs, rhs, -2 * (2 * d) + 1))
    return "q > -2d", out


def _i2aa(ctx: Context):
    out = []
    for d in range(1, ctx.dmax + 1):
        floor2 = -2 * (2 * d + 1)
        total = DescSeries.zero()
        for d1 in range(d):
            d3 = d - 1 - d1
            total = total + _wt(d1, 0, floor2) * _wt(0, d3, floor2) * _wt(d3, d1, floor2)
        lhs = _over_one_minus(total.with_floor2(floor2), 2, floor2).shift2(-2 * (d + 2)).scale(-3)
        inner = d - _lambert_div(2 * d + 1).scale(2)
        rhs = (_cube_prefactor(-(d + 2), 2, floor2) * inner).with_floor2(floor2).scale(-3)
        out.append(_cmp(f"d={d}", lhs.with_floor2(floor2), rhs, floor2))
    return "q >= -2d-1", out


# ------------------------------------------------------------ vertex-side identities
def _normalized(series: DescSeries, d: int) -> DescSeries:
    """``(-1)^d q^{-(g(d)-1)} series``."""
    out = series.shift2(-2 * (genus(d) - 1))
    return out if d % 2 == 0 else -out


def _id2_rhs(d: int, floor2) -> DescSeries:
    second = (_cube_prefactor(-(d + 2), 2, floor2) * (binom(d + 1, 2) + 3 - lambert_sigma(-floor2 // 2).scale(3)))
    return (_bracket(binom(d + 2, 2), floor2) + second.scale(3)).with_floor2(floor2)


def _fd2_rhs(d: int, floor2) -> DescSeries:
    order = -floor2 // 2
    third = DescSeries.from_doubled({-6: 1}).div_one_minus(3, floor2 - 2 * (d - 1))
    inner = binom(d + 1, 2) - lambert_sigma(order).scale(3) - third.scale(3)
    second = (_cube_prefactor(-(d - 1), 2, floor2) * inner).mul_one_minus(3).with_floor2(floor2).scale(3)
    return (_bracket(binom(d + 2, 2), floor2) - second).with_floor2(floor2)


def _idwd(ctx: Context):
    out = []
    for d in range(1, ctx.dmax + 1):
        top = d * (d - 3) // 2
        lo = top - d - 1
        wd = cf.wd_direct(d, -(d + 1)).shift2(2 * top)
        rhs = wd if d % 2 == 0 else -wd
        out.append(_cmp(f"d={d}", ctx.pipeline.instanton(d), rhs, 2 * lo))
    return "q >= (d^2-3d)/2 - d - 1", out


def _id2(ctx: Context):
    out = []
    for d in range(1, ctx.dmax + 1):
        floor2 = -2 * (2 * d - 1)
        lhs = _normalized(ctx.pipeline.instanton(d), d)
        out.append(_cmp(f"d={d}", lhs, _id2_rhs(d, floor2), floor2))
    return "(-1)^d q^{-(g-1)} I(d) on q > -2d", out


def _i2_term(d: int, floor2) -> DescSeries:
    """``I^(2)(d)`` from Hopf-link invariants with one hook partition."""
    shift2 = -2 * (genus(d) - 1)
    total = DescSeries.zero().truncate2(floor2)
    for d2 in range(2, d + 1):
        for d1 in range(d - d2 + 1):
            d3 = d - d1 - d2
            a, b, c = (d1,) if d1 else (), (d2 - 1, 1), (d3,) if d3 else ()
            k2 = kappa(a) + kappa(b) + kappa(c)
            f2 = floor2 - shift2 - k2
            term = w2(a, b, f2) * w2(b, c, f2) * w2(c, a, f2)
            total = total + term.shift2(k2 + shift2).with_floor2(floor2)
    return total.scale(3).with_floor2(floor2)


def _degree_id2(ctx: Context):
    out = []
    for d in range(2, ctx.dmax + 1):
        I = _normalized(ctx.pipeline.instanton(d), d)
        floor2 = -2 * (2 * d + 2)
        first = (I - cf.wd_direct(d, floor2 // 2)).with_floor2(floor2)
        out.append(_flag(f"first d={d}", first.top2 == -2 * (d + 2), first.top2))
        second = (first - _i2_term(d, floor2)).with_floor2(floor2)
        out.append(_flag(f"second d={d}", second.top2 == -2 * (2 * d + 1), second.top2))
    return "degrees relative to q^(g-1): exactly -(d+2) and -(2d+1)", out


def _i1id(ctx: Context):
    out = []
    for d in range(2, ctx.dmax + 1):
        lhs = (ctx.pipeline.instanton(1) * ctx.pipeline.instanton(d - 1))
        floor2 = -2 * (2 * d - 1)
        shift = genus(d) - d
        rhs = (_cube_prefactor(0, 2, floor2 - 2 * shift) * (binom(d + 1, 2) - lambert_sigma(2 * d).scale(3)))
        rhs = rhs.scale(3).shift2(2 * shift).with_floor2(floor2 + 2 * genus(d))
        rhs = rhs if d % 2 == 0 else -rhs
        out.append(_cmp(f"d={d}", lhs.with_floor2(floor2 + 2 * genus(d)), rhs, floor2 + 2 * genus(d)))
    return "q >= g(d) - 2d + 1", out


def _fd2(ctx: Context):
    out = []
    for d in range(4, ctx.dmax + 1):
        floor2 = -2 * (2 * d - 5)
        lhs = _normalized(ctx.pipeline.free_energy(d), d)
        out.append(_cmp(f"d={d}", lhs, _fd2_rhs(d, floor2), floor2))
    return "(-1)^d q^{-(g-1)} F(d) on q > -(2d-4), d >= 4", out


# ------------------------------------------------------------ closed forms and generating series
def _wd_closed(ctx: Context):
    out = []
    for d in range(ctx.dmax + 1):
        out.append(_cmp(f"d={d}", cf.wd_direct(d, -d), cf.wd_closed(d, -d), -2 * d))
    return "q >= -d", out


def _sum_identity(ctx: Context):
    out = []
    for m in range(-3, 13):
        lhs, rhs = cf.sum_identity_sides(m, ctx.order)
        out.append(_cmp(f"m={m}", lhs, rhs, ctx.floor2))
    return "t-order <= -floor, -3 <= m <= 12", out


def _asc_poly_series(polys: list, factor: DescSeries, order: int) -> list:
    """Coefficients of ``factor(q) * sum polys[j] q^j`` for ascending ``factor``."""
    f = to_ascending(factor, order)
    out = []
    for n in range(order + 1):
        acc = cf.PolyInD()
        for j in range(n + 1):
            if f[n - j]:
                acc = acc + polys[j].scale(f[n - j])
        out.append(acc)
    return out


def _min_e(ctx: Context):
    order = ctx.order
    M = cf.mdelta_series(order)
    E = [cf.e_poly(j) for j in range(order + 1)]
    rhs = _asc_poly_series(E, one_minus(1) ** 2 * one_minus(2), order)
    return "q-order <= -floor", [_flag(f"q^{n}", M[n] == rhs[n], -2 * n) for n in range(order + 1)]


def _gyz_shape(ctx: Context):
    order = min(ctx.order, 15)
    floor2 = -2 * order
    M = cf.mdelta_series(order)
    inv_pref = invert_unit(one_minus(1) ** 2 * one_minus(2), floor2=floor2)
    lhs = _asc_poly_series(list(M), inv_pref, order)
    h = cf.hilbert_euler(order)
    G2 = cf.G2(order)
    out = []
    for n in range(order + 1):
        b = -3 * sum(G2[k] * h[n - k] for k in range(n + 1))
        out.append(_flag(f"q^{n}", lhs[n] == cf.PolyInD.from_binomial(h[n], b), -2 * n))
    # D G2 = sum_k k^2 q^k/(1-q^k)^2 as an independent Lambert series
    dg = [0] * (order + 1)
    for k in range(1, order + 1):
        for i in range(1, order // k + 1):
            dg[i * k] += k * k * i
    out.append(_flag("DG2", dg == cf.DG2(order)))
    return "q-order <= min(15, -floor)", out


def _mdelta(ctx: Context):
    tables = ctx.tables()
    out = []
    for d in range(2, ctx.dmax + 1):
        M = tables[d].M
        polys = cf.mdelta_series(d - 2)
        for delta in range(d - 1):
            out.append(_flag(f"M^{delta}_{d}", M[delta] == polys[delta](d), 2 * delta))
    return "delta <= d-2, 2 <= d <= dmax", out


def _mdelta2(ctx: Context):
    tables = ctx.tables()
    out = []
    for d in range(4, ctx.dmax + 1):
        gen = cf.mdelta2_series(d)
        M = tables[d].M
        for delta in range(2 * d - 4):
            out.append(_flag(f"M^{delta}_{d}", M[delta] == gen.coeff(delta), 2 * delta))
    return "delta <= 2d-5, 4 <= d <= dmax", out


def _ndelta(ctx: Context):
    tables = ctx.tables()
    out = []
    for d in range(2, ctx.dmax + 1):
        t = tables[d]
        for delta in range(d - 1):
            sign = -1 if (t.gd + d - 1 - delta) % 2 else 1
            out.append(_flag(f"n_{delta}({d})", cf.ndelta_poly(delta, d) == sign * t.n[t.gd - delta]))
    return "delta <= d-2, 2 <= d <= dmax", out


def _kkv(ctx: Context):
    out = []
    for d in range(2, 11):
        for delta in range(d + 3):
            out.append(_flag(f"d={d}, delta={delta}",
                             cf.kkv_prediction(d, delta) == cf.ndelta_poly(delta, d, check_window=False)))
    for d in (5, 6, 7):
        ways = [cf.ndelta_generating(d, 10, m) for m in ("direct", "M&n", "NEC", "NdeltaGen")]
        out.append(_flag(f"generating d={d}", all(w == ways[0] for w in ways)))
    return "delta <= d+2; t-order 10 for d = 5, 6, 7", out


def _e_identity(ctx: Context):
    tables = ctx.tables()
    out = []
    for d in range(1, ctx.dmax + 1):
        t = tables[d]
        e = cf.kkv_series(d, max(d, 1)).series
        sign = 1 if d % 2 else -1
        for j in range(min(d - 2, t.gd) + 1):
            out.append(_flag(f"E^(g-{j})_{d}", t.E[t.gd - j] == sign * e.coeff2(-2 * j)))
    return "j <= d-2", out


def _rel_hilbert(ctx: Context):
    tables = ctx.tables()
    out = []
    for d in range(3, ctx.dmax + 1):
        t = tables[d]
        gen = cf.rel_hilbert_prediction(d)
        sign = 1 if d % 2 else -1
        for j in range(min(2 * d - 5, t.gd - 1) + 1):
            out.append(_flag(f"E^(g-{j})_{d}", t.E[t.gd - j] == sign * gen.coeff(j)))
        m2 = cf.mdelta2_series(d).series
        lhs = (gen.series * one_minus(1) ** 2 * one_minus(2)).with_floor2(m2.floor2)
        out.append(_cmp(f"(1-q)^2(1-q^2) x series d={d}", lhs, m2, m2.floor2))
    return "j <= 2d-5 and j < g(d), 3 <= d <= dmax", out


def _c2_table(ctx: Context):
    fits = cf.correction_extract(2, range(5, ctx.dmax + 1), ctx.tables())
    return "tabulated d ranges, d <= dmax", [
        _flag(f"C^{f.delta}_({f.d},2)", f.matches, 2 * f.delta) for f in fits if f.expected is not None
    ]


def _c2_negated(ctx: Context):
    fits = cf.correction_extract(2, range(5, ctx.dmax + 1), ctx.tables())
    return "residue = -(table value) for d >= delta + 6", [
        _flag(f"C^{f.delta}_({f.d},2)", f.value == -f.expected, 2 * f.delta)
        for f in fits
        if f.expected is not None and f.d >= f.delta + 6
    ]


@dataclass(frozen=True)
class Identity:
    name: str
    run: Callable[[Context], tuple]
    description: str


IDENTITIES: dict[str, Identity] = {
    entry.name: entry
    for entry in [
        Identity("q-binomial", _q_binomial, "q-binomial theorem for sample a, z"),
        Identity("Euler-products", _euler, "product expansions of e_k and h_k at (1, q^-1, q^-2, ...)"),
        Identity("msum1", _msum1, "truncated q-exponential through T^x"),
        Identity("msum2", _msum2, "W~ through T^x of a Pochhammer ratio"),
        Identity("lm:leading", _leading, "leading terms of 1/[inf]! - 1/[d]! and of the T^x terms"),
        Identity("E1", _e1, "sum_d (1/[inf]! - 1/[d]!)"),
        Identity("E2", _e2, "W^2_inf = -3 sum q^-i/(1-q^-i)^2 / [inf]!^3"),
        Identity("W2d", _w2d, "W^2_d agrees with W^2_inf on q >= -d"),
        Identity("wbwc", _wbwc, "leading parts of W^2'_d and W^3_d"),
        Identity("double-sum", _double_sum, "double sum over d1 < k"),
        Identity("sum-lemma", _sum_lemma, "sum_{d1+d3=d} 1/([d1]! [d3]!)"),
        Identity("W-tilde", _wt_symmetry, "W~ symmetry and its relation to W_(m),(n)"),
        Identity("W-hook", _w_hook, "W_(m),(n-1,1) through W~_(m),(n-1)"),
        Identity("I2b", _i2b, "leading part of I^(2b)"),
        Identity("I2aa", _i2aa, "leading part of I^(2a')"),
        Identity("Idwd", _idwd, "I(d) against (-1)^d q^{(d^2-3d)/2} W_d"),
        Identity("Id2", _id2, "two leading brackets of I(d)"),
        Identity("degreeofId2", _degree_id2, "degrees after removing W_d and I^(2)"),
        Identity("I1Id", _i1id, "I(1) I(d-1) through W_{d-1}"),
        Identity("Fd2", _fd2, "two leading brackets of F(d)"),
        Identity("Wd-closed", _wd_closed, "W_d direct sum against its closed form"),
        Identity("SumIdentity", _sum_identity, "sum_k C(m-k,k) t^k in closed form"),
        Identity("MinE", _min_e, "M_delta(x) through e_j(x)"),
        Identity("GYZ-shape", _gyz_shape, "M series against (C(x+2,2) - 3 G2)/prod(1-q^n)^3"),
        Identity("Mdelta", _mdelta, "vertex M^delta_d against M_delta(d)"),
        Identity("Mdelta2", _mdelta2, "vertex M^delta_d against the refined series"),
        Identity("Ndelta", _ndelta, "vertex n^{g-delta}_d against n_delta(d)"),
        Identity("KKV", _kkv, "KKV prediction and the four routes to sum n_delta t^delta"),
        Identity("E-identity", _e_identity, "E^{g-j}_d against (-1)^{d+1} e_j(d)"),
        Identity("rel-Hilbert", _rel_hilbert, "E^{g-j}_d against the relative Hilbert prediction"),
        Identity("C_{d,2}-table", _c2_table, "C^delta_{d,2} residues against the tabulated values"),
        Identity("C_{d,2}-negated", _c2_negated, "C^delta_{d,2} residues against the negated table"),
    ]
}


def _exponent_text(e2) -> str:
    return str(HalfExp(int(e2))) if e2 is not None else None


def run_identity(name: str, floor: int | None = None, dmax: int = 8, ctx: Context | None = None) -> IdentityResult:
    if name not in IDENTITIES:
        raise UnknownIdentityError(name)
    if ctx is None:
        ctx = Context(floor=-20 if floor is None else -abs(floor), dmax=dmax)
    window, checks = IDENTITIES[name].run(ctx)
    if not checks:
        return IdentityResult(name, window, "skipped")
    bad = [c for c in checks if c.mismatch2 is not None]
    if bad:
        return IdentityResult(name, window, "fail", f"{bad[0].label}: q^{_exponent_text(bad[0].mismatch2)}", len(checks))
    return IdentityResult(name, window, "pass", None, len(checks))


def run_suite(names=None, floor: int = -20, dmax: int = 8, ctx: Context | None = None) -> list[IdentityResult]:
    names = list(IDENTITIES) if names is None else list(names)
    for name in names:
        if name not in IDENTITIES:
            raise UnknownIdentityError(name)
    ctx = ctx or Context(floor=-abs(floor), dmax=dmax)
    return [run_identity(name, ctx=ctx) for name in names]
