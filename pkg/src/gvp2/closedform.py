"""Closed formulas and generating series for local P^2.

Ascending power series in q are carried as DescSeries through q -> q^-1:
the coefficient of ``q^n`` sits at exponent ``-n`` (see ``qseries.from_ascending``).
Series in the vertex base ``q^-1`` (W_d and its relatives) are stored as is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .bases import binom
from .qseries import (
    DescSeries,
    PrecisionError,
    _floor2,
    exact,
    from_ascending,
    inv_q_factorial,
    invert_unit,
    lambert_sigma,
    one_minus,
    series_sqrt,
    to_ascending,
)

__all__ = [
    "WindowError",
    "PolyInD",
    "QGen",
    "XSeries",
    "Tx",
    "x_exp",
    "x_binomial_ratio",
    "w_tilde",
    "wd_direct",
    "wd_closed",
    "closed_bracket",
    "mdelta_series",
    "mdelta2_series",
    "mdelta2_coeff",
    "ndelta_poly",
    "q_of_t",
    "t_of_q",
    "compose",
    "t_q_change",
    "sum_identity_sides",
    "ndelta_generating",
    "hilbert_euler",
    "e_poly",
    "kkv_b",
    "kkv_series",
    "kkv_prediction",
    "rel_hilbert_prediction",
    "C2_TABLE",
    "CorrectionFit",
    "correction_extract",
    "G2",
    "G2_gyz",
    "DG2",
    "inverse_delta",
    "identity_suite",
]


class WindowError(ValueError):
    """A coefficient was requested outside the proven validity window."""


# ------------------------------------------------------------ quadratics in d
@dataclass(frozen=True)
class PolyInD:
    """``c0 + c1 d + c2 d^2`` with exact rational coefficients."""

    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def from_binomial(cls, a, b, j: int = 0) -> "PolyInD":
        """``a C(d+2-j, 2) + b``."""
        a, b = Fraction(a), Fraction(b)
        return cls(a * (2 - j) * (1 - j) / 2 + b, a * (3 - 2 * j) / 2, a / 2)

    def as_binomial(self, j: int = 0) -> tuple | None:
        """``(a, b)`` with ``self == a C(d+2-j, 2) + b``, or None if not of that shape."""
        a = 2 * self.c2
        if self.c1 != a * (3 - 2 * j) / 2:
            return None
        return exact(a), exact(self.c0 - a * (2 - j) * (1 - j) / 2)

    def __call__(self, d):
        return exact(self.c0 + self.c1 * d + self.c2 * d * d)

    def __add__(self, other: "PolyInD") -> "PolyInD":
        return PolyInD(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: "PolyInD") -> "PolyInD":
        return PolyInD(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2)

    def scale(self, k) -> "PolyInD":
        return PolyInD(self.c0 * k, self.c1 * k, self.c2 * k)

    def __str__(self) -> str:
        return f"{self.c2}*d^2 + {self.c1}*d + {self.c0}"


@dataclass(frozen=True)
class QGen:
    """Ascending generating series whose coefficients are trusted up to ``valid_through``."""

    label: str
    series: DescSeries
    valid_through: int | None = None

    @property
    def order(self) -> int:
        return int(-self.series.floor2 // 2)

    def coeff(self, n: int):
        if n < 0:
            return 0
        if self.valid_through is not None and n > self.valid_through:
            raise WindowError(f"{self.label}: q^{n} lies outside the window q^0..q^{self.valid_through}")
        if n > self.order:
            raise PrecisionError(f"{self.label}: q^{n} beyond computed order {self.order}")
        return self.series.coeff2(-2 * n)

    def coeffs(self, upto: int | None = None) -> list:
        if upto is None:
            upto = self.order if self.valid_through is None else min(self.order, self.valid_through)
        return [self.coeff(n) for n in range(upto + 1)]


# ------------------------------------------------------------ ascending helpers
def _asc_mono(n: int, coeff=1) -> DescSeries:
    return DescSeries.from_doubled({-2 * n: coeff})


def _one_minus_q_pow(e: int, floor2) -> DescSeries:
    """``(1-q)^e`` (ascending), any integer e."""
    base = one_minus(1) ** abs(e)
    return base if e >= 0 else invert_unit(base, floor2=floor2)


@lru_cache(maxsize=None)
def _inv_inf_cubed(floor2: int) -> DescSeries:
    return (inv_q_factorial(None, floor2) ** 3).with_floor2(floor2)


def closed_bracket(c, order: int) -> DescSeries:
    """``(c - 3 sum_{i>=1} q^i/(1-q^i)^2) / prod(1-q^n)^3`` to ``q^order``.

    With q read as ``q^-1`` this is also the vertex-base series
    ``(c - 3 sum q^-i/(1-q^-i)^2)/[inf]!^3``.
    """
    floor2 = -2 * order
    return ((exact(c) - lambert_sigma(order).scale(3)) * _inv_inf_cubed(floor2)).with_floor2(floor2)


# ------------------------------------------------------------ T^x operator
class XSeries:
    """``sum_j a_j x^j`` with DescSeries coefficients known for ``j <= xorder``."""

    def __init__(self, coeffs: Sequence[DescSeries]):
        self.coeffs = list(coeffs)

    @property
    def xorder(self) -> int:
        return len(self.coeffs) - 1

    def __sub__(self, other: "XSeries") -> "XSeries":
        n = min(len(self.coeffs), len(other.coeffs))
        return XSeries([self.coeffs[j] - other.coeffs[j] for j in range(n)])

    def __mul__(self, other) -> "XSeries":
        if isinstance(other, XSeries):
            n = min(len(self.coeffs), len(other.coeffs))
            out = []
            for j in range(n):
                acc = DescSeries.zero()
                for i in range(j + 1):
                    acc = acc + self.coeffs[i] * other.coeffs[j - i]
                out.append(acc)
            return XSeries(out)
        return XSeries([c * other for c in self.coeffs])


def Tx(f: XSeries, m: int) -> DescSeries:
    """``T^x_m f = a_0 + ... + a_m``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > f.xorder:
        raise PrecisionError(f"T^x_{m} needs the x-expansion to order {m}, have {f.xorder}")
    out = DescSeries.zero()
    for c in f.coeffs[: m + 1]:
        out = out + c
    return out


def x_exp(s: int, xorder: int, floor) -> XSeries:
    """``1/(x q^-s; q^-1)_inf = prod_{i>=0} 1/(1 - x q^{-s-i})`` built factor by factor."""
    floor2 = _floor2(floor)
    if s <= 0:
        raise ValueError("the product converges only for s > 0")
    coeffs = [DescSeries.one().truncate2(floor2)] + [DescSeries.zero().truncate2(floor2)] * xorder
    i = 0
    while -2 * (s + i) >= floor2:
        c = DescSeries.from_doubled({-2 * (s + i): 1})
        for j in range(1, xorder + 1):
            coeffs[j] = (coeffs[j] + c * coeffs[j - 1]).with_floor2(floor2)
        i += 1
    return XSeries(coeffs)


def x_binomial_ratio(s: int, xorder: int, floor) -> XSeries:
    """``(q^-s; q^-1)_inf / (x q^-s; q^-1)_inf`` as a series in x."""
    floor2 = _floor2(floor)
    num = DescSeries.one()
    i = 0
    while -2 * (s + i) >= floor2:
        num = num.mul_one_minus(s + i).with_floor2(floor2)
        i += 1
    num = num.truncate2(floor2) if num.is_exact else num
    return x_exp(s, xorder, floor) * num


# ------------------------------------------------------------ W_d
@lru_cache(maxsize=None)
def _w_tilde2(m: int, n: int, floor2: int) -> DescSeries:
    inv_m = inv_q_factorial(m, floor2)
    out = DescSeries.zero()
    for k in range(n + 1):
        out = out + (inv_m * inv_q_factorial(k, floor2)).shift2(-2 * k * (m + 1))
    return out.with_floor2(floor2)


def w_tilde(m: int, n: int, floor) -> DescSeries:
    """``sum_{k<=n} q^{-k(m+1)} / ([m]! [k]!)`` in the base q^-1."""
    return _w_tilde2(m, n, _floor2(floor))


def wd_direct(d: int, floor) -> DescSeries:
    """The triple sum over ``d1+d2+d3 = d`` of ``W~_{d1 d2} W~_{d2 d3} W~_{d3 d1}``."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    floor2 = _floor2(floor)
    out = DescSeries.zero().truncate2(floor2)
    for d1 in range(d + 1):
        for d2 in range(d - d1 + 1):
            d3 = d - d1 - d2
            term = _w_tilde2(d1, d2, floor2) * _w_tilde2(d2, d3, floor2) * _w_tilde2(d3, d1, floor2)
            out = out + term.with_floor2(floor2)
    return out.with_floor2(floor2)


def wd_closed(d: int, floor) -> DescSeries:
    """``(C(d+2,2) - 3 sum q^-i/(1-q^-i)^2) / [inf]!^3``; equals W_d on q >= -d."""
    floor2 = _floor2(floor)
    order = int(-floor2 // 2)
    return closed_bracket(binom(d + 2, 2), order).with_floor2(floor2)


# ------------------------------------------------------------ M_delta
def _prefactor_12(order: int) -> DescSeries:
    """``(1-q)^2 (1-q^2) / prod(1-q^n)^3``."""
    floor2 = -2 * order
    return (one_minus(1) ** 2 * one_minus(2) * _inv_inf_cubed(floor2)).with_floor2(floor2)


@lru_cache(maxsize=None)
def mdelta_series(order: int) -> tuple[PolyInD, ...]:
    """``M_0(x), ..., M_order(x)`` with ``M_delta(x) = A_delta C(x+2,2) + B_delta``.

    Valid as GV data in degree d for ``d >= delta + 2``.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    A = _prefactor_12(order)
    B = (A * lambert_sigma(order)).with_floor2(-2 * order).scale(-3)
    return tuple(
        PolyInD.from_binomial(a, b) for a, b in zip(to_ascending(A, order), to_ascending(B, order))
    )


def mdelta2_series(d: int, order: int | None = None) -> QGen:
    """Refined generating series for ``M^delta_d``, trusted for ``delta <= 2d-5``."""
    window = 2 * d - 5
    if order is None:
        order = max(window, 0)
    floor2 = -2 * order
    first = (_prefactor_12(order) * (binom(d + 2, 2) - lambert_sigma(order).scale(3))).with_floor2(floor2)
    third = _asc_mono(3).div_one_minus(3, floor2)
    inner = binom(d + 1, 2) - lambert_sigma(order).scale(3) - third.scale(3)
    second = one_minus(2) * one_minus(3) * _inv_inf_cubed(floor2) * inner
    second = second.shift2(-2 * (d - 1)).scale(3).with_floor2(floor2)
    return QGen(f"mdelta2(d={d})", (first - second).with_floor2(floor2), window)


def mdelta2_coeff(d: int, delta: int):
    return mdelta2_series(d, max(delta, 0)).coeff(delta)


def ndelta_poly(delta: int, d: int, check_window: bool = True):
    """``n_delta(d) = sum_{j<=delta} M_j(d) C(d^2-3d+3-delta-j, delta-j)``."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if check_window and d < delta + 2:
        raise WindowError(f"n_{delta}(d) needs d >= {delta + 2}")
    M = mdelta_series(delta)
    return exact(sum(Fraction(M[j](d)) * binom(d * d - 3 * d + 3 - delta - j, delta - j) for j in range(delta + 1)))


# ------------------------------------------------------------ t <-> q
def q_of_t(order: int) -> DescSeries:
    """``q(t) = (1 + 2t - sqrt(1+4t)) / (2t)`` as an ascending series in t."""
    floor2 = -2 * (order + 1)
    root = series_sqrt(DescSeries.from_doubled({0: 1, -2: 4}), floor2)
    num = DescSeries.from_doubled({0: 1, -2: 2}) - root
    if num.coeff2(0) != 0:
        raise ArithmeticError("numerator of q(t) must vanish at t = 0")
    return num.shift2(2).scale(Fraction(1, 2)).with_floor2(-2 * order)


def t_of_q(order: int) -> DescSeries:
    """``t(q) = q / (1-q)^2`` as an ascending series in q."""
    floor2 = -2 * order
    return _asc_mono(1).div_one_minus(1, floor2).div_one_minus(1, floor2)


def compose(f: DescSeries, g: DescSeries, order: int) -> DescSeries:
    """``f(g(t))`` for ascending series with ``g(0) = 0``, to ``t^order``."""
    if g.coeff2(0) != 0:
        raise ValueError("inner series must have zero constant term")
    floor2 = -2 * order
    coeffs = to_ascending(f, order)
    out = DescSeries.zero().truncate2(floor2)
    power = DescSeries.one()
    for c in coeffs:
        if c:
            out = out + power.scale(c).with_floor2(floor2)
        power = (power * g).with_floor2(floor2)
    return out.with_floor2(floor2)


def t_q_change(direction: str, series: DescSeries, order: int) -> DescSeries:
    """Substitute ``q = q(t)`` (``"q->t"``) or ``t = t(q)`` (``"t->q"``)."""
    if direction == "q->t":
        return compose(series, q_of_t(order), order)
    if direction == "t->q":
        return compose(series, t_of_q(order), order)
    raise ValueError(f"unknown direction {direction!r}")


def sum_identity_sides(m: int, order: int) -> tuple[DescSeries, DescSeries]:
    """Both sides of ``sum_k C(m-k,k) t^k = (1+4t)^{-1/2} ((1+sqrt(1+4t))/2)^{m+1}``."""
    floor2 = -2 * order
    lhs = from_ascending([binom(m - k, k) for k in range(order + 1)], order)
    root = series_sqrt(DescSeries.from_doubled({0: 1, -2: 4}), floor2)
    half = (root + 1).scale(Fraction(1, 2)).with_floor2(floor2)
    if m + 1 >= 0:
        power = (half ** (m + 1)).with_floor2(floor2)
    else:
        power = invert_unit(half ** (-m - 1), floor2=floor2)
    rhs = (invert_unit(root, floor2=floor2) * power).with_floor2(floor2)
    return lhs, rhs


def ndelta_generating(d: int, order: int, method: str) -> list:
    """``n_0(d), ..., n_order(d)`` through one of four routes.

    ``"direct"`` evaluates ndelta_poly outside its window; ``"M&n"`` and
    ``"NdeltaGen"`` substitute q(t) into the M_j or bracket forms; ``"NEC"``
    uses the Euler numbers e_j(d).
    """
    floor2 = -2 * order
    if method == "direct":
        return [ndelta_poly(delta, d, check_window=False) for delta in range(order + 1)]
    if method == "M&n":
        M = mdelta_series(order)
        series = from_ascending([M[j](d) for j in range(order + 1)], order)
        series = (series * _one_minus_q_pow(-(d * d - 3 * d + 2), floor2)).div_one_minus(2, floor2)
    elif method == "NEC":
        series = kkv_series(d, order).series * _one_minus_q_pow(-(d * d - 3 * d), floor2)
    elif method == "NdeltaGen":
        series = closed_bracket(binom(d + 2, 2), order) * _one_minus_q_pow(-(d * d - 3 * d), floor2)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = t_q_change("q->t", series.with_floor2(floor2), order)
    return to_ascending(out, order)


# ------------------------------------------------------------ KKV
def hilbert_euler(order: int) -> list[int]:
    """``e((P^2)^{(j)})`` for j <= order, from ``1/prod(1-q^n)^3``."""
    return to_ascending(_inv_inf_cubed(-2 * order), order)


def e_poly(j: int) -> PolyInD:
    """``e_j(x) = (C(x+2,2) - j) e((P^2)^{(j)})``."""
    h = hilbert_euler(j)[j]
    return PolyInD.from_binomial(h, -j * h)


def kkv_b(g: int, k: int) -> int:
    """``b(g,k) = 2(g-1) prod_{i=1}^{k-1} (2g-(k+2)-i) / k!`` and ``b(g,0) = 1``."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    num = 2 * (g - 1)
    for i in range(1, k):
        num *= 2 * g - (k + 2) - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return exact(Fraction(num, den))


def kkv_series(d: int, order: int) -> QGen:
    """``sum_j e_j(d) q^j``; the fibration reading is claimed for ``j <= d+2``."""
    h = hilbert_euler(order)
    c = binom(d + 2, 2)
    return QGen(f"kkv(d={d})", from_ascending([(c - j) * h[j] for j in range(order + 1)], order), d + 2)


def kkv_prediction(d: int, delta: int) -> int:
    """``n_delta(d)`` predicted as ``sum_j b(g-j, delta-j) e_j(d)``."""
    g = (d - 1) * (d - 2) // 2
    h = hilbert_euler(delta)
    c = binom(d + 2, 2)
    return sum(kkv_b(g - j, delta - j) * (c - j) * h[j] for j in range(delta + 1))


def rel_hilbert_prediction(d: int, order: int | None = None) -> QGen:
    """Predicted ``sum_j e(C^d(P^2)^{(j)}) q^j`` modulo ``q^{2d-4}``."""
    window = 2 * d - 5
    if order is None:
        order = max(window, 0)
    floor2 = -2 * order
    first = closed_bracket(binom(d + 2, 2), order)
    third = _asc_mono(3).div_one_minus(3, floor2)
    inner = binom(d + 1, 2) - lambert_sigma(order).scale(3) - third.scale(3)
    second = (_inv_inf_cubed(floor2) * inner).shift2(-2 * (d - 1)).scale(3)
    second = (second * one_minus(3)).div_one_minus(1, floor2).div_one_minus(1, floor2)
    return QGen(f"rel_hilbert(d={d})", (first - second).with_floor2(floor2), window)


# ------------------------------------------------------------ corrections
# C^delta_{d,2} = a C(d,2) + b for d >= dmin
C2_TABLE: dict[int, tuple[int, int, int]] = {
    0: (6, 0, 5),
    1: (12, -18, 6),
    2: (24, -90, 6),
    3: (30, -252, 7),
    4: (33, -549, 7),
    5: (-15, -882, 8),
}


@dataclass(frozen=True)
class CorrectionFit:
    d: int
    delta: int
    value: int | Fraction
    expected: int | None

    @property
    def matches(self) -> bool | None:
        return None if self.expected is None else self.value == self.expected

    def to_dict(self) -> dict:
        return {"d": self.d, "delta": self.delta, "value": str(self.value),
                "expected": self.expected, "matches": self.matches}


def _c2_expected(d: int, delta: int) -> int | None:
    entry = C2_TABLE.get(delta)
    if entry is None or d < entry[2]:
        return None
    a, b, _ = entry
    return a * binom(d, 2) + b


def correction_extract(j: int, d_range: Iterable[int], tables: Mapping[int, object]) -> list[CorrectionFit]:
    """Residues of the vertex M^delta_d after the closed-form C_{d,0} + C_{d,1} part.

    ``j = 2`` reads the residue at ``delta + 2d - 4``; ``j = 3`` reads it at
    ``delta + 3d - 9`` and additionally subtracts tabulated C_{d,2} values.
    """
    if j not in (2, 3):
        raise ValueError("only j = 2 and j = 3 are supported")
    out = []
    for d in d_range:
        if d not in tables:
            raise PrecisionError(f"no vertex table for degree {d}")
        M = tables[d].M
        onset = 2 * d - 4 if j == 2 else 3 * d - 9
        if onset < 0:
            continue
        for delta in range(len(M) - onset):
            shifted = delta + onset
            residue = M[shifted] - mdelta2_series(d, shifted).series.coeff2(-2 * shifted)
            if j == 2:
                out.append(CorrectionFit(d, delta, exact(residue), _c2_expected(d, delta)))
                continue
            c2 = _c2_expected(d, shifted - (2 * d - 4))
            if c2 is None:
                continue
            out.append(CorrectionFit(d, delta, exact(residue - c2), None))
    return out


# ------------------------------------------------------------ quasimodular series
def G2(order: int) -> list[int]:
    """``sum_{n>=1} sigma_1(n) q^n`` (no constant term)."""
    return to_ascending(lambert_sigma(order), order)


def G2_gyz(order: int) -> list:
    """``-1/24 + sum sigma_1(n) q^n``."""
    out: list = G2(order)
    out[0] = Fraction(-1, 24)
    return out


def DG2(order: int) -> list[int]:
    """``q d/dq G2 = sum n sigma_1(n) q^n``."""
    return [n * c for n, c in enumerate(G2(order))]


def inverse_delta(order: int) -> list[int]:
    """Coefficients of ``q^{-1} prod (1-q^n)^{-24}``, starting at ``q^{-1}``."""
    floor2 = -2 * order
    return to_ascending((inv_q_factorial(None, floor2) ** 24).with_floor2(floor2), order)


def identity_suite(name: str, floor=None, **params) -> bool:
    """Run a registered identity; see ``gvp2.identities``."""
    from .identities import run_identity

    return run_identity(name, floor=floor, **params).status == "pass"
