"""Exact truncated Laurent series in q with half-integer exponents.

A :class:`DescSeries` is an element of ``C[q, q^-1]]`` (finitely many positive
powers, possibly infinitely many negative ones) known exactly down to a
*floor* exponent.  Exponents are stored doubled so that ``q^(1/2)`` is exact.
Coefficients are Python ``int`` whenever integral and :class:`fractions.Fraction`
otherwise, so all arithmetic is exact.

Series that are naturally ascending in q (generating functions in q^n, n >= 0)
are carried by the same type after the substitution q -> q^-1: the ascending
coefficient of q^n is stored at exponent -n.  :func:`from_ascending` and
:func:`to_ascending` convert.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Iterator, Mapping

__all__ = [
    "NEG_INF",
    "HalfExp",
    "DescSeries",
    "SymLaurent",
    "PrecisionError",
    "NotInvertibleError",
    "exact",
    "add",
    "mul",
    "invert_unit",
    "truncate_at",
    "deg_q",
    "q_int",
    "q_factorial",
    "q_factorial_inf",
    "pochhammer",
    "q_binomial_check",
    "lambert_sigma",
    "from_ascending",
    "to_ascending",
    "one_minus",
]

NEG_INF = float("-inf")


class PrecisionError(ValueError):
    """A coefficient below the floor of a series was requested."""


class NotInvertibleError(ZeroDivisionError):
    pass


def exact(x) -> int | Fraction:
    """Normalize a rational to ``int`` when integral, else a reduced Fraction."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return exact(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not allowed")
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True, order=True)
class HalfExp:
    """A half-integer exponent, stored doubled (``doubled=1`` is q^(1/2))."""

    doubled: int

    @classmethod
    def of(cls, value) -> "HalfExp":
        if isinstance(value, HalfExp):
            return value
        return cls(_doubled(value))

    @property
    def value(self) -> int | Fraction:
        return exact(Fraction(self.doubled, 2))

    def __str__(self) -> str:
        return str(self.value)


def _doubled(value) -> int:
    if isinstance(value, HalfExp):
        return value.doubled
    if isinstance(value, bool):
        raise TypeError("bool is not an exponent")
    if isinstance(value, int):
        return 2 * value
    v = Fraction(value) * 2
    if v.denominator != 1:
        raise ValueError(f"exponent {value} is not a half-integer")
    return int(v)


def _floor2(value) -> float | int:
    if value is None:
        return NEG_INF
    if isinstance(value, float) and value == NEG_INF:
        return NEG_INF
    return _doubled(value)


class DescSeries:
    """Truncated Laurent series, dense in doubled exponents.

    ``coeffs[i]`` is the coefficient of ``q^((top2 - i*stride)/2)``.  ``stride``
    is 2 when every exponent has the parity of ``top2`` and 1 otherwise.
    ``floor2`` is the lowest doubled exponent whose coefficient is guaranteed
    exact, or ``NEG_INF`` for an exact Laurent polynomial.
    """

    __slots__ = ("top2", "stride", "coeffs", "floor2")

    def __init__(self, top2, stride, coeffs, floor2):
        # Trusted constructor: callers pass normalized data.
        self.top2 = top2
        self.stride = stride
        self.coeffs = coeffs
        self.floor2 = floor2

    # ----------------------------------------------------------- construction
    @classmethod
    def _build(cls, top2, stride, coeffs, floor2) -> "DescSeries":
        """Trim leading zeros and anything below the floor."""
        if floor2 != NEG_INF and top2 is not None:
            keep = (top2 - floor2) // stride + 1
            if keep < len(coeffs):
                coeffs = coeffs[: max(keep, 0)]
        start = 0
        n = len(coeffs)
        while start < n and not coeffs[start]:
            start += 1
        if start == n:
            return cls(None, 2, (), floor2)
        end = n
        while not coeffs[end - 1]:
            end -= 1
        top2 = top2 - start * stride
        coeffs = tuple(coeffs[start:end])
        if stride == 1 and len(coeffs) > 1 and not any(coeffs[1::2]):
            coeffs = coeffs[::2]
            stride = 2
        return cls(top2, stride, coeffs, floor2)

    @classmethod
    def zero(cls, floor=None) -> "DescSeries":
        return cls(None, 2, (), _floor2(floor))

    @classmethod
    def one(cls) -> "DescSeries":
        return cls(0, 2, (1,), NEG_INF)

    @classmethod
    def monomial(cls, exponent, coeff=1, floor=None) -> "DescSeries":
        return cls.from_doubled({_doubled(exponent): coeff}, _floor2(floor))

    @classmethod
    def from_doubled(cls, terms: Mapping[int, object], floor2=NEG_INF) -> "DescSeries":
        """Build from ``{doubled exponent: coefficient}``."""
        items = {e: exact(c) for e, c in terms.items() if c}
        if floor2 != NEG_INF:
            items = {e: c for e, c in items.items() if e >= floor2}
        if not items:
            return cls(None, 2, (), floor2)
        top2 = max(items)
        parity = {e % 2 for e in items}
        stride = 2 if len(parity) == 1 else 1
        low = min(items)
        coeffs = [0] * ((top2 - low) // stride + 1)
        for e, c in items.items():
            coeffs[(top2 - e) // stride] = c
        return cls(top2, stride, tuple(coeffs), floor2)

    @classmethod
    def from_terms(cls, terms: Mapping, floor=None) -> "DescSeries":
        """Build from ``{exponent: coefficient}`` with int/Fraction/HalfExp exponents."""
        return cls.from_doubled({_doubled(e): c for e, c in terms.items()}, _floor2(floor))

    @classmethod
    def polynomial(cls, coeffs: Iterable, top=0) -> "DescSeries":
        """Exact Laurent polynomial ``sum c_i q^(top - i)``."""
        t2 = _doubled(top)
        return cls.from_doubled({t2 - 2 * i: c for i, c in enumerate(coeffs)})

    # -------------------------------------------------------------- accessors
    @property
    def is_zero(self) -> bool:
        return self.top2 is None

    @property
    def is_exact(self) -> bool:
        return self.floor2 == NEG_INF

    @property
    def top(self) -> HalfExp | None:
        return None if self.top2 is None else HalfExp(self.top2)

    @property
    def floor(self) -> HalfExp | None:
        return None if self.floor2 == NEG_INF else HalfExp(int(self.floor2))

    @property
    def low2(self):
        """Lowest stored doubled exponent (None for the zero series)."""
        if self.top2 is None:
            return None
        return self.top2 - (len(self.coeffs) - 1) * self.stride

    def coeff2(self, e2: int):
        if e2 < self.floor2:
            raise PrecisionError(f"exponent {Fraction(e2, 2)} is below the floor {Fraction(int(self.floor2), 2)}")
        if self.top2 is None or e2 > self.top2:
            return 0
        k, r = divmod(self.top2 - e2, self.stride)
        if r or k >= len(self.coeffs):
            return 0
        return self.coeffs[k]

    def coeff(self, exponent):
        return self.coeff2(_doubled(exponent))

    def __getitem__(self, exponent):
        return self.coeff(exponent)

    def terms2(self) -> Iterator[tuple[int, object]]:
        """Nonzero terms as ``(doubled exponent, coefficient)``, descending."""
        if self.top2 is None:
            return
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.top2 - i * self.stride, c

    def terms(self) -> Iterator[tuple[int | Fraction, object]]:
        for e2, c in self.terms2():
            yield exact(Fraction(e2, 2)), c

    def as_dict(self) -> dict:
        return dict(self.terms())

    def dense(self, stride: int, lo2=None) -> list:
        """Coefficient list from ``top2`` downward at the given stride (1 or 2)."""
        if self.top2 is None:
            return []
        if stride == self.stride:
            out = list(self.coeffs)
        else:
            out = [0] * ((len(self.coeffs) - 1) * 2 + 1)
            out[::2] = self.coeffs
        if lo2 is not None:
            n = (self.top2 - lo2) // stride + 1
            if n < len(out):
                del out[max(n, 0):]
        return out

    # ------------------------------------------------------------- arithmetic
    def __neg__(self) -> "DescSeries":
        return DescSeries(self.top2, self.stride, tuple(-c for c in self.coeffs), self.floor2)

    def scale(self, k) -> "DescSeries":
        k = exact(k)
        if not k:
            return DescSeries.zero_like(self)
        return DescSeries(self.top2, self.stride, tuple(exact(c * k) for c in self.coeffs), self.floor2)

    @staticmethod
    def zero_like(s: "DescSeries") -> "DescSeries":
        return DescSeries(None, 2, (), s.floor2)

    def shift2(self, k2: int) -> "DescSeries":
        """Multiply by ``q^(k2/2)``."""
        if k2 == 0:
            return self
        top = None if self.top2 is None else self.top2 + k2
        return DescSeries(top, self.stride, self.coeffs, self.floor2 + k2)

    def shift(self, exponent) -> "DescSeries":
        return self.shift2(_doubled(exponent))

    def __add__(self, other) -> "DescSeries":
        other = _coerce(other)
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "DescSeries":
        return _add(self, _coerce(other), -1)

    def __rsub__(self, other) -> "DescSeries":
        return _add(_coerce(other), self, -1)

    def __mul__(self, other) -> "DescSeries":
        if isinstance(other, DescSeries):
            return _mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> "DescSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "DescSeries":
        if n < 0:
            raise ValueError("use invert() with an explicit floor for negative powers")
        result = DescSeries.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate2(self, floor2) -> "DescSeries":
        """Drop terms below ``floor2``; the result is exact down to ``floor2``."""
        if floor2 < self.floor2:
            raise PrecisionError(
                f"cannot truncate at {Fraction(int(floor2), 2)}: series only exact down to "
                f"{Fraction(int(self.floor2), 2)}"
            )
        if floor2 == self.floor2:
            return self
        if self.top2 is None:
            return DescSeries(None, 2, (), floor2)
        return DescSeries._build(self.top2, self.stride, self.coeffs, floor2)

    def truncate(self, floor) -> "DescSeries":
        return self.truncate2(_doubled(floor))

    def with_floor2(self, floor2) -> "DescSeries":
        """Truncate to ``floor2`` if the series is exact there; otherwise keep own floor."""
        return self.truncate2(max(floor2, self.floor2))

    def invert(self, floor=None, floor2=None) -> "DescSeries":
        if floor2 is None:
            floor2 = _floor2(floor)
        return invert_unit(self, floor2=floor2)

    def div_one_minus(self, h: int, floor2) -> "DescSeries":
        """Divide by ``(1 - q^-h)`` (h > 0 integer), exact down to ``floor2``."""
        if h <= 0:
            raise ValueError("h must be positive")
        f2 = max(floor2, self.floor2)
        if f2 == NEG_INF:
            raise PrecisionError("dividing by (1 - q^-h) needs a finite floor")
        if self.top2 is None:
            return DescSeries(None, 2, (), f2)
        stride = self.stride
        step = (2 * h) // stride if (2 * h) % stride == 0 else None
        if step is None:
            stride = 1
            step = 2 * h
        n = (self.top2 - f2) // stride + 1
        if n <= 0:
            return DescSeries(None, 2, (), f2)
        out = self.dense(stride)
        if len(out) < n:
            out.extend([0] * (n - len(out)))
        else:
            del out[n:]
        for i in range(step, n):
            prev = out[i - step]
            if prev:
                out[i] += prev
        return DescSeries._build(self.top2, stride, out, f2)

    def mul_one_minus(self, h: int) -> "DescSeries":
        """Multiply by ``(1 - q^-h)``."""
        return self - self.shift2(-2 * h)

    # ------------------------------------------------------------- comparison
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
        if not isinstance(other, DescSeries):
            return NotImplemented
        return (
            self.floor2 == other.floor2
            and dict(self.terms2()) == dict(other.terms2())
        )

    def __hash__(self):
        return hash((self.floor2, tuple(self.terms2())))

    def agrees(self, other: "DescSeries", down_to2=None) -> bool:
        """Coefficientwise equality on exponents >= ``down_to2`` (default: common floor)."""
        return self.first_mismatch2(other, down_to2) is None

    def first_mismatch2(self, other: "DescSeries", down_to2=None):
        """Highest doubled exponent (>= the window) where the two series differ."""
        lo = max(self.floor2, other.floor2)
        if down_to2 is not None:
            if down_to2 < lo:
                raise PrecisionError("comparison window reaches below a floor")
            lo = down_to2
        a = dict(self.terms2())
        b = dict(other.terms2())
        bad = [e for e in set(a) | set(b) if e >= lo and a.get(e, 0) != b.get(e, 0)]
        return max(bad) if bad else None

    def substitute_inverse(self) -> "DescSeries":
        """Substitute q -> q^-1 in an exact Laurent polynomial."""
        if not self.is_exact:
            raise PrecisionError("q -> 1/q is only defined here for exact Laurent polynomials")
        return DescSeries.from_doubled({-e: c for e, c in self.terms2()})

    def is_palindromic(self) -> bool:
        return self == self.substitute_inverse()

    # ---------------------------------------------------------------- text io
    def to_text(self) -> str:
        """``top=<d>;floor=<d>;<d>:<num>/<den>,...`` with doubled exponents."""
        top = "none" if self.top2 is None else str(self.top2)
        floor = "-inf" if self.floor2 == NEG_INF else str(int(self.floor2))
        body = ",".join(
            f"{e}:{Fraction(c).numerator}/{Fraction(c).denominator}" for e, c in self.terms2()
        )
        return f"top={top};floor={floor};{body}"

    @classmethod
    def from_text(cls, text: str) -> "DescSeries":
        head_top, head_floor, body = text.strip().split(";", 2)
        if not head_top.startswith("top=") or not head_floor.startswith("floor="):
            raise ValueError(f"malformed series text: {text!r}")
        floor_s = head_floor[len("floor="):]
        floor2 = NEG_INF if floor_s == "-inf" else int(floor_s)
        terms = {}
        for item in filter(None, body.split(",")):
            e, c = item.split(":")
            num, den = c.split("/")
            terms[int(e)] = Fraction(int(num), int(den))
        s = cls.from_doubled(terms, floor2)
        top_s = head_top[len("top="):]
        expected = None if top_s == "none" else int(top_s)
        if s.top2 != expected:
            raise ValueError("series text: top does not match terms")
        return s

    def __repr__(self) -> str:
        if self.top2 is None:
            body = "0"
        else:
            parts = []
            for e, c in self.terms():
                parts.append(f"{c}*q^{e}" if e else f"{c}")
            body = " + ".join(parts)
        if self.floor2 != NEG_INF:
            body += f" + O(q^{Fraction(int(self.floor2), 2)})"
        return f"DescSeries({body})"


def _coerce(x) -> DescSeries:
    if isinstance(x, DescSeries):
        return x
    if isinstance(x, (int, Fraction)):
        x = exact(x)
        return DescSeries(0, 2, (x,), NEG_INF) if x else DescSeries(None, 2, (), NEG_INF)
    raise TypeError(f"cannot use {type(x).__name__} as a series")


def _add(a: DescSeries, b: DescSeries, sign: int) -> DescSeries:
    floor2 = max(a.floor2, b.floor2)
    if b.top2 is None:
        return a.with_floor2(floor2) if a.floor2 != floor2 else a
    if a.top2 is None:
        b = -b if sign < 0 else b
        return b.with_floor2(floor2) if b.floor2 != floor2 else b
    stride = 2 if (a.stride == 2 and b.stride == 2 and (a.top2 - b.top2) % 2 == 0) else 1
    top2 = max(a.top2, b.top2)
    n = (top2 - min(a.low2, b.low2)) // stride + 1
    if floor2 != NEG_INF:
        n = min(n, int((top2 - floor2) // stride) + 1)
    if n <= 0:
        return DescSeries(None, 2, (), floor2)
    out = [0] * n
    for s, sg in ((a, 1), (b, sign)):
        off = (top2 - s.top2) // stride
        src = s.dense(stride)
        m = min(len(src), n - off)
        if sg > 0:
            for i in range(m):
                out[off + i] += src[i]
        else:
            for i in range(m):
                out[off + i] -= src[i]
    if any(type(c) is not int for c in out):
        out = [exact(c) for c in out]
    return DescSeries._build(top2, stride, out, floor2)


def _convolve(A: list, B: list, n: int) -> list:
    """First ``n`` coefficients of the product of two dense coefficient lists."""
    out = [0] * n
    lb = len(B)
    for i, x in enumerate(A):
        if i >= n:
            break
        if not x:
            continue
        lim = min(lb, n - i)
        for j in range(lim):
            out[i + j] += x * B[j]
    return out


def _mul(a: DescSeries, b: DescSeries) -> DescSeries:
    ta = a.top2 if a.top2 is not None else a.floor2
    tb = b.top2 if b.top2 is not None else b.floor2
    floor2 = max(a.floor2 + tb, b.floor2 + ta)
    if a.top2 is None or b.top2 is None:
        return DescSeries(None, 2, (), floor2)
    stride = 2 if (a.stride == 2 and b.stride == 2) else 1
    A = a.dense(stride)
    B = b.dense(stride)
    top2 = a.top2 + b.top2
    n = len(A) + len(B) - 1
    if floor2 != NEG_INF:
        n = min(n, int((top2 - floor2) // stride) + 1)
    if n <= 0:
        return DescSeries(None, 2, (), floor2)
    out = _convolve(A, B, n)
    if any(type(c) is not int for c in out):
        out = [exact(c) for c in out]
    return DescSeries._build(top2, stride, out, floor2)


# --------------------------------------------------------------- operations
def add(a: DescSeries, b: DescSeries) -> DescSeries:
    return a + b


def mul(a: DescSeries, b: DescSeries) -> DescSeries:
    return a * b


def invert_unit(a: DescSeries, floor=None, floor2=None) -> DescSeries:
    """Multiplicative inverse of ``a`` in ``C[q, q^-1]]``, exact down to the floor.

    The inverse is only exact as far as ``a`` itself is known: the result floor
    is ``max(floor, a.floor - 2*deg a)``.
    """
    if floor2 is None:
        floor2 = _floor2(floor)
    if a.top2 is None:
        raise NotInvertibleError("the zero series has no inverse")
    top2 = -a.top2
    floor2 = max(floor2, a.floor2 - 2 * a.top2)
    if floor2 == NEG_INF:
        if len(a.coeffs) == 1:
            return DescSeries(top2, 2, (exact(Fraction(1) / a.coeffs[0]),), NEG_INF)
        raise PrecisionError("inverse of a non-monomial needs a finite floor")
    stride = a.stride
    n = int((top2 - floor2) // stride) + 1
    if n <= 0:
        return DescSeries(None, 2, (), floor2)
    A = list(a.coeffs)
    c0 = A[0]
    unit = c0 in (1, -1)
    inv0 = c0 if unit else Fraction(1, 1) / c0
    out = [0] * n
    out[0] = inv0 if unit else exact(inv0)
    la = len(A)
    for k in range(1, n):
        s = 0
        for i in range(1, min(k, la - 1) + 1):
            ai = A[i]
            if ai:
                s += ai * out[k - i]
        if s:
            out[k] = -s * inv0 if unit else exact(-s * inv0)
    return DescSeries._build(top2, stride, out, floor2)


def truncate_at(f: DescSeries, m) -> DescSeries:
    """``f|_{q >= m}``: drop all terms below exponent ``m``."""
    return f.truncate(m)


def deg_q(f: DescSeries) -> HalfExp:
    if f.top2 is None:
        raise ValueError("deg_q of the zero series is undefined")
    return HalfExp(f.top2)


def one_minus(h: int, coeff=1) -> DescSeries:
    """The polynomial ``1 - coeff*q^-h``."""
    return DescSeries.from_doubled({0: 1, -2 * h: -coeff}) if h else DescSeries.from_doubled({0: 1 - coeff})


def q_int(k: int) -> DescSeries:
    """``[k]_{q^-1} = 1 - q^-k``."""
    return one_minus(k)


@lru_cache(maxsize=None)
def q_factorial(k: int) -> DescSeries:
    """``[k]_{q^-1}! = prod_{j=1}^k (1 - q^-j)`` as an exact Laurent polynomial."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return DescSeries.one()
    return q_factorial(k - 1).mul_one_minus(k)


@lru_cache(maxsize=None)
def _q_factorial_inf(floor2: int) -> DescSeries:
    out = DescSeries.one()
    j = 1
    while -2 * j >= floor2:
        out = out.mul_one_minus(j)
        j += 1
    return DescSeries._build(out.top2, out.stride, out.coeffs, floor2)


def q_factorial_inf(floor) -> DescSeries:
    """``[inf]_{q^-1}! = prod_{j>=1} (1 - q^-j)`` exact down to ``floor``."""
    return _q_factorial_inf(_floor2(floor))


@lru_cache(maxsize=None)
def inv_q_factorial(k: int, floor2: int) -> DescSeries:
    """``1/[k]_{q^-1}!`` down to ``floor2`` (k may be ``None`` for infinity)."""
    out = DescSeries.one()
    j = 1
    while (k is None and 2 * j <= -floor2) or (k is not None and j <= k):
        out = out.div_one_minus(j, floor2)
        j += 1
    if out.floor2 == NEG_INF:
        out = out.truncate2(floor2)
    return out


def pochhammer(a: DescSeries, n: int | None, floor=None) -> DescSeries:
    """``(a; q^-1)_n = prod_{i=0}^{n-1} (1 - a q^-i)`` truncated at ``floor``.

    ``n=None`` is the infinite product, which converges termwise only when
    ``a q^-i`` eventually has negative degree.
    """
    floor2 = _floor2(floor)
    out = DescSeries.one()
    if n is not None:
        for i in range(n):
            out = out * (1 - a.shift2(-2 * i))
            if floor2 != NEG_INF:
                out = out.with_floor2(floor2)
        return out if floor2 == NEG_INF else out.with_floor2(floor2)
    if floor2 == NEG_INF:
        raise PrecisionError("an infinite product needs a finite floor")
    if a.top2 is None:
        return DescSeries.one().truncate2(floor2) if a.floor2 <= floor2 else DescSeries.one().with_floor2(a.floor2)
    i = 0
    while True:
        t2 = a.top2 - 2 * i
        if t2 < floor2:
            break
        if t2 >= 0 and i > 0 and t2 >= a.top2:
            raise ValueError("infinite Pochhammer product does not converge")
        out = (out * (1 - a.shift2(-2 * i))).with_floor2(floor2)
        i += 1
        if i > 10_000_000:
            raise ValueError("infinite Pochhammer product does not converge")
    if a.top2 >= 0 and a.top2 - 2 * i >= 0:
        raise ValueError("infinite Pochhammer product does not converge")
    return out.with_floor2(floor2)


def q_binomial_check(a: DescSeries, z: DescSeries, floor) -> bool:
    """Check ``sum_n (a;q)_n/(q;q)_n z^n == (az;q)_inf/(z;q)_inf`` down to ``floor``.

    Everything is in the base ``q^-1`` used throughout: ``(x; q^-1)``.  Both
    ``a`` and ``z`` must have negative degree (or vanish) for convergence.
    """
    floor2 = _floor2(floor)
    for s in (a, z):
        if s.top2 is not None and s.top2 >= 0:
            raise ValueError("q-binomial check needs deg a < 0 and deg z < 0")
    lhs = DescSeries.zero(HalfExp(floor2))
    zn = DescSeries.one()
    poch = DescSeries.one()
    n = 0
    while True:
        term = (poch * zn * inv_q_factorial(n, floor2)).with_floor2(floor2)
        lhs = lhs + term
        if zn.top2 is None or zn.top2 < floor2:
            break
        n += 1
        poch = (poch * (1 - a.shift2(-2 * (n - 1)))).with_floor2(floor2)
        zn = (zn * z).with_floor2(floor2)
    az = a * z
    rhs_num = pochhammer(az, None, HalfExp(floor2)) if az.top2 is not None else DescSeries.one().truncate2(floor2)
    rhs_den = pochhammer(z, None, HalfExp(floor2)) if z.top2 is not None else DescSeries.one().truncate2(floor2)
    rhs = (rhs_num * invert_unit(rhs_den, floor2=floor2)).with_floor2(floor2)
    return lhs.with_floor2(floor2).agrees(rhs, floor2)


def lambert_sigma(order: int) -> DescSeries:
    """``sum_{i>=1} q^i/(1-q^i)^2 = sum sigma_1(n) q^n`` up to ``q^order``.

    Returned in the ascending convention: the coefficient of ``q^n`` sits at
    exponent ``-n``; the floor is ``-order``.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    floor2 = -2 * order
    out = [0] * (order + 1)
    for i in range(1, order + 1):
        # q^i/(1-q^i)^2 = sum_k k q^{ik}
        for k in range(1, order // i + 1):
            out[i * k] += k
    return DescSeries._build(0, 2, out, floor2)


def from_ascending(coeffs: Iterable, order: int | None = None) -> DescSeries:
    """Ascending power series ``sum c_n q^n`` carried as ``sum c_n q^-n``."""
    coeffs = list(coeffs)
    if order is None:
        order = len(coeffs) - 1
    return DescSeries._build(0, 2, [exact(c) for c in coeffs[: order + 1]], -2 * order)


def to_ascending(f: DescSeries, order: int) -> list:
    """Coefficients ``c_0..c_order`` of an ascending series stored via q -> q^-1."""
    return [f.coeff2(-2 * n) for n in range(order + 1)]


def series_sqrt(f: DescSeries, floor2) -> DescSeries:
    """Formal square root of a series with leading term ``1*q^(2k)``; branch with leading +1."""
    if f.top2 is None or f.top2 % 2:
        raise ValueError("series has no formal square root")
    if f.coeffs[0] != 1:
        raise ValueError("formal square root needs a leading coefficient 1")
    top2 = f.top2 // 2
    floor2 = max(floor2, f.floor2 - f.top2 + top2)
    stride = f.stride
    n = int((top2 - floor2) // stride) + 1
    F = f.dense(stride)
    F.extend([0] * max(0, n - len(F)))
    out = [0] * n
    out[0] = 1
    for k in range(1, n):
        s = F[k] if k < len(F) else 0
        for i in range(1, k):
            s -= out[i] * out[k - i]
        out[k] = exact(Fraction(s) / 2)
    return DescSeries._build(top2, stride, out, floor2)


# ------------------------------------------------------------ SymLaurent
class SymLaurent:
    """Symmetric Laurent polynomial ``p(q) = c_0 + sum_{j>=1} c_j (q^j + q^-j)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        coeffs = coeffs or {}
        if any(j < 0 for j in coeffs):
            raise ValueError("only nonnegative exponents are stored")
        self.coeffs = {j: exact(c) for j, c in coeffs.items() if c}

    @classmethod
    def from_series(cls, f: DescSeries) -> "SymLaurent":
        if not f.is_exact:
            raise PrecisionError("a symmetric Laurent polynomial must be exact")
        d = dict(f.terms2())
        if any(e % 2 for e in d):
            raise ValueError("half-integer exponents are not allowed")
        for e, c in d.items():
            if d.get(-e, 0) != c:
                raise ValueError("series is not symmetric under q -> 1/q")
        return cls({e // 2: c for e, c in d.items() if e >= 0})

    def to_series(self) -> DescSeries:
        terms = {}
        for j, c in self.coeffs.items():
            terms[2 * j] = c
            terms[-2 * j] = c
        return DescSeries.from_doubled(terms)

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __getitem__(self, j: int):
        return self.coeffs.get(abs(j), 0)

    def __add__(self, other: "SymLaurent") -> "SymLaurent":
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            out[j] = out.get(j, 0) + c
        return SymLaurent(out)

    def __sub__(self, other: "SymLaurent") -> "SymLaurent":
        return self + other.scale(-1)

    def scale(self, k) -> "SymLaurent":
        return SymLaurent({j: c * k for j, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, SymLaurent):
            return SymLaurent.from_series(self.to_series() * other.to_series())
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, SymLaurent) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"SymLaurent({dict(sorted(self.coeffs.items()))})"

