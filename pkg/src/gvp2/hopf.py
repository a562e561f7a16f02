"""Hopf-link invariants ``W_{mu nu}(q) = s_mu(q^rho) s_nu(q^{mu+rho})``.

Schur functions are specialized at ``q^rho = (q^-1/2, q^-3/2, ...)`` and at the
shifted point ``q^{mu+rho} = (q^{mu_i - i + 1/2})``.  The shifted evaluation
uses the Jacobi–Trudi determinant in complete (or, for wide-and-short shapes,
elementary) symmetric functions; a power-sum expansion through characters is
kept as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .partitions import (
    Partition,
    character,
    conjugate,
    enumerate_partitions,
    hooks,
    n_mu,
    z,
)
from .qseries import (
    DescSeries,
    HalfExp,
    PrecisionError,
    _doubled,
    inv_q_factorial,
)

__all__ = [
    "HopfInvariant",
    "schur_principal",
    "schur_shifted",
    "schur_shifted_oracle",
    "W",
    "W_direct",
    "W_row",
    "degree_bound",
    "degree_bound2",
    "sym_degree_bound2",
    "bound_attained",
    "HopfCache",
    "default_cache",
]


@dataclass(frozen=True)
class HopfInvariant:
    mu: Partition
    nu: Partition
    value: DescSeries

    @property
    def degree(self) -> HalfExp | None:
        return self.value.top


def _floor_arg(floor) -> float | int:
    if floor is None:
        raise ValueError("a floor is required")
    return _doubled(floor)


class HopfCache:
    """Floor-aware memo tables for the pieces of ``W``.

    A cached series is reused whenever it is exact at least as low as
    requested; reads are truncated to the requested floor so results never
    depend on what was computed before.
    """

    def __init__(self):
        self.principal: dict = {}
        self.tail: dict = {}
        self.shifted: dict = {}
        self.w: dict = {}
        self.hits = 0
        self.misses = 0

    def _get(self, table, key, floor2, build):
        hit = table.get(key)
        if hit is not None and hit.floor2 <= floor2:
            self.hits += 1
            return hit.with_floor2(floor2)
        self.misses += 1
        value = build(floor2)
        if value.floor2 > floor2:
            raise PrecisionError(f"{key}: built to floor {value.floor} but {HalfExp(floor2)} was requested")
        table[key] = value
        return value.with_floor2(floor2)

    def clear(self):
        for t in (self.principal, self.tail, self.shifted, self.w):
            t.clear()
        self.hits = self.misses = 0

    def stats(self) -> dict:
        total = self.hits + self.misses
        return {
            "hits": self.hits,
            "misses": self.misses,
            "hit_rate": round(self.hits / total, 4) if total else 0.0,
            "entries": {name: len(getattr(self, name)) for name in ("principal", "tail", "shifted", "w")},
        }


default_cache = HopfCache()


# ----------------------------------------------------------- principal point
def _principal_top2(mu: Partition) -> int:
    return -sum(mu) - 2 * n_mu(mu)


def _schur_principal2(mu: Partition, floor2) -> DescSeries:
    top2 = _principal_top2(mu)
    out = DescSeries.monomial(HalfExp(top2))
    for h in sorted(hooks(mu)):
        out = out.div_one_minus(h, floor2)
    return out.truncate2(floor2) if out.is_exact else out


def schur_principal(mu, floor, cache: HopfCache | None = None) -> DescSeries:
    """``s_mu(q^rho) = q^{-|mu|/2 - n(mu)} prod_x 1/(1 - q^{-h(x)})`` to ``floor``."""
    mu = tuple(mu)
    floor2 = _floor_arg(floor)
    cache = cache or default_cache
    return cache._get(cache.principal, mu, floor2, lambda f: _schur_principal2(mu, f))


# ------------------------------------------------------------- shifted point
def _finite_vars2(mu: Partition) -> list[int]:
    """Doubled exponents of ``q^{mu_i - i + 1/2}``, i = 1..l(mu)."""
    return [2 * part - 2 * i - 1 for i, part in enumerate(mu)]


def _first_var2(mu: Partition) -> int:
    return 2 * mu[0] - 1 if mu else -1


@lru_cache(maxsize=None)
def _finite_h(vars2: tuple[int, ...], k: int) -> DescSeries:
    """``h_k`` of the finite monomials, exact."""
    if k < 0:
        return DescSeries.zero()
    if k == 0:
        return DescSeries.one()
    if not vars2:
        return DescSeries.zero()
    head, rest = vars2[0], vars2[1:]
    out = DescSeries.zero()
    for a in range(k + 1):
        out = out + _finite_h(rest, k - a).shift2(a * head)
    return out


@lru_cache(maxsize=None)
def _finite_e(vars2: tuple[int, ...], k: int) -> DescSeries:
    if k < 0 or k > len(vars2):
        return DescSeries.zero()
    if k == 0:
        return DescSeries.one()
    head, rest = vars2[0], vars2[1:]
    return _finite_e(rest, k) + _finite_e(rest, k - 1).shift2(head)


def _tail2(kind: str, l: int, k: int, floor2) -> DescSeries:
    """``h_k`` or ``e_k`` of the geometric tail ``q^{-(l+1/2)}, q^{-(l+3/2)}, ...``."""
    top2 = -k * (2 * l + 1)
    if kind == "e":
        top2 -= k * (k - 1)
    if top2 < floor2:
        return DescSeries.zero(HalfExp(floor2))
    return inv_q_factorial(k, floor2 - top2).shift2(top2)


def _entry_top2(kind: str, mu: Partition, k: int) -> int | None:
    if k < 0:
        return None
    if kind == "h":
        return k * _first_var2(mu)
    vars2 = _finite_vars2(mu)
    l = len(mu)
    tail = [-(2 * (l + j) + 1) for j in range(max(0, k - l))]
    return sum(sorted(vars2, reverse=True)[:k]) + sum(tail)


def _entry2(kind: str, mu: Partition, k: int, floor2, cache: HopfCache) -> DescSeries:
    """``h_k(q^{mu+rho})`` or ``e_k(q^{mu+rho})`` down to ``floor2``."""
    if k < 0:
        return DescSeries.zero()
    if k == 0:
        return DescSeries.one()
    vars2 = tuple(_finite_vars2(mu))
    l = len(mu)
    finite = _finite_h if kind == "h" else _finite_e

    def build(f2):
        out = DescSeries.zero(HalfExp(f2))
        for a in range(k + 1):
            fin = finite(vars2, a)
            if fin.is_zero:
                continue
            need = f2 - fin.top2
            tail = cache._get(cache.tail, (kind, l, k - a), need, lambda g: _tail2(kind, l, k - a, g))
            out = out + (fin * tail).with_floor2(f2)
        return out

    return cache._get(cache.shifted, (kind, mu, k), floor2, build)


def _det2(entry, tops, n: int, floor2) -> DescSeries:
    """Determinant of an ``n x n`` matrix of series, division free.

    ``entry(i, j, floor2)`` returns the (i, j) entry; ``tops[i][j]`` is an upper
    bound for its degree (None for a zero entry).  Minors are expanded along
    rows and memoized on the set of columns already used.
    """
    if n == 0:
        return DescSeries.one().truncate2(floor2)
    row_max = [max((t for t in row if t is not None), default=None) for row in tops]
    if any(m is None for m in row_max):
        return DescSeries.zero(HalfExp(floor2))
    total = sum(row_max)
    # entry (i, j) is needed exactly to floor2 - (sum of the other rows' maxima)
    entry_floor = [floor2 - (total - m) for m in row_max]
    # the minor on rows i..n-1 needs exactness down to floor2 - sum of rows < i
    prefix = [0] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] + row_max[i]
    memo: dict[int, DescSeries] = {}

    def minor(i: int, used: int) -> DescSeries:
        if i == n:
            return DescSeries.one()
        hit = memo.get(used)
        if hit is not None:
            return hit
        need = floor2 - prefix[i]
        acc = DescSeries.zero(HalfExp(need))
        sign = 1
        for j in range(n):
            if used >> j & 1:
                continue
            if tops[i][j] is not None:
                a = entry(i, j, entry_floor[i])
                if not a.is_zero:
                    term = (a * minor(i + 1, used | 1 << j)).with_floor2(need)
                    acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[used] = acc
        return acc

    return minor(0, 0).with_floor2(floor2)


def _schur_shifted2(nu: Partition, mu: Partition, floor2, cache: HopfCache) -> DescSeries:
    conj = conjugate(nu)
    if len(conj) < len(nu):
        kind, shape = "e", conj
    else:
        kind, shape = "h", nu
    n = len(shape)
    idx = [[shape[i] - i + j for j in range(n)] for i in range(n)]
    tops = [[_entry_top2(kind, mu, k) if k >= 0 else None for k in row] for row in idx]

    def entry(i, j, f2):
        return _entry2(kind, mu, idx[i][j], f2, cache)

    return _det2(entry, tops, n, floor2)


def schur_shifted(nu, mu, floor, cache: HopfCache | None = None) -> DescSeries:
    """``s_nu(q^{mu+rho})`` to ``floor`` via Jacobi–Trudi."""
    return _schur_shifted2(tuple(nu), tuple(mu), _floor_arg(floor), cache or default_cache)


def _power_sum2(mu: Partition, m: int, floor2) -> DescSeries:
    """``p_m(q^{mu+rho}) = q^{-m/2}(sum_i q^{m(mu_i-i+1)} + q^{-ml}/(1-q^{-m}))``."""
    l = len(mu)
    finite = DescSeries.from_doubled(
        {2 * m * (part - i): 1 for i, part in enumerate(mu)}
    )
    tail = DescSeries.monomial(-m * l).div_one_minus(m, floor2 + m)
    return (finite + tail).shift2(-m).with_floor2(floor2)


def schur_shifted_oracle(nu, mu, floor) -> DescSeries:
    """``s_nu(q^{mu+rho}) = sum_eta chi_nu(eta)/z_eta p_eta(q^{mu+rho})`` to ``floor``."""
    nu, mu = tuple(nu), tuple(mu)
    floor2 = _floor_arg(floor)
    x1 = _first_var2(mu)
    size = sum(nu)
    out = DescSeries.zero(HalfExp(floor2))
    for eta in enumerate_partitions(size):
        chi = character(nu, eta)
        if not chi:
            continue
        term = DescSeries.one()
        for m in eta:
            term = term * _power_sum2(mu, m, floor2 - (size - m) * x1)
        out = out + term.with_floor2(floor2).scale(Fraction(chi, z(eta)))
    return out.with_floor2(floor2)


# ------------------------------------------------------------------------ W
def _w_direct2(mu: Partition, nu: Partition, floor2, cache: HopfCache) -> DescSeries:
    p_top2 = _principal_top2(mu)
    shifted = _schur_shifted2(nu, mu, floor2 - p_top2, cache)
    if shifted.is_zero:
        return DescSeries.zero(HalfExp(floor2))
    principal = cache._get(
        cache.principal, mu, floor2 - shifted.top2, lambda f: _schur_principal2(mu, f)
    )
    return (principal * shifted).with_floor2(floor2)


def W_direct(mu, nu, floor, cache: HopfCache | None = None) -> DescSeries:
    """``s_mu(q^rho) s_nu(q^{mu+rho})`` in the given orientation, no symmetry shortcut."""
    return _w_direct2(tuple(mu), tuple(nu), _floor_arg(floor), cache or default_cache)


def _det_size(p: Partition) -> int:
    return min(len(p), p[0] if p else 0)


def w2(mu: Partition, nu: Partition, floor2, cache: HopfCache | None = None) -> DescSeries:
    """Memoized ``W_{mu nu}`` down to doubled floor ``floor2``."""
    cache = cache or default_cache
    # W is symmetric; evaluate in the orientation with the smaller determinant
    a, b = (mu, nu) if (_det_size(nu), nu) <= (_det_size(mu), mu) else (nu, mu)
    return cache._get(cache.w, (a, b), floor2, lambda f: _w_direct2(a, b, f, cache))


def W(mu, nu, floor, cache: HopfCache | None = None) -> HopfInvariant:
    mu, nu = tuple(mu), tuple(nu)
    return HopfInvariant(mu, nu, w2(mu, nu, _floor_arg(floor), cache))


def W_row(m: int, n: int, floor) -> DescSeries:
    """``q^{mn-(m+n)/2} sum_{k=0}^n q^{-k(m+1)}/([m]![k]!)`` to ``floor``."""
    floor2 = _floor_arg(floor)
    top2 = 2 * m * n - m - n
    local = floor2 - top2
    inner = DescSeries.zero(HalfExp(local))
    for k in range(n + 1):
        shift = -2 * k * (m + 1)
        if shift < local:
            break
        inner = inner + inv_q_factorial(k, local - shift).shift2(shift)
    return (inner * inv_q_factorial(m, local)).with_floor2(local).shift2(top2)


# ------------------------------------------------------------ degree bounds
def degree_bound2(mu, nu) -> int:
    """Doubled three-tier degree bound for ``W_{mu nu}`` (asymmetric in its arguments)."""
    mu, nu = tuple(mu), tuple(nu)
    a, b = sum(mu), sum(nu)
    bound2 = 2 * a * b - a - b
    if len(mu) > 1:
        bound2 -= 2 * (b + 1)
        if mu != (a - 1, 1):
            bound2 -= 2 * (b + 1)
    return bound2


def degree_bound(mu, nu) -> HalfExp:
    return HalfExp(degree_bound2(mu, nu))


def sym_degree_bound2(mu, nu) -> int:
    """Best bound using ``W_{mu nu} = W_{nu mu}``."""
    return min(degree_bound2(mu, nu), degree_bound2(nu, mu))


def bound_attained(mu, nu) -> bool:
    """Whether the three-tier bound is attained, by the equality clauses of the bound."""
    mu, nu = tuple(mu), tuple(nu)
    a = sum(mu)
    if len(nu) > 1:
        return False
    if len(mu) <= 1:
        return True
    if mu == (a - 1, 1):
        return True
    return a >= 4 and mu == (a - 2, 2)
