"""Topological-vertex pipeline for local P^2.

``Z = 1 + sum_d I(d) t^d`` with

    I(d) = (-1)^d sum q^{(k1+k2+k3)/2} W_{m1 m2} W_{m2 m3} W_{m3 m1}

over ordered partition triples of total size d.  The free energy
``F = log Z`` has coefficients F(d); stripping multiple covers leaves

    f_d S_1 = sum_g n^g_d (-1)^(g-1) S_g,

which is solved exactly for the Gopakumar–Vafa numbers n^g_d.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import bases
from .hopf import HopfCache, default_cache, sym_degree_bound2, w2
from .partitions import kappa, triples, triples_count
from .qseries import DescSeries, HalfExp, PrecisionError, exact

__all__ = [
    "IntegrityError",
    "GvTable",
    "genus",
    "instanton_coeff",
    "free_energy_coeff",
    "free_energy_composition",
    "multicover_strip",
    "extract",
    "transforms",
    "Pipeline",
    "compute_tables",
]


class IntegrityError(RuntimeError):
    """An exactness certificate failed: non-integral, asymmetric, or nonzero residue."""


def genus(d: int) -> int:
    """Arithmetic genus ``g(d) = (d-1)(d-2)/2`` of a plane curve of degree d."""
    return (d - 1) * (d - 2) // 2


@dataclass
class GvTable:
    d: int
    n: list[int]
    N: list[int] = field(default_factory=list)
    E: list[int] = field(default_factory=list)

    @property
    def gd(self) -> int:
        return genus(self.d)

    @property
    def M(self) -> list[int]:
        """``M^delta_d = (-1)^(d-1) N^{g(d)-delta}_d`` for delta = 0..g(d)."""
        sign = (-1) ** (self.d - 1)
        return [sign * self.N[self.gd - delta] for delta in range(self.gd + 1)]

    def to_dict(self) -> dict:
        return {"d": self.d, "gd": self.gd, "n": self.n, "N": self.N, "E": self.E, "M": self.M}

    @classmethod
    def from_dict(cls, data: dict) -> "GvTable":
        table = cls(int(data["d"]), list(data["n"]), list(data.get("N", [])), list(data.get("E", [])))
        return transforms(table)

    def csv_rows(self) -> list[tuple[int, ...]]:
        M = self.M
        return [
            (self.d, g, self.gd - g, self.n[g], self.N[g], self.E[g], M[self.gd - g])
            for g in range(self.gd + 1)
        ]


def transforms(table: GvTable) -> GvTable:
    """Fill the missing ones of n, N, E from whichever is populated."""
    size = genus(table.d) + 1
    if table.n:
        n = list(table.n)
    elif table.N:
        n = bases.N_to_n(table.N)
    elif table.E:
        n = bases.E_to_n(table.E)
    else:
        raise ValueError("table has none of n, N, E")
    if len(n) != size:
        raise ValueError(f"degree {table.d} needs {size} genus entries, got {len(n)}")
    N, E = bases.n_to_N(n), bases.n_to_E(n)
    for name, given, derived in (("N", table.N, N), ("E", table.E, E)):
        if given and list(given) != derived:
            raise ValueError(f"supplied {name} is inconsistent with n")
    return GvTable(table.d, n, N, E)


# ------------------------------------------------------------------ I(d)
@lru_cache(maxsize=None)
def _pair_bound2(a, b) -> int:
    return sym_degree_bound2(a, b)


def _key(a, b):
    return (a, b) if (len(a), a) <= (len(b), b) else (b, a)


def _plan(d: int, floor2):
    """Surviving triples and the floor each Hopf invariant is needed to."""
    plan = []
    need: dict = {}
    for t in triples(d):
        m1, m2, m3 = t
        k2 = kappa(m1) + kappa(m2) + kappa(m3)
        b12, b23, b31 = _pair_bound2(m1, m2), _pair_bound2(m2, m3), _pair_bound2(m3, m1)
        if k2 + b12 + b23 + b31 < floor2:
            continue
        plan.append((k2, t))
        for pair, others in (((m1, m2), b23 + b31), ((m2, m3), b12 + b31), ((m3, m1), b12 + b23)):
            key = _key(*pair)
            f = floor2 - k2 - others
            if f < need.get(key, f + 1):
                need[key] = f
    return plan, need


def _triple_sum(plan, floor2, cache: HopfCache, need) -> list:
    """Dense integer accumulator (doubled-exponent stride 1) of the pruned triple sum."""
    acc: dict[int, object] = {}
    for k2, (m1, m2, m3) in plan:
        ws = []
        for a, b in ((m1, m2), (m2, m3), (m3, m1)):
            key = _key(a, b)
            w = w2(key[0], key[1], need[key], cache)
            if not w.is_zero and w.top2 > _pair_bound2(a, b):
                raise IntegrityError(f"W{key} exceeds its degree bound")
            ws.append(w)
        w12, w23, w31 = ws
        if w31.is_zero or w12.is_zero or w23.is_zero:
            continue
        p = (w12 * w23).with_floor2(floor2 - k2 - w31.top2)
        term = (p * w31).shift2(k2)
        if term.floor2 > floor2:
            raise PrecisionError(f"triple {(m1, m2, m3)} only exact to {term.floor}")
        for e, c in term.terms2():
            if e >= floor2:
                acc[e] = acc.get(e, 0) + c
    return sorted(acc.items(), reverse=True)


def _worker(args):
    plan, floor2, need = args
    return _triple_sum(plan, floor2, HopfCache(), need)


def instanton_coeff(
    d: int,
    floor,
    cache: HopfCache | None = None,
    threads: int = 1,
    stats: dict | None = None,
) -> DescSeries:
    """``I(d)`` exact down to ``floor`` (pruned triple sum)."""
    if d < 1:
        raise ValueError("d must be positive")
    return _instanton2(d, HalfExp.of(floor).doubled, cache or default_cache, threads, stats)


def _instanton2(d, floor2, cache, threads, stats) -> DescSeries:
    t0 = time.perf_counter()
    plan, need = _plan(d, floor2)
    if threads > 1 and len(plan) > 64:
        chunks = [plan[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_worker, [(c, floor2, need) for c in chunks]))
        acc: dict[int, object] = {}
        for part in parts:
            for e, c in part:
                acc[e] = acc.get(e, 0) + c
        items = acc
    else:
        items = dict(_triple_sum(plan, floor2, cache, need))
    sign = -1 if d % 2 else 1
    out = DescSeries.from_doubled({e: sign * c for e, c in items.items()}, floor2)
    if stats is not None:
        stats.setdefault("triples", {})[d] = triples_count(d)
        stats.setdefault("surviving", {})[d] = len(plan)
        stats.setdefault("hopf", {})[d] = len(need)
        stats.setdefault("seconds", {})[d] = time.perf_counter() - t0
    return out


# ------------------------------------------------------------------ F(d)
def free_energy_coeff(d: int, I: dict[int, DescSeries], F: dict[int, DescSeries] | None = None) -> DescSeries:
    """``F(d)`` from ``d F(d) = d I(d) - sum_{j<d} j F(j) I(d-j)``.

    Lower free-energy coefficients are taken from ``F`` when supplied and
    computed recursively otherwise.
    """
    if F is None:
        F = {}
    for j in range(1, d):
        if j not in F:
            F[j] = free_energy_coeff(j, I, F)
    out = I[d]
    corr = None
    for j in range(1, d):
        term = (F[j] * I[d - j]).scale(j)
        corr = term if corr is None else corr + term
    if corr is not None:
        out = out - corr.scale(Fraction(1, d))
    return out


def _compositions(d: int):
    if d == 0:
        yield ()
        return
    for first in range(1, d + 1):
        for rest in _compositions(d - first):
            yield (first,) + rest


def free_energy_composition(d: int, I: dict[int, DescSeries]) -> DescSeries:
    """``F(d) = sum_k (-1)^(k-1)/k sum_{d_1+...+d_k=d} I(d_1)...I(d_k)``."""
    out = None
    for comp in _compositions(d):
        term = I[comp[0]]
        for part in comp[1:]:
            term = term * I[part]
        k = len(comp)
        term = term.scale(Fraction((-1) ** (k - 1), k))
        out = term if out is None else out + term
    return out


# ------------------------------------------------------------ extraction
def _multicover_term(g: int, k: int, floor2) -> DescSeries:
    """``(-1)^(g-1) (q^{k/2} - q^{-k/2})^{2g-2}`` down to ``floor2``."""
    base = DescSeries.from_doubled({2 * k: 1, 0: -2, -2 * k: 1})
    if g == 0:
        inv = DescSeries.monomial(-k).div_one_minus(k, floor2).div_one_minus(k, floor2)
        return -inv
    return (base ** (g - 1)).scale((-1) ** (g - 1))


def multicover_strip(d: int, F_d: DescSeries, prior: dict[int, GvTable]) -> DescSeries:
    """Subtract the ``k | d, k > 1`` images of lower-degree invariants from ``F(d)``."""
    out = F_d
    floor2 = F_d.floor2
    for k in range(2, d + 1):
        if d % k:
            continue
        base = d // k
        if base not in prior:
            raise KeyError(f"degree {d} needs the table for degree {base}")
        table = prior[base]
        acc = DescSeries.zero(HalfExp(floor2))
        for g, n in enumerate(table.n):
            if n:
                acc = acc + _multicover_term(g, k, floor2).scale(n)
        out = out - acc.scale(Fraction(1, k))
    return out


def _check_integral(x, what: str) -> int:
    x = exact(x)
    if type(x) is not int:
        raise IntegrityError(f"{what} is not an integer: {x}")
    return x


def extract(d: int, f_d: DescSeries) -> GvTable:
    """Solve ``f_d S_1 = sum_g n^g (-1)^(g-1) S_g`` exactly.

    Peels the S basis from ``q^{g(d)}`` down to ``q^0`` and certifies that the
    residue vanishes on the whole exact window of ``f_d S_1``, which also
    certifies its symmetry under ``q -> 1/q`` there.
    """
    gd = genus(d)
    if f_d.floor2 > -2:
        raise PrecisionError(f"degree {d}: f_d must be exact down to q^-1")
    s1 = bases.S_poly(1).to_series()
    h = f_d * s1
    if not h.is_zero and h.top2 > 2 * gd:
        raise IntegrityError(f"degree {d}: nonzero coefficient above q^{gd}")
    if not h.is_zero and any(e % 2 for e, _ in h.terms2()):
        raise IntegrityError(f"degree {d}: half-integer exponent in f_d S_1")
    n = [0] * (gd + 1)
    for g in range(gd, -1, -1):
        c = _check_integral(h.coeff2(2 * g), f"n^{g}_{d}")
        n[g] = c if g % 2 else -c
        if c:
            h = h - bases.S_poly(g).to_series().scale(c)
    if not h.is_zero:
        e = h.top
        raise IntegrityError(f"degree {d}: nonzero residue at q^{e} (asymmetric or inexact data)")
    table = transforms(GvTable(d, n))
    for name in ("N", "E"):
        for x in getattr(table, name):
            _check_integral(x, f"{name} entry in degree {d}")
    return table


# -------------------------------------------------------------- pipeline
def _top2(d: int) -> int:
    return d * d - 3 * d


def default_threads() -> int:
    env = os.environ.get("GV_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            value = 1
        return value if value > 0 else (os.cpu_count() or 1)
    return 1


class Pipeline:
    """Computes I(d), F(d) and GV tables for d = 1..dmax with planned floors.

    Every degree d is wanted down to ``q^{-(d+2)-margin}``.  Floors for the
    lower coefficients feeding the logarithm recurrence are derived backward
    from the known degrees ``(d^2-3d)/2`` of I and F.
    """

    def __init__(self, dmax: int, margin: int = 2, threads: int = 1, cache: HopfCache | None = None):
        if dmax < 1:
            raise ValueError("dmax must be at least 1")
        if margin < 0:
            raise ValueError("floor margin must be nonnegative")
        self.dmax = dmax
        self.margin = margin
        self.threads = threads if threads > 0 else (os.cpu_count() or 1)
        self.cache = cache or HopfCache()
        self.stats: dict = {}
        need_F = {d: -2 * (d + 2 + margin) for d in range(1, dmax + 1)}
        need_I = dict(need_F)
        for d in range(dmax, 0, -1):
            need_I[d] = min(need_I[d], need_F[d])
            for j in range(1, d):
                need_F[j] = min(need_F[j], need_F[d] - _top2(d - j))
                need_I[d - j] = min(need_I[d - j], need_F[d] - _top2(j))
        self.floor_I2 = need_I
        self.floor_F2 = need_F
        self._I: dict[int, DescSeries] = {}
        self._F: dict[int, DescSeries] = {}
        self._tables: dict[int, GvTable] = {}

    def instanton(self, d: int) -> DescSeries:
        if d not in self._I:
            self._I[d] = _instanton2(d, self.floor_I2[d], self.cache, self.threads, self.stats)
        return self._I[d]

    def free_energy(self, d: int) -> DescSeries:
        if d not in self._F:
            I = {j: self.instanton(j) for j in range(1, d + 1)}
            F = {j: self.free_energy(j) for j in range(1, d)}
            value = free_energy_coeff(d, I, F)
            if value.floor2 > self.floor_F2[d]:
                raise PrecisionError(f"F({d}) only exact down to {value.floor}")
            self._F[d] = value.with_floor2(self.floor_F2[d])
        return self._F[d]

    def stripped(self, d: int) -> DescSeries:
        prior = {e: self.table(e) for e in range(1, d) if d % e == 0}
        return multicover_strip(d, self.free_energy(d).with_floor2(-2 * (d + 2 + self.margin)), prior)

    def table(self, d: int) -> GvTable:
        if d not in self._tables:
            self._tables[d] = extract(d, self.stripped(d))
        return self._tables[d]

    def tables(self) -> list[GvTable]:
        return [self.table(d) for d in range(1, self.dmax + 1)]


def compute_tables(dmax: int, margin: int = 2, threads: int = 1) -> list[GvTable]:
    return Pipeline(dmax, margin, threads).tables()
