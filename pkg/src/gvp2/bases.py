"""Three bases of the symmetric Laurent polynomials and the invariant transforms.

* ``S_g = (q^{1/2} - q^{-1/2})^{2g}``
* ``R_g = q^g + q^{g-2} + ... + q^{-g}``
* ``T_0 = 1``, ``T_1 = S_1``, ``T_g = S_1 (q^{g-1} + q^{-(g-1)})``

Each basis is unitriangular with respect to the monomial basis
``q^j + q^-j``, so any symmetric Laurent polynomial decomposes uniquely.
The GV numbers n, their R-basis transform N and T-basis transform E satisfy
``sum (-1)^g n^g S_g = sum N^g R_g = sum E^h T_h``.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Callable, Sequence

from .qseries import SymLaurent

__all__ = [
    "binom",
    "S_poly",
    "R_poly",
    "T_poly",
    "basis_S_to_R",
    "basis_R_to_S",
    "basis_S_to_T",
    "basis_T_to_S",
    "decompose",
    "n_to_N",
    "N_to_n",
    "n_to_E",
    "E_to_n",
    "combination",
    "kkv_binomial_identity",
]


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero for ``k < 0`` and, when ``n >= 0``, for ``k > n``.

    For negative ``n`` and ``k >= 0`` the generalized value
    ``n (n-1) ... (n-k+1) / k!`` is returned.
    """
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k) if k <= n else 0
    return (-1) ** k * comb(k - n - 1, k)


@lru_cache(maxsize=None)
def S_poly(g: int) -> SymLaurent:
    # (q - 2 + q^-1)^g has coefficient (-1)^(g-i) C(2g, g-i) at q^i and q^-i
    return SymLaurent({i: (-1) ** (g - i) * comb(2 * g, g - i) for i in range(g + 1)})


@lru_cache(maxsize=None)
def R_poly(g: int) -> SymLaurent:
    return SymLaurent({j: 1 for j in range(g % 2, g + 1, 2)})


@lru_cache(maxsize=None)
def T_poly(g: int) -> SymLaurent:
    if g == 0:
        return SymLaurent({0: 1})
    if g == 1:
        return S_poly(1)
    return SymLaurent({g: 1, g - 1: -2, g - 2: 1 + (g == 2)})


def basis_S_to_R(g: int) -> dict[int, int]:
    """Coefficients of ``S_g`` in the R basis."""
    return {
        j: c
        for j in range(g + 1)
        if (c := (-1) ** (g - j) * (binom(2 * g, g - j) - binom(2 * g, g - j - 2)))
    }


def basis_R_to_S(g: int) -> dict[int, int]:
    """Coefficients of ``R_g`` in the S basis."""
    return {j: c for j in range(g + 1) if (c := binom(g + j + 1, g - j))}


def basis_S_to_T(g: int) -> dict[int, int]:
    """Coefficients of ``S_g`` in the T basis (``S_0 = T_0``)."""
    if g == 0:
        return {0: 1}
    return {
        j: c for j in range(1, g + 1) if (c := (-1) ** (g - j) * binom(2 * g - 2, g - j))
    }


def basis_T_to_S(g: int) -> dict[int, int]:
    """Coefficients of ``T_g`` in the S basis (``T_0 = S_0``)."""
    if g == 0:
        return {0: 1}
    return {
        j: c
        for j in range(1, g + 1)
        if (c := binom(g + j - 1, g - j) - binom(g + j - 3, g - 2 - j))
    }


def combination(coeffs: dict[int, object], basis: Callable[[int], SymLaurent]) -> SymLaurent:
    out = SymLaurent()
    for j, c in coeffs.items():
        out = out + basis(j).scale(c)
    return out


def decompose(p: SymLaurent, basis: Callable[[int], SymLaurent]) -> dict[int, object]:
    """Coordinates of ``p`` in a unitriangular basis, by peeling the top degree."""
    out: dict[int, object] = {}
    rest = p
    while rest.coeffs:
        top = rest.degree
        lead = basis(top)
        if lead[top] != 1:
            raise ValueError("basis element is not monic")
        c = rest[top]
        out[top] = c
        rest = rest - lead.scale(c)
    return dict(sorted(out.items()))


# ------------------------------------------------------------ transforms
def n_to_N(n: Sequence[int]) -> list[int]:
    """``N^h = (-1)^h sum_g n^g (C(2g, g-h) - C(2g, g-h-2))``."""
    top = len(n)
    return [
        (-1) ** h
        * sum(n[g] * (binom(2 * g, g - h) - binom(2 * g, g - h - 2)) for g in range(h, top))
        for h in range(top)
    ]


def N_to_n(N: Sequence[int]) -> list[int]:
    """``n^g = (-1)^g sum_h N^h C(g+h+1, h-g)``."""
    top = len(N)
    return [
        (-1) ** g * sum(N[h] * binom(g + h + 1, h - g) for h in range(g, top))
        for g in range(top)
    ]


def n_to_E(n: Sequence[int]) -> list[int]:
    """``E^h = (-1)^h sum_g C(2g-2, g-h) n^g`` for ``h >= 1``; ``E^0 = n^0``."""
    top = len(n)
    out = [n[0]] if top else []
    for h in range(1, top):
        out.append((-1) ** h * sum(binom(2 * g - 2, g - h) * n[g] for g in range(h, top)))
    return out


def E_to_n(E: Sequence[int]) -> list[int]:
    """``n^g = (-1)^g sum_h E^h (C(h+g-1, h-g) - C(h+g-3, h-g-2))`` for ``g >= 1``; ``n^0 = E^0``."""
    top = len(E)
    out = [E[0]] if top else []
    for g in range(1, top):
        out.append(
            (-1) ** g
            * sum(
                E[h] * (binom(h + g - 1, h - g) - binom(h + g - 3, h - g - 2))
                for h in range(g, top)
            )
        )
    return out


def kkv_binomial_identity(g: int, delta: int, j: int) -> bool:
    """``C(2g-d-j-1, d-j) - C(2g-d-j-3, d-j-2) == C(2g-2-j-d, d-j) + C(2g-3-j-d, d-j-1)``."""
    lhs = binom(2 * g - delta - j - 1, delta - j) - binom(2 * g - delta - j - 3, delta - j - 2)
    rhs = binom(2 * g - 2 - j - delta, delta - j) + binom(2 * g - 3 - j - delta, delta - j - 1)
    return lhs == rhs

