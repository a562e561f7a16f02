"""Integer partitions, their statistics, and symmetric-group characters."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Iterator, Sequence

__all__ = [
    "Partition",
    "PartitionStats",
    "stats",
    "hooks",
    "revlex_less",
    "enumerate_partitions",
    "partition_count",
    "triples",
    "triples_count",
    "character",
    "parse_partition",
]

Partition = tuple  # weakly decreasing tuple of positive ints; () is the empty partition


def _check(p: Sequence[int]) -> tuple:
    p = tuple(p)
    for a, b in zip(p, p[1:]):
        if a < b:
            raise ValueError(f"parts must be weakly decreasing: {p}")
    if p and p[-1] < 1:
        raise ValueError(f"parts must be positive: {p}")
    return p


def size(p: Partition) -> int:
    return sum(p)


def n_mu(p: Partition) -> int:
    """``n(mu) = sum (i-1) mu_i``."""
    return sum(i * part for i, part in enumerate(p))


def kappa(p: Partition) -> int:
    """``kappa(mu) = sum mu_i (mu_i - 2i + 1)`` with 1-based i."""
    return sum(part * (part - 2 * i - 1) for i, part in enumerate(p))


def conjugate(p: Partition) -> Partition:
    if not p:
        return ()
    return tuple(sum(1 for part in p if part > j) for j in range(p[0]))


def multiplicities(p: Partition) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in p:
        out[part] = out.get(part, 0) + 1
    return out


def z(p: Partition) -> int:
    """Centralizer order ``prod m_i! * prod mu_i``."""
    out = 1
    for part, m in multiplicities(p).items():
        out *= factorial(m) * part**m
    return out


def is_row(p: Partition) -> bool:
    return len(p) <= 1


@dataclass(frozen=True)
class PartitionStats:
    size: int
    length: int
    n_mu: int
    kappa: int
    z: int
    conjugate: Partition


def stats(p: Sequence[int]) -> PartitionStats:
    p = _check(p)
    return PartitionStats(sum(p), len(p), n_mu(p), kappa(p), z(p), conjugate(p))


def hooks(p: Sequence[int]) -> list[int]:
    """Hook lengths of every cell, row by row."""
    p = _check(p)
    conj = conjugate(p)
    return [
        (part - j - 1) + (conj[j] - i - 1) + 1
        for i, part in enumerate(p)
        for j in range(part)
    ]


def revlex_less(a: Sequence[int], b: Sequence[int]) -> bool:
    """``a < b`` in reverse lexicographic order: first nonzero ``b_i - a_i`` is positive."""
    a, b = _check(a), _check(b)
    if sum(a) != sum(b):
        raise ValueError("revlex order compares partitions of the same size only")
    for x, y in zip(a, b):
        if x != y:
            return y > x
    return False


def _parts(n: int, largest: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _parts(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` in revlex descending order, starting with ``(n)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return tuple(_parts(n, n))


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """``p(n)`` via Euler's pentagonal recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def triples(d: int) -> Iterator[tuple[Partition, Partition, Partition]]:
    """Stream every ordered triple of partitions with total size ``d``."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    for a in range(d, -1, -1):
        for b in range(d - a, -1, -1):
            c = d - a - b
            yield from product(enumerate_partitions(a), enumerate_partitions(b), enumerate_partitions(c))


def triples_count(d: int) -> int:
    return sum(
        partition_count(a) * partition_count(b) * partition_count(d - a - b)
        for a in range(d + 1)
        for b in range(d - a + 1)
    )


def _beta(p: Partition) -> tuple[int, ...]:
    k = len(p)
    return tuple(part + k - 1 - i for i, part in enumerate(p))


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], nu: Partition) -> int:
    if not nu:
        return 1
    r, rest = nu[0], nu[1:]
    beads = set(beta)
    total = 0
    for b in beta:
        t = b - r
        if t < 0 or t in beads:
            continue
        # removing a rim hook of length r moves bead b to t; its height is the
        # number of beads strictly between
        height = sum(1 for x in beta if t < x < b)
        new = tuple(sorted((t if x == b else x for x in beta), reverse=True))
        total += (-1) ** height * _mn(new, rest)
    return total


def character(mu: Sequence[int], nu: Sequence[int]) -> int:
    """Irreducible character ``chi_mu`` on the class of cycle type ``nu`` (Murnaghan–Nakayama)."""
    mu, nu = _check(mu), _check(nu)
    if sum(mu) != sum(nu):
        raise ValueError("character needs |mu| = |nu|")
    return _mn(_beta(mu), nu)


def format_partition(p: Partition) -> str:
    return "(" + ",".join(map(str, p)) + ")"


def parse_partition(text: str) -> Partition:
    """Parse the textual form ``(a,b,c)``; ``()`` is the empty partition."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"malformed partition: {text!r}")
    body = s[1:-1].strip()
    parts = tuple(int(x) for x in body.split(",") if x.strip()) if body else ()
    return _check(parts)
