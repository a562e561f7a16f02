from fractions import Fraction
from itertools import accumulate, combinations
from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gvp2.partitions import (
    character,
    enumerate_partitions,
    format_partition,
    hooks,
    parse_partition,
    partition_count,
    revlex_less,
    stats,
    triples,
    triples_count,
)


def all_upto(n):
    return [p for k in range(n + 1) for p in enumerate_partitions(k)]


def test_stats_examples():
    assert stats((2,)).kappa == 2
    assert stats((1, 1)).kappa == -2
    s = stats((2, 1))
    assert (s.n_mu, s.z, s.conjugate) == (1, 2, (2, 1))
    assert (s.size, s.length) == (3, 2)


def test_kappa_is_twice_difference_of_n():
    for p in all_upto(10):
        s = stats(p)
        assert s.kappa == 2 * (stats(s.conjugate).n_mu - s.n_mu)
        assert stats(s.conjugate).kappa == -s.kappa


def test_invalid_partition_rejected():
    with pytest.raises(ValueError):
        stats((1, 2))
    with pytest.raises(ValueError):
        stats((2, 0))


def test_hooks():
    assert sorted(hooks((2, 1))) == [1, 1, 3]
    assert sorted(hooks((5,))) == [1, 2, 3, 4, 5]
    assert prod(hooks((2, 2))) == 12
    assert factorial(4) // prod(hooks((2, 2))) == 2


def test_hook_length_formula_matches_character_degree():
    for p in all_upto(8):
        n = sum(p)
        assert factorial(n) // prod(hooks(p)) == character(p, (1,) * n)


def test_revlex_order():
    assert revlex_less((1, 1, 1), (2, 1))
    assert revlex_less((2, 1), (3,))
    assert not revlex_less((3,), (3,))
    for p in enumerate_partitions(7)[1:]:
        assert revlex_less(p, (7,))
    with pytest.raises(ValueError):
        revlex_less((1,), (2,))


def test_revlex_transitive_on_p7():
    parts = enumerate_partitions(7)
    less = {(a, b): revlex_less(a, b) for a in parts for b in parts}
    for a in parts:
        for b in parts:
            if not less[a, b]:
                continue
            for c in parts:
                if less[b, c]:
                    assert less[a, c]


def test_enumeration_order_and_counts():
    assert enumerate_partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    assert [partition_count(n) for n in range(13)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]
    for n in range(13):
        parts = enumerate_partitions(n)
        assert len(parts) == partition_count(n)
        assert all(revlex_less(b, a) for a, b in zip(parts, parts[1:]))


def test_triples():
    assert triples_count(2) == 9
    assert triples_count(12) == 7868
    assert sum(1 for _ in triples(6)) == triples_count(6)
    counts = [triples_count(d) for d in range(15)]
    assert counts == sorted(counts)


def dominates(a, b):
    A, B = list(accumulate(a)), list(accumulate(b))
    width = max(len(A), len(B))
    A += [A[-1]] * (width - len(A))
    B += [B[-1]] * (width - len(B))
    return all(x >= y for x, y in zip(A, B))


def test_n_kappa_estimate_under_dominance():
    for n in range(1, 11):
        parts = enumerate_partitions(n)
        for a, b in combinations(parts, 2):
            if dominates(a, b):
                assert stats(a).n_mu < stats(b).n_mu
                assert stats(a).kappa > stats(b).kappa
        top = stats((n,)).kappa
        for p in parts[1:]:
            assert stats(p).kappa <= top - 2 * n


def test_n_kappa_estimate_fails_for_plain_revlex():
    a, b = (4, 1, 1), (3, 3)
    assert revlex_less(b, a) and not dominates(a, b)
    assert (stats(a).n_mu, stats(a).kappa) == (stats(b).n_mu, stats(b).kappa) == (3, 6)


def test_character_examples():
    for nu in enumerate_partitions(5):
        assert character((5,), nu) == 1
    assert character((1, 1), (2,)) == -1
    with pytest.raises(ValueError):
        character((2,), (1,))


def test_character_orthogonality():
    for n in range(7):
        parts = enumerate_partitions(n)
        z = {nu: stats(nu).z for nu in parts}
        for a in parts:
            for b in parts:
                row = sum(Fraction(character(a, nu) * character(b, nu), z[nu]) for nu in parts)
                col = sum(character(mu, a) * character(mu, b) for mu in parts)
                assert row == (a == b)
                assert col == (z[a] if a == b else 0)


@given(st.integers(0, 12).flatmap(lambda n: st.sampled_from(enumerate_partitions(n))))
def test_text_round_trip(p):
    assert parse_partition(format_partition(p)) == p
