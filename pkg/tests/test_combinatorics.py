from __future__ import annotations

import itertools

import pytest

from wreathdc.combinatorics import (
    binom,
    count_compositions,
    count_weak_compositions,
    enumerate_compositions,
    enumerate_weak_compositions,
    shift_down,
    verify_shift_bijection,
)


def test_composition_examples():
    assert count_compositions(1) == 1
    assert count_compositions(3) == 4
    assert count_compositions(10) == 512 == len(enumerate_compositions(10))
    assert enumerate_compositions(1) == [(1,)]
    assert sorted(enumerate_compositions(3)) == sorted([(3,), (2, 1), (1, 2), (1, 1, 1)])
    assert len(enumerate_compositions(4)) == 8 == count_compositions(4)


@pytest.mark.parametrize("n", range(1, 17))
def test_compositions_agree(n):
    comps = enumerate_compositions(n)
    assert len(comps) == len(set(comps)) == count_compositions(n) == 2 ** (n - 1)
    assert all(sum(c) == n and min(c) >= 1 for c in comps)


def test_composition_errors():
    with pytest.raises(ValueError):
        count_compositions(0)
    with pytest.raises(ValueError):
        enumerate_compositions(21)


def test_weak_composition_examples():
    assert all(count_weak_compositions(0, k) == 1 for k in range(1, 7))
    assert count_weak_compositions(2, 2) == 3
    assert sorted(enumerate_weak_compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert count_weak_compositions(4, 3) == 15


def test_weak_compositions_brute_force():
    for n in range(13):
        for k in range(1, 7):
            brute = [t for t in itertools.product(range(n + 1), repeat=k) if sum(t) == n]
            listed = enumerate_weak_compositions(n, k)
            assert listed == brute  # both lexicographic
            assert count_weak_compositions(n, k) == len(brute)


def test_weak_composition_errors():
    with pytest.raises(ValueError):
        count_weak_compositions(-1, 2)
    with pytest.raises(ValueError):
        enumerate_weak_compositions(2, 0)


def test_shift_bijection():
    assert shift_down((3, 1, 2)) == (2, 0, 1)
    for n in range(11):
        for k in range(1, 6):
            assert verify_shift_bijection(n, k)


def test_binom_out_of_range_is_zero():
    assert binom(3, 5) == 0 and binom(3, -1) == 0 and binom(-2, 0) == 0
    assert binom(5, 2) == 10
