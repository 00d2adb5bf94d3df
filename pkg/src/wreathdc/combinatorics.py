"""Compositions and weak compositions, with explicit enumerators."""

from __future__ import annotations

from math import comb

__all__ = [
    "count_compositions",
    "enumerate_compositions",
    "count_weak_compositions",
    "enumerate_weak_compositions",
    "shift_down",
    "verify_shift_bijection",
    "binom",
]

MAX_ENUMERATE = 20


def binom(n: int, k: int) -> int:
    """Binomial coefficient, 0 whenever the parameters are out of range."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def count_compositions(n: int) -> int:
    if n < 1:
        raise ValueError(f"compositions need n >= 1, got {n}")
    return 2 ** (n - 1)


def enumerate_compositions(n: int) -> list[tuple[int, ...]]:
    """All compositions of n.

    Write n as ``1 _ 1 _ ... _ 1`` with n - 1 gaps; each gap is either a
    plus (the neighbouring ones merge) or a comma (a part ends). Bit i of
    the mask says whether gap i is a comma.
    """
    if n < 1:
        raise ValueError(f"compositions need n >= 1, got {n}")
    if n > MAX_ENUMERATE:
        raise ValueError(f"refusing to list 2^{n - 1} compositions (n > {MAX_ENUMERATE})")
    out = []
    for mask in range(2 ** (n - 1)):
        parts, run = [], 1
        for gap in range(n - 1):
            if mask >> gap & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        out.append(tuple(parts))
    return out


def count_weak_compositions(n: int, k: int) -> int:
    if n < 0 or k < 1:
        raise ValueError(f"weak compositions need n >= 0 and k >= 1, got n={n}, k={k}")
    return comb(n + k - 1, k - 1)


def enumerate_weak_compositions(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-tuples of non-negative integers summing to n, lexicographic."""
    if n < 0 or k < 1:
        raise ValueError(f"weak compositions need n >= 0 and k >= 1, got n={n}, k={k}")
    if k == 1:
        return [(n,)]
    return [(first, *rest) for first in range(n + 1) for rest in enumerate_weak_compositions(n - first, k - 1)]


def shift_down(parts: tuple[int, ...]) -> tuple[int, ...]:
    """Composition of n + k into k parts -> weak composition of n into k parts."""
    return tuple(p - 1 for p in parts)


def verify_shift_bijection(n: int, k: int) -> bool:
    """``shift_down`` maps k-part compositions of n + k onto weak k-compositions of n, one to one."""
    source = [c for c in enumerate_compositions(n + k) if len(c) == k]
    image = [shift_down(c) for c in source]
    target = enumerate_weak_compositions(n, k)
    return len(set(image)) == len(image) and set(image) == set(target)
