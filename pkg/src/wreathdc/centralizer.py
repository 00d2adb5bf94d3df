"""Centralisers inside balls, their cyclic structure, translation lengths."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .element import WreathElement, canonical_key, commutes, power
from .geometry import Ball, GeneratorSet, word_length

__all__ = [
    "CentralizerReport",
    "centralizer_in_ball",
    "verify_cyclic_structure",
    "centralizer_linear_bound_check",
    "element_order",
    "TranslationEstimate",
    "translation_estimate",
    "DEFAULT_EXPONENTS",
    "structure_suite",
]

DEFAULT_EXPONENTS = (8, 16, 32, 64)


@dataclass
class CentralizerReport:
    target: WreathElement
    radius: int
    members: list[WreathElement]
    by_shift: dict[int, list[WreathElement]]
    contained_in_base: bool
    unique_per_shift: bool
    pairwise_commuting: bool

    @property
    def size(self) -> int:
        return len(self.members)


def _pairwise_commuting(members: list[WreathElement], ball: Ball | None) -> tuple[bool, tuple | None]:
    if ball is not None and all(m in ball for m in members):
        idx = np.array(sorted(ball.index[m] for m in members), dtype=np.int64)
        if ball.arrays.count_pairs(idx) == len(idx) ** 2:
            return True, None
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if not commutes(a, b):
                return False, (a, b)
    return True, None


def centralizer_in_ball(g: WreathElement, ball: Ball) -> CentralizerReport:
    """C_G(g) intersected with the ball, by scanning every ball element."""
    if g in ball:
        mask = ball.arrays.commute_row(ball.index[g])
        members = [h for h, ok in zip(ball.elements, mask) if ok]
    else:
        members = [h for h in ball.elements if commutes(g, h)]
    members.sort(key=canonical_key)
    by_shift: dict[int, list[WreathElement]] = {}
    for h in members:
        by_shift.setdefault(h.shift, []).append(h)
    return CentralizerReport(
        target=g,
        radius=ball.radius,
        members=members,
        by_shift=by_shift,
        contained_in_base=all(h.shift == 0 for h in members),
        unique_per_shift=all(len(v) == 1 for v in by_shift.values()),
        pairwise_commuting=_pairwise_commuting(members, ball)[0],
    )


def verify_cyclic_structure(report: CentralizerReport) -> tuple[bool, tuple | None]:
    """Finite-ball certificate that the centraliser of a non-base element is cyclic.

    Checks (a) at most one member per shift, (b) members commute pairwise,
    (c) with d the gcd of the observed shifts: if the member v of shift d is
    in the ball, every member of shift j*d equals v^j. Returns ``(ok, witness)``.
    """
    if report.target.shift == 0:
        raise ValueError("cyclic structure only holds for targets outside the base")
    for shift, hs in report.by_shift.items():
        if len(hs) > 1:
            return False, ("same shift", hs[0], hs[1])
    ok, pair = _pairwise_commuting(report.members, None)
    if not ok:
        return False, ("not commuting", *pair)
    d = 0
    for shift in report.by_shift:
        d = gcd(d, shift)
    if d and d in report.by_shift:
        v = report.by_shift[d][0]
        for shift, (u,) in report.by_shift.items():
            if shift % d:
                return False, ("shift not a multiple", u, v)
            if u != power(v, shift // d):
                return False, ("not a power", u, v)
    return True, None


def centralizer_linear_bound_check(report: CentralizerReport, lam: Fraction | int = 1) -> bool:
    """|C_G(g) cap B(n)| <= 2 lam n + 1."""
    lam = Fraction(lam)
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    if report.target.shift == 0:
        raise ValueError("linear bound applies to targets outside the base")
    return report.size <= 2 * lam * report.radius + 1


def element_order(g: WreathElement) -> int | None:
    """Order of g, or None when g has infinite order."""
    if g.shift:
        return None
    o = 1
    for _, v in g.lamps:
        ov = g.spec.element_order(v)
        if ov is None:
            return None
        o = lcm(o, ov)
    return o


@dataclass
class TranslationEstimate:
    target: WreathElement
    exponents: tuple[int, ...]
    lengths: list[int]
    order: int | None
    lower_bound: int = field(init=False)

    def __post_init__(self) -> None:
        self.lower_bound = abs(self.target.shift)

    @property
    def values(self) -> list[Fraction]:
        return [Fraction(l, n) for n, l in zip(self.exponents, self.lengths)]

    @property
    def tau(self) -> Fraction:
        """|g^n| / n at the largest exponent; exactly 0 for finite-order g."""
        if self.order is not None:
            return Fraction(0)
        return self.values[-1]

    @property
    def slope(self) -> Fraction | None:
        """Growth of |g^n| between the last two exponents."""
        if len(self.exponents) < 2:
            return None
        (n0, n1), (l0, l1) = self.exponents[-2:], self.lengths[-2:]
        return Fraction(l1 - l0, n1 - n0)

    @property
    def lam(self) -> Fraction | None:
        tau = self.tau
        return 1 / tau if tau else None


def translation_estimate(g: WreathElement, exponents=DEFAULT_EXPONENTS,
                         genset: GeneratorSet | None = None) -> TranslationEstimate:
    exponents = tuple(sorted(exponents))
    if not exponents or exponents[0] < 1:
        raise ValueError("exponents must be positive")
    lengths = [word_length(power(g, n), genset) for n in exponents]
    return TranslationEstimate(g, exponents, lengths, element_order(g))


@dataclass
class SuiteRow:
    target: WreathElement
    size: int
    in_base: bool
    cyclic_ok: bool | None
    bound_ok: bool | None
    contained_in_base: bool
    all_base_members: bool | None
    witness: tuple | None = None


def structure_suite(ball: Ball, lam: Fraction | int = 1) -> list[SuiteRow]:
    """Run the centraliser checks for every element of the ball."""
    base_count = sum(1 for h in ball.elements if h.shift == 0)
    rows = []
    for g in ball.elements:
        rep = centralizer_in_ball(g, ball)
        if g.shift:
            ok, witness = verify_cyclic_structure(rep)
            rows.append(SuiteRow(g, rep.size, False, ok, centralizer_linear_bound_check(rep, lam),
                                 rep.contained_in_base, None, witness))
        else:
            all_base = None
            if ball.spec.abelian:
                all_base = sum(1 for h in rep.members if h.shift == 0) == base_count
            rows.append(SuiteRow(g, rep.size, True, None, None, rep.contained_in_base, all_base))
    return rows
