"""Generating sets, Cayley balls, the lamplighter geodesic formula and
ball-level reports (growth, base stratification, densities)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator

from .element import (
    WreathElement,
    canonical_key,
    conjugate,
    head,
    identity,
    inverse,
    lamp,
    multiply,
)
from .lamps import LampGroupSpec

__all__ = [
    "BudgetExceeded",
    "UnsupportedGensetError",
    "GeneratorSet",
    "standard_genset",
    "Ball",
    "build_ball",
    "word_length",
    "Stratification",
    "base_stratification",
    "DensityReport",
    "PREDICATES",
    "density_sequence",
    "GrowthReport",
    "growth_report",
    "sphere_sizes",
    "growth_from_counts",
    "DEFAULT_ELEMENT_BUDGET",
    "element_budget",
]

DEFAULT_ELEMENT_BUDGET = 5_000_000
_PRECHECK_RADIUS = 20


def element_budget(default: int = DEFAULT_ELEMENT_BUDGET) -> int:
    """Element budget, overridable through ``WREATH_DC_BUDGET``."""
    env = os.environ.get("WREATH_DC_BUDGET")
    return int(env) if env else default


class BudgetExceeded(RuntimeError):
    """A resource budget was hit. ``partial`` holds whatever was completed."""

    def __init__(self, message: str, partial=None, last_radius: int | None = None):
        super().__init__(message)
        self.partial = partial
        self.last_radius = last_radius


class UnsupportedGensetError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    spec: LampGroupSpec
    generators: tuple[tuple[str, WreathElement], ...]
    standard: bool = False
    lamp_index: int = 0

    def __post_init__(self) -> None:
        labels = [lab for lab, _ in self.generators]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate generator labels: {labels}")
        for lab, g in self.generators:
            if g.is_identity:
                raise ValueError(f"generator {lab} is the identity")

    @cached_property
    def alphabet(self) -> tuple[tuple[str, WreathElement], ...]:
        """Generators followed by their inverses, duplicates dropped."""
        out: list[tuple[str, WreathElement]] = []
        seen: set[WreathElement] = set()
        for lab, g in self.generators:
            if g not in seen:
                seen.add(g)
                out.append((lab, g))
        for lab, g in self.generators:
            gi = inverse(g)
            if gi not in seen:
                seen.add(gi)
                out.append((lab + "^-1", gi))
        return tuple(out)

    @property
    def labels(self) -> list[str]:
        return [lab for lab, _ in self.generators]

    def describe(self) -> str:
        return "{" + ", ".join(self.labels) + "}"


def standard_genset(spec: LampGroupSpec, lamp_index: int = 0) -> GeneratorSet:
    """``{a_i, t}`` for cyclic/integer lamps; all non-trivial lamps at ``i`` plus ``t`` for tables."""
    gens = []
    values = spec.generators()
    for v in values:
        label = f"a{lamp_index}" if len(values) == 1 else f"{spec.label(v)}@{lamp_index}"
        gens.append((label, lamp(spec, lamp_index, v)))
    gens.append(("t", head(spec)))
    return GeneratorSet(spec, tuple(gens), standard=True, lamp_index=lamp_index)


class Ball:
    """The exact ball B_S(n): every element with its word length, by shell."""

    def __init__(self, spec: LampGroupSpec, genset: GeneratorSet, shells: list[list[WreathElement]],
                 dist: dict[WreathElement, int] | None = None):
        self.spec = spec
        self.genset = genset
        self.shells = shells
        self.radius = len(shells) - 1
        if dist is None:
            dist = {g: r for r, shell in enumerate(shells) for g in shell}
        self.dist = dist

    @cached_property
    def elements(self) -> list[WreathElement]:
        return [g for shell in self.shells for g in shell]

    @cached_property
    def by_key(self) -> dict[bytes, tuple[WreathElement, int]]:
        return {canonical_key(g): (g, r) for r, shell in enumerate(self.shells) for g in shell}

    @cached_property
    def index(self) -> dict[WreathElement, int]:
        return {g: i for i, g in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.dist)

    def __iter__(self) -> Iterator[WreathElement]:
        return iter(self.elements)

    def __contains__(self, g: WreathElement) -> bool:
        return g in self.dist

    def length(self, g: WreathElement) -> int | None:
        return self.dist.get(g)

    def sizes(self) -> list[int]:
        out, total = [], 0
        for shell in self.shells:
            total += len(shell)
            out.append(total)
        return out

    def restrict(self, r: int) -> Ball:
        if r > self.radius:
            raise ValueError(f"cannot restrict radius-{self.radius} ball to {r}")
        if r == self.radius:
            return self
        shells = self.shells[: r + 1]
        return Ball(self.spec, self.genset, shells)

    @cached_property
    def arrays(self):
        from .kernels import BallArrays

        return BallArrays.from_elements(self.spec, self.elements)


def build_ball(spec: LampGroupSpec, genset: GeneratorSet, n: int, budget: int | None = None) -> Ball:
    """Breadth-first closure of ``{e}`` under right multiplication by the alphabet.

    Shells are listed in discovery order, which is fixed by the alphabet
    order, so the result is deterministic. Raises :class:`BudgetExceeded`
    carrying the last fully completed ball when the element count would
    pass ``budget``.
    """
    if n < 0:
        raise ValueError("radius must be >= 0")
    budget = element_budget() if budget is None else budget
    if genset.standard and n > _PRECHECK_RADIUS:
        # exact counts say where the budget runs out; skip the doomed shell
        total, fits = 0, n
        for r, s in enumerate(sphere_sizes(genset.spec, min(n, 2 * _PRECHECK_RADIUS))):
            total += s
            if total > budget:
                fits = r - 1
                break
        if fits < n:
            partial = build_ball(spec, genset, fits, budget)
            raise BudgetExceeded(
                f"element budget {budget} exceeded while building radius {fits + 1}; "
                f"last completed radius {fits}", partial=partial, last_radius=fits)
    alphabet = [g for _, g in genset.alphabet]
    e = identity(spec)
    dist = {e: 0}
    shells = [[e]]
    for r in range(n):
        new = []
        for g in shells[r]:
            for s in alphabet:
                h = multiply(g, s)
                if h not in dist:
                    dist[h] = r + 1
                    new.append(h)
            if len(dist) > budget:
                for h in new:
                    del dist[h]
                partial = Ball(spec, genset, shells, dist)
                raise BudgetExceeded(
                    f"element budget {budget} exceeded while building radius {r + 1}; "
                    f"last completed radius {r}", partial=partial, last_radius=r)
        shells.append(new)
    return Ball(spec, genset, shells, dist)


def word_length(g: WreathElement, genset: GeneratorSet | None = None) -> int:
    """Geodesic length for the standard generating sets.

    lamp costs + 2(M - m) - |k| with m = min(0, k, g_min), M = max(0, k, g_max):
    sweep to both ends of the support and finish at the shift.
    """
    if genset is None:
        genset = standard_genset(g.spec)
    if not genset.standard:
        raise UnsupportedGensetError("closed-form word length needs a standard generating set")
    if genset.lamp_index:
        g = conjugate(g, head(g.spec, genset.lamp_index))
    k = g.shift
    lamps = g.lamps
    cost = g.spec.cost
    total = sum(cost(v) for _, v in lamps)
    lo, hi = min(0, k), max(0, k)
    if lamps:
        lo = min(lo, lamps[0][0])
        hi = max(hi, lamps[-1][0])
    return total + 2 * (hi - lo) - abs(k)


@dataclass
class Stratification:
    """Counts of base elements of B(n), stratified by g_min.

    ``by_min[s]`` counts base elements with g_min exactly s, i.e. A_s minus A_{s+1}.
    The identity has empty support and sits in every A_s, so it only shows
    up in ``in_A0`` and ``in_base``. ``shell_*`` restrict to word length exactly n.
    """

    radius: int
    in_base: int
    in_A0: int
    by_min: dict[int, int]
    shell_in_base: int
    shell_in_A0: int
    shell_by_min: dict[int, int]


def base_stratification(ball: Ball) -> Stratification:
    n = ball.radius
    by_min = {s: 0 for s in range(-n, n + 1)}
    shell_by_min = dict(by_min)
    in_base = in_a0 = sh_base = sh_a0 = 0
    for g, r in ball.dist.items():
        if g.shift:
            continue
        on_shell = r == n
        in_base += 1
        sh_base += on_shell
        if not g.lamps:
            in_a0 += 1
            sh_a0 += on_shell
            continue
        s = g.lamps[0][0]
        by_min[s] = by_min.get(s, 0) + 1
        if on_shell:
            shell_by_min[s] = shell_by_min.get(s, 0) + 1
        if s >= 0:
            in_a0 += 1
            sh_a0 += on_shell
    return Stratification(n, in_base, in_a0, by_min, sh_base, sh_a0, shell_by_min)


def _torsion_base(g: WreathElement) -> bool:
    if g.shift:
        return False
    return all(g.spec.element_order(v) is not None for _, v in g.lamps)


PREDICATES: dict[str, Callable[[WreathElement], bool]] = {
    "always": lambda g: True,
    "identity": lambda g: g.is_identity,
    "base": lambda g: g.shift == 0,
    "torsion-base": _torsion_base,
}


@dataclass
class DensityReport:
    predicate: str
    genset: str
    rows: list[tuple[int, int, int]] = field(default_factory=list)  # (n, |N cap B(n)|, |B(n)|)
    truncated: bool = False

    def density(self, n: int) -> Fraction:
        for r, hits, size in self.rows:
            if r == n:
                return Fraction(hits, size)
        raise KeyError(n)

    @property
    def densities(self) -> list[Fraction]:
        return [Fraction(h, s) for _, h, s in self.rows]


def density_sequence(spec: LampGroupSpec, genset: GeneratorSet, n_max: int,
                     predicate: str | Callable[[WreathElement], bool] = "base",
                     ball: Ball | None = None, budget: int | None = None) -> DensityReport:
    if callable(predicate):
        name, pred = getattr(predicate, "__name__", "custom"), predicate
    else:
        name, pred = predicate, PREDICATES[predicate]
    report = DensityReport(name, genset.describe())
    if ball is None:
        try:
            ball = build_ball(spec, genset, n_max, budget)
        except BudgetExceeded as exc:
            ball = exc.partial
            report.truncated = True
    hits = size = 0
    for r, shell in enumerate(ball.shells[: n_max + 1]):
        size += len(shell)
        hits += sum(1 for g in shell if pred(g))
        report.rows.append((r, hits, size))
    if report.truncated:
        raise BudgetExceeded(f"density truncated at radius {ball.radius}", partial=report,
                             last_radius=ball.radius)
    return report


@dataclass
class GrowthReport:
    sizes: list[int]
    shells: list[int]

    @property
    def ratios(self) -> list[Fraction]:
        """|B(r)| / |B(r-1)| for r >= 1."""
        return [Fraction(b, a) for a, b in zip(self.sizes, self.sizes[1:])]

    @property
    def roots(self) -> list[float]:
        """|B(r)|^(1/r) for r >= 1."""
        return [s ** (1.0 / r) for r, s in enumerate(self.sizes) if r]


def growth_report(ball: Ball) -> GrowthReport:
    return GrowthReport(ball.sizes(), [len(s) for s in ball.shells])


def _cost_polynomial(spec: LampGroupSpec, degree: int) -> list[int]:
    """coeff[c] = number of lamp values of cost c."""
    coeff = [0] * (degree + 1)
    coeff[0] = 1
    order = spec.order
    if order is None:
        for c in range(1, degree + 1):
            coeff[c] = 2
        return coeff
    for v in range(1, order):
        c = spec.cost(v)
        if c <= degree:
            coeff[c] += 1
    return coeff


def _poly_mul(a: list[int], b: list[int], degree: int) -> list[int]:
    out = [0] * (degree + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), degree + 1 - i)):
                out[i + j] += x * b[j]
    return out


def sphere_sizes(spec: LampGroupSpec, n_max: int) -> list[int]:
    """Exact sphere sizes |S(r)|, r = 0..n_max, for the standard generating set.

    Counts elements through the closed-form word length instead of building
    the ball: an element is determined by its travel window [lo, hi] (lo <= 0 <= hi),
    its shift k in the window and a lamp configuration on the window. The
    window ends not pinned by 0 or k must carry a lit lamp.
    """
    lamp_poly = _cost_polynomial(spec, n_max)
    lit_poly = [0] + lamp_poly[1:]
    # multiplicity of (free positions, forced positions, travel)
    shapes: dict[tuple[int, int, int], int] = {}
    for lo in range(-n_max, 1):
        for hi in range(0, n_max + 1):
            if 2 * (hi - lo) - max(-lo, hi) > n_max:
                continue
            for k in range(lo, hi + 1):
                travel = 2 * (hi - lo) - abs(k)
                if travel > n_max:
                    continue
                forced = (lo < min(0, k)) + (hi > max(0, k))
                key = (hi - lo + 1 - forced, forced, travel)
                shapes[key] = shapes.get(key, 0) + 1
    sizes = [0] * (n_max + 1)
    powers: dict[tuple[int, int], list[int]] = {}
    for (free, forced, travel), mult in sorted(shapes.items()):
        budget = n_max - travel
        key = (free, forced)
        poly = powers.get(key)
        if poly is None or len(poly) < budget + 1:
            poly = [1]
            for _ in range(free):
                poly = _poly_mul(poly, lamp_poly, n_max)
            for _ in range(forced):
                poly = _poly_mul(poly, lit_poly, n_max)
            powers[key] = poly
        for c in range(min(len(poly), budget + 1)):
            sizes[travel + c] += mult * poly[c]
    return sizes


def growth_from_counts(spec: LampGroupSpec, n_max: int) -> GrowthReport:
    shells = sphere_sizes(spec, n_max)
    sizes, total = [], 0
    for s in shells:
        total += s
        sizes.append(total)
    return GrowthReport(sizes, shells)
