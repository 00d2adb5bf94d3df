"""Commuting-pair counts, degree-of-commutativity sequences and the
conjugacy-class variant."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .element import WreathElement, canonical_key, conjugate
from .geometry import Ball, BudgetExceeded, GeneratorSet, build_ball
from .lamps import FiniteGroupTable, LampGroupSpec, TableLamps

__all__ = [
    "DEFAULT_PAIR_BUDGET",
    "commuting_pairs_naive",
    "commuting_pairs_structured",
    "pair_blocks",
    "DcReport",
    "dc_sequence",
    "dc_finite_group",
    "UnionFind",
    "Saturation",
    "conjugacy_classes_saturation",
    "conjugacy_key",
    "conjugacy_classes_invariant",
    "ConjugacyReport",
    "conjugacy_dc_sequence",
]

DEFAULT_PAIR_BUDGET = 10**9


def commuting_pairs_naive(ball: Ball, pair_budget: int = DEFAULT_PAIR_BUDGET, backend: str | None = None) -> int:
    """Ordered pairs (a, b) in B(n)^2 with ab = ba, by checking every pair."""
    n = len(ball)
    if n * n > pair_budget:
        feasible = max((r for r, s in enumerate(ball.sizes()) if s * s <= pair_budget), default=-1)
        raise BudgetExceeded(f"{n * n} pair checks exceed budget {pair_budget}; feasible radius {feasible}",
                             last_radius=feasible)
    return ball.arrays.count_pairs(backend=backend)


def pair_blocks(ball: Ball, backend: str | None = None) -> dict[str, int]:
    """Commuting ordered pairs split by (base, non-base) blocks.

    Blocks: base x base (identity included), identity x non-base in both
    orders, non-trivial base x non-base in both orders (always 0: the
    centraliser of a non-trivial base element lies in the base), and
    non-base x non-base, where for each a and each shift at most one b
    commutes with a; that b is solved for directly and looked up.
    """
    arr = ball.arrays
    base = np.flatnonzero(arr.shifts == 0)
    nonbase = np.flatnonzero(arr.shifts != 0)
    if ball.spec.abelian:
        bb = len(base) ** 2
    else:
        bb = arr.count_pairs(base, backend=backend)
    return {
        "base_base": bb,
        "identity_nonbase": 2 * len(nonbase),
        "base_nonbase": 0,
        "nonbase_nonbase": arr.count_solved(nonbase, backend=backend),
    }


def commuting_pairs_structured(ball: Ball, backend: str | None = None) -> int:
    return sum(pair_blocks(ball, backend).values())


def _decimal(x: Fraction, digits: int = 10) -> str:
    from decimal import Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


@dataclass
class DcReport:
    method: str
    genset: str
    rows: list[tuple[int, int, int]] = field(default_factory=list)  # (n, |B(n)|, P(n))
    truncated: bool = False
    note: str = ""

    def dc(self, n: int) -> Fraction:
        for r, size, pairs in self.rows:
            if r == n:
                return Fraction(pairs, size * size)
        raise KeyError(n)

    @property
    def values(self) -> list[Fraction]:
        return [Fraction(p, s * s) for _, s, p in self.rows]

    @property
    def decay(self) -> list[Fraction]:
        """dc(n) / dc(n-1) for n >= 1."""
        v = self.values
        return [b / a for a, b in zip(v, v[1:])]

    def table(self) -> list[dict]:
        out = []
        for (r, size, pairs), val in zip(self.rows, self.values):
            out.append({
                "radius": r,
                "ball_size": size,
                "commuting_pairs": pairs,
                "dc_num": val.numerator,
                "dc_den": val.denominator,
                "dc_decimal": _decimal(val),
                "method": self.method,
            })
        return out


def dc_sequence(spec: LampGroupSpec, genset: GeneratorSet, n_max: int, method: str = "structured",
                ball: Ball | None = None, element_budget: int | None = None,
                pair_budget: int = DEFAULT_PAIR_BUDGET, backend: str | None = None) -> DcReport:
    """dc(n) = P(n) / |B(n)|^2 for n = 0..n_max, exactly.

    On a budget hit the report is truncated at the last finished radius and
    raised inside :class:`BudgetExceeded` as ``partial``.
    """
    if method not in ("naive", "structured"):
        raise ValueError(f"unknown method {method!r}")
    report = DcReport(method, genset.describe())
    if ball is None:
        try:
            ball = build_ball(spec, genset, n_max, element_budget)
        except BudgetExceeded as exc:
            ball = exc.partial
            report.truncated = True
            report.note = str(exc)
    for r in range(min(n_max, ball.radius) + 1):
        sub = ball.restrict(r)
        try:
            if method == "naive":
                pairs = commuting_pairs_naive(sub, pair_budget, backend)
            else:
                pairs = commuting_pairs_structured(sub, backend)
        except BudgetExceeded as exc:
            report.truncated = True
            report.note = str(exc)
            break
        report.rows.append((r, len(sub), pairs))
    if report.truncated:
        last = report.rows[-1][0] if report.rows else None
        raise BudgetExceeded(report.note, partial=report, last_radius=last)
    return report


def dc_finite_group(table: FiniteGroupTable) -> Fraction:
    """Commuting probability of a finite group, computed two ways."""
    m = table.order
    prod = table.product
    pairs = sum(1 for x in range(m) for y in range(m) if prod[x][y] == prod[y][x])
    by_pairs = Fraction(pairs, m * m)
    by_classes = Fraction(len(table.conjugacy_classes()), m)
    if by_pairs != by_classes:
        raise AssertionError(f"pair ratio {by_pairs} != class ratio {by_classes} for {table.name}")
    return by_pairs


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rank = dict.fromkeys(self.parent, 0)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        return True

    def groups(self) -> dict:
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return out


@dataclass
class Saturation:
    """Ball elements grouped by conjugation with conjugators from B(r).

    Cells only ever join true conjugates, but two conjugates whose every
    conjugator is longer than r stay apart: ``class_count`` is an upper
    bound on the number of classes meeting the ball.
    """

    cells: list[list[WreathElement]]
    conjugator_radius: int
    merges: list[tuple[WreathElement, WreathElement, WreathElement]]  # (g, h, s) with s^-1 g s = h
    upper_bound: bool = True

    @property
    def class_count(self) -> int:
        return len(self.cells)

    def cell_of(self) -> dict[WreathElement, int]:
        return {g: i for i, cell in enumerate(self.cells) for g in cell}


def _sorted_cells(groups) -> list[list[WreathElement]]:
    cells = [sorted(c, key=canonical_key) for c in groups]
    cells.sort(key=lambda c: canonical_key(c[0]))
    return cells


def conjugacy_classes_saturation(ball: Ball, conjugator_radius: int,
                                 conjugators: Ball | None = None) -> Saturation:
    if conjugators is None:
        conjugators = ball if conjugator_radius == ball.radius else build_ball(ball.spec, ball.genset, conjugator_radius)
    elif conjugators.radius != conjugator_radius:
        conjugators = conjugators.restrict(conjugator_radius)
    members = sorted(ball.elements, key=canonical_key)
    conj = sorted(conjugators.elements, key=canonical_key)
    uf = UnionFind(members)
    merges = []
    dist = ball.dist
    for g in members:
        for s in conj:
            h = conjugate(g, s)
            if h in dist and uf.union(g, h):
                merges.append((g, h, s))
    return Saturation(_sorted_cells(uf.groups().values()), conjugator_radius, merges)


def _min_rotation(seq: tuple) -> tuple:
    return min(seq[i:] + seq[:i] for i in range(len(seq))) if seq else seq


def conjugacy_key(g: WreathElement) -> tuple:
    """Complete conjugacy invariant for abelian lamp groups.

    Shift 0: the configuration translated to start at position 0. Shift
    k != 0: the lamp sums over residue classes mod |k|, up to rotation.
    """
    spec = g.spec
    if isinstance(spec, TableLamps):
        raise NotImplementedError("conjugacy invariant needs cyclic or integer lamps")
    k = g.shift
    if k == 0:
        if not g.lamps:
            return ("e",)
        lo = g.lamps[0][0]
        return (0, tuple((p - lo, v) for p, v in g.lamps))
    m = abs(k)
    sums = [0] * m
    for p, v in g.lamps:
        sums[p % m] = spec.mul(sums[p % m], v)
    return (k, _min_rotation(tuple(sums)))


def conjugacy_classes_invariant(ball: Ball) -> list[list[WreathElement]]:
    if isinstance(ball.spec, TableLamps):
        raise NotImplementedError("conjugacy invariant needs cyclic or integer lamps; use saturation")
    groups = defaultdict(list)
    for g in ball.elements:
        groups[conjugacy_key(g)].append(g)
    return _sorted_cells(groups.values())


@dataclass
class ConjugacyReport:
    method: str
    genset: str
    conjugator_radius: int | None
    rows: list[tuple[int, int, int, bool]] = field(default_factory=list)  # (n, |B(n)|, classes, exact)
    agreement: dict[int, bool] = field(default_factory=dict)
    dc: DcReport | None = None
    truncated: bool = False

    @property
    def ratios(self) -> list[Fraction]:
        return [Fraction(c, s) for _, s, c, _ in self.rows]

    def table(self) -> list[dict]:
        out = []
        dc_rows = {row["radius"]: row for row in self.dc.table()} if self.dc else {}
        for r, size, classes, exact in self.rows:
            row = {
                "radius": r,
                "ball_size": size,
                "class_count": classes,
                "ratio_num": Fraction(classes, size).numerator,
                "ratio_den": Fraction(classes, size).denominator,
                "ratio_decimal": _decimal(Fraction(classes, size)),
                "method": self.method,
                "exactness_flag": "exact" if exact else "upper-bound",
            }
            if self.dc is not None:
                d = dc_rows.get(r)
                row["commuting_pairs"] = d["commuting_pairs"] if d else ""
                row["dc_num"] = d["dc_num"] if d else ""
                row["dc_den"] = d["dc_den"] if d else ""
                row["dc_decimal"] = d["dc_decimal"] if d else ""
            out.append(row)
        return out


def conjugacy_dc_sequence(spec: LampGroupSpec, genset: GeneratorSet, n_max: int, method: str = "auto",
                          conjugator_radius: int | None = None, ball: Ball | None = None,
                          element_budget: int | None = None, with_dc: bool = True,
                          backend: str | None = None) -> ConjugacyReport:
    """Classes meeting B(n) over |B(n)|, n = 0..n_max.

    ``method``: ``invariant`` (abelian lamps, exact), ``saturation``
    (any lamps, upper bound), ``both`` (records per-radius agreement) or
    ``auto`` (invariant when possible). The saturation conjugator radius
    defaults to the ball radius at each n.
    """
    table_lamps = isinstance(spec, TableLamps)
    if method == "auto":
        method = "saturation" if table_lamps else "invariant"
    if method not in ("invariant", "saturation", "both"):
        raise ValueError(f"unknown method {method!r}")
    if table_lamps and method != "saturation":
        raise NotImplementedError("conjugacy invariant needs cyclic or integer lamps")
    report = ConjugacyReport(method, genset.describe(), conjugator_radius)
    if ball is None:
        try:
            ball = build_ball(spec, genset, n_max, element_budget)
        except BudgetExceeded as exc:
            ball = exc.partial
            report.truncated = True
    top = min(n_max, ball.radius)
    conj_ball = None
    if method != "invariant" and conjugator_radius is not None and conjugator_radius > ball.radius:
        conj_ball = build_ball(spec, genset, conjugator_radius, element_budget)
    for r in range(top + 1):
        sub = ball.restrict(r)
        counts = {}
        if method in ("invariant", "both"):
            counts["invariant"] = len({conjugacy_key(g) for g in sub})
        if method in ("saturation", "both"):
            cr = r if conjugator_radius is None else conjugator_radius
            source = conj_ball if conj_ball is not None else ball
            counts["saturation"] = conjugacy_classes_saturation(sub, cr, source.restrict(cr)).class_count
        if method == "both":
            report.agreement[r] = counts["invariant"] == counts["saturation"]
        exact = method != "saturation"
        classes = counts["invariant"] if exact else counts["saturation"]
        report.rows.append((r, len(sub), classes, exact))
    if with_dc:
        report.dc = dc_sequence(spec, genset, top, "structured", ball=ball, backend=backend)
    if report.truncated:
        raise BudgetExceeded(f"conjugacy report truncated at radius {top}", partial=report, last_radius=top)
    return report
