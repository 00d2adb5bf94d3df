from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from conftest import FAMILIES, SPECS, ball

from wreathdc.dc import (
    UnionFind,
    commuting_pairs_naive,
    commuting_pairs_structured,
    conjugacy_classes_invariant,
    conjugacy_classes_saturation,
    conjugacy_dc_sequence,
    conjugacy_key,
    dc_finite_group,
    dc_sequence,
    pair_blocks,
)
from wreathdc.element import commutes, conjugate, from_lamps, head, identity, lamp, multiply
from wreathdc.geometry import BudgetExceeded, build_ball, standard_genset
from wreathdc.lamps import BUNDLED_TABLES, TableLamps, bundled_table

C2 = SPECS["C2"]
KERNELS = ("numba", "numpy")
RADII = {"C2": 10, "C3": 7, "Z": 6, "S3": 4}


def brute_pairs(b):
    return sum(commutes(x, y) for x in b.elements for y in b.elements)


def test_pairs_small_examples():
    assert commuting_pairs_naive(ball("C2", 0)) == 1
    b1 = ball("C2", 1)
    assert commuting_pairs_naive(b1) == 12 == brute_pairs(b1)
    assert commuting_pairs_structured(b1) == 12
    per = {g: sum(commutes(g, h) for h in b1.elements) for g in b1.elements}
    assert per == {identity(C2): 4, lamp(C2, 0): 2, head(C2): 3, head(C2, -1): 3}


@pytest.mark.parametrize("kernel", KERNELS)
@pytest.mark.parametrize("name", FAMILIES)
def test_naive_equals_structured(name, kernel):
    b = ball(name, RADII[name])
    for r in range(b.radius + 1):
        sub = b.restrict(r)
        assert commuting_pairs_naive(sub, backend=kernel) == commuting_pairs_structured(sub, backend=kernel)


@pytest.mark.parametrize("name, n", [("C2", 4), ("C3", 3), ("Z", 3), ("S3", 2)])
def test_kernels_match_brute_force(name, n):
    b = ball(name, n)
    exact = brute_pairs(b)
    for kernel in KERNELS:
        assert commuting_pairs_naive(b, backend=kernel) == exact
        assert commuting_pairs_structured(b, backend=kernel) == exact


@pytest.mark.parametrize("name, n", [("C2xC2", 4), ("D4", 3), ("Q8", 3)])
def test_other_tables(name, n):
    spec = TableLamps(bundled_table(name))
    b = build_ball(spec, standard_genset(spec), n)
    counts = {commuting_pairs_naive(b, backend=k) for k in KERNELS}
    counts |= {commuting_pairs_structured(b, backend=k) for k in KERNELS}
    assert len(counts) == 1


@pytest.mark.parametrize("name", FAMILIES)
def test_pair_count_invariants(name):
    b = ball(name, RADII[name] - 1)
    for r in range(b.radius + 1):
        sub = b.restrict(r)
        p = commuting_pairs_structured(sub)
        assert p >= 2 * len(sub) - 1
        assert (p - len(sub)) % 2 == 0


@pytest.mark.parametrize("name", ("C2", "C3", "Z"))
def test_abelian_base_block(name):
    b = ball(name, 6)
    base = sum(1 for g in b.elements if g.shift == 0)
    assert pair_blocks(b)["base_base"] == base**2
    idx = np.array([i for i, g in enumerate(b.elements) if g.shift == 0], dtype=np.int64)
    assert b.arrays.count_pairs(idx) == base**2


def test_dc_sequence_examples():
    gs = standard_genset(C2)
    rep = dc_sequence(C2, gs, 12, "structured")
    assert rep.dc(0) == 1
    assert rep.dc(1) == Fraction(3, 4)
    assert rep.dc(12) < rep.dc(6)
    assert rep.values[:4] == [1, Fraction(3, 4), Fraction(11, 25), Fraction(28, 121)]
    row = rep.table()[1]
    assert row == {"radius": 1, "ball_size": 4, "commuting_pairs": 12, "dc_num": 3, "dc_den": 4,
                   "dc_decimal": "0.75", "method": "structured"}


@pytest.mark.parametrize("name", FAMILIES)
def test_dc_zero_is_one(name):
    spec = SPECS[name]
    assert dc_sequence(spec, standard_genset(spec), 0).dc(0) == 1


def test_naive_pair_budget():
    gs = standard_genset(C2)
    with pytest.raises(BudgetExceeded, match="feasible radius 3"):
        commuting_pairs_naive(ball("C2", 6), pair_budget=22**2)
    with pytest.raises(BudgetExceeded) as info:
        dc_sequence(C2, gs, 6, "naive", pair_budget=500)
    partial = info.value.partial
    assert [r[0] for r in partial.rows] == [0, 1, 2, 3] and partial.truncated


def test_dc_element_budget_partial():
    gs = standard_genset(C2)
    with pytest.raises(BudgetExceeded) as info:
        dc_sequence(C2, gs, 10, element_budget=100)
    assert info.value.partial.rows[-1][0] == 5


def test_dc_rejects_unknown_method():
    with pytest.raises(ValueError):
        dc_sequence(C2, standard_genset(C2), 2, "magic")


def test_finite_group_dc():
    expected = {"C2": 1, "C2xC2": 1, "S3": Fraction(1, 2), "D4": Fraction(5, 8), "Q8": Fraction(5, 8)}
    for name in BUNDLED_TABLES:
        t = bundled_table(name)
        d = dc_finite_group(t)
        assert d == expected[name]
        m = t.order
        pairs = sum(t.mul(x, y) == t.mul(y, x) for x, y in itertools.product(range(m), repeat=2))
        assert d == Fraction(pairs, m * m) == Fraction(len(t.conjugacy_classes()), m)
    s3 = bundled_table("S3")
    assert sum(s3.mul(x, y) == s3.mul(y, x) for x, y in itertools.product(range(6), repeat=2)) == 18


# --- conjugacy ------------------------------------------------------------------

def test_union_find():
    uf = UnionFind("abcd")
    assert uf.union("a", "b") and not uf.union("b", "a")
    uf.union("c", "d")
    assert sorted(sorted(g) for g in uf.groups().values()) == [["a", "b"], ["c", "d"]]


def test_saturation_examples():
    sat = conjugacy_classes_saturation(ball("C2", 0), 0)
    assert sat.class_count == 1
    b = ball("C2", 3)
    sat = conjugacy_classes_saturation(b, 3)
    cell = sat.cell_of()
    assert cell[lamp(C2, 0)] == cell[lamp(C2, 1)]
    assert [identity(C2)] in sat.cells
    for g, h, s in sat.merges:
        assert conjugate(g, s) == h


def test_invariant_examples():
    a0, a1, t = lamp(C2, 0), lamp(C2, 1), head(C2)
    assert conjugacy_key(a0) == conjugacy_key(a1)
    assert conjugacy_key(multiply(a0, t)) == conjugacy_key(multiply(a1, t))
    assert conjugacy_key(a0) != conjugacy_key(from_lamps(C2, {0: 1, 1: 1}))
    assert conjugate(multiply(a0, t), head(C2, -1)) == multiply(a1, t)


def test_invariant_needs_abelian_lamps():
    with pytest.raises(NotImplementedError):
        conjugacy_key(lamp(SPECS["S3"], 0, 1))
    with pytest.raises(NotImplementedError):
        conjugacy_classes_invariant(ball("S3", 1))


def test_conjugacy_key_is_invariant():
    for name in ("C2", "C3", "Z"):
        b = ball(name, 4)
        conj = ball(name, 3).elements
        for g in b.elements[:200]:
            k = conjugacy_key(g)
            for s in conj:
                assert conjugacy_key(conjugate(g, s)) == k


def test_conj_dc_examples():
    gs = standard_genset(C2)
    rep = conjugacy_dc_sequence(C2, gs, 2, "both")
    assert rep.rows[0][2] == 1 and rep.ratios[0] == 1
    assert rep.rows[2][1:3] == (10, 8)
    assert rep.agreement == {0: True, 1: True, 2: True}
    assert all(r <= 1 for r in rep.ratios)
    row = rep.table()[2]
    assert row["class_count"] == 8 and row["ratio_num"] == 4 and row["ratio_den"] == 5
    assert row["exactness_flag"] == "exact" and row["dc_num"] == 11


def test_conj_dc_table_lamps_use_saturation():
    s3 = SPECS["S3"]
    rep = conjugacy_dc_sequence(s3, standard_genset(s3), 2)
    assert rep.method == "saturation"
    assert rep.table()[-1]["exactness_flag"] == "upper-bound"
    with pytest.raises(NotImplementedError):
        conjugacy_dc_sequence(s3, standard_genset(s3), 2, "invariant")


@pytest.mark.parametrize("name, n", [("C2", 8), ("C3", 6)])
def test_invariant_vs_saturation(name, n):
    b = ball(name, n)
    sat = conjugacy_classes_saturation(b, 8, ball(name, 8))
    # every merge joins equal keys
    for g, h, _ in sat.merges:
        assert conjugacy_key(g) == conjugacy_key(h)
    # every equal-key pair ends up in one cell
    cell = sat.cell_of()
    by_key = {}
    for g in b.elements:
        by_key.setdefault(conjugacy_key(g), set()).add(cell[g])
    unmerged = {k: cells for k, cells in by_key.items() if len(cells) > 1}
    assert not unmerged
    assert sat.cells == conjugacy_classes_invariant(b)
