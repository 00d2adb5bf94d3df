from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from conftest import SPECS, ball

from wreathdc.element import from_lamps, head, identity, inverse, lamp, multiply
from wreathdc.geometry import (
    BudgetExceeded,
    GeneratorSet,
    UnsupportedGensetError,
    base_stratification,
    build_ball,
    density_sequence,
    growth_from_counts,
    growth_report,
    sphere_sizes,
    standard_genset,
    word_length,
)

C2 = SPECS["C2"]


def word_closure(genset, n):
    """Reduced values of every word of length <= n, with their shortest length."""
    alphabet = [g for _, g in genset.alphabet]
    dist = {identity(genset.spec): 0}
    for length in range(1, n + 1):
        for word in itertools.product(alphabet, repeat=length):
            g = identity(genset.spec)
            for s in word:
                g = multiply(g, s)
            dist.setdefault(g, length)
    return dist


def test_standard_genset_examples():
    assert len(standard_genset(SPECS["C2"]).alphabet) == 3
    assert len(standard_genset(SPECS["Z"]).alphabet) == 4
    s3 = standard_genset(SPECS["S3"])
    assert len(s3.generators) == 6  # five lamps and t
    assert len(s3.alphabet) == 7  # three involutions, one inverse pair, t and t^-1
    assert standard_genset(C2).labels == ["a0", "t"]
    assert standard_genset(C2, lamp_index=3).labels == ["a3", "t"]


def test_genset_rejects_bad_generators():
    with pytest.raises(ValueError, match="identity"):
        GeneratorSet(C2, (("e", identity(C2)),))
    with pytest.raises(ValueError, match="duplicate"):
        GeneratorSet(C2, (("x", head(C2)), ("x", lamp(C2, 0))))


@pytest.mark.parametrize("name", list(SPECS))
def test_ball_radius_zero(name):
    assert len(ball(name, 0)) == 1


def test_small_balls_c2():
    b1 = ball("C2", 1)
    assert len(b1) == 4
    assert set(b1.elements) == {identity(C2), lamp(C2, 0), head(C2), head(C2, -1)}
    b2 = ball("C2", 2)
    assert len(b2) == 10
    a0, t, ti = lamp(C2, 0), head(C2), head(C2, -1)
    new = {head(C2, 2), head(C2, -2), multiply(a0, t), multiply(t, a0), multiply(a0, ti), multiply(ti, a0)}
    assert set(b2.shells[2]) == new


def test_ball_matches_word_enumeration_c2():
    genset = standard_genset(C2)
    oracle = word_closure(genset, 8)
    b = ball("C2", 8)
    assert b.dist == oracle


@pytest.mark.parametrize("name, n", [("C3", 5), ("Z", 4), ("S3", 3)])
def test_ball_matches_word_enumeration(name, n):
    spec = SPECS[name]
    assert ball(name, n).dist == word_closure(standard_genset(spec), n)


def test_shells_partition_ball():
    b = ball("C3", 6)
    assert b.shells[0] == [identity(SPECS["C3"])]
    flat = [g for s in b.shells for g in s]
    assert len(flat) == len(set(flat)) == len(b)
    assert all(b.dist[g] == r for r, s in enumerate(b.shells) for g in s)
    assert all(b.by_key[k][1] == b.dist[g] for k, (g, _) in b.by_key.items())


def test_word_length_examples():
    assert word_length(identity(C2)) == 0
    assert word_length(head(C2, 5)) == 5
    assert word_length(lamp(C2, 1)) == 3
    assert ball("C2", 3).dist[lamp(C2, 1)] == 3
    g = from_lamps(C2, {-1: 1, 1: 1})
    assert word_length(g) == 6
    assert g not in ball("C2", 5) and ball("C2", 6).dist[g] == 6


@pytest.mark.parametrize("name, n", [("C2", 12), ("C3", 10), ("Z", 9), ("S3", 6)])
def test_word_length_equals_bfs(name, n):
    b = ball(name, n)
    genset = b.genset
    assert all(word_length(g, genset) == r for g, r in b.dist.items())


@pytest.mark.parametrize("index", [-2, 1, 3])
def test_word_length_shifted_lamp_generator(index):
    spec = SPECS["C3"]
    gs = standard_genset(spec, lamp_index=index)
    b = build_ball(spec, gs, 6)
    assert all(word_length(g, gs) == r for g, r in b.dist.items())
    assert b.sizes() == ball("C3", 6).sizes()


def test_word_length_needs_standard_genset():
    gs = GeneratorSet(C2, (("a0", lamp(C2, 0)), ("t2", head(C2, 2))))
    with pytest.raises(UnsupportedGensetError):
        word_length(lamp(C2, 0), gs)


def test_word_length_triangle_and_inverse():
    rng = random.Random(7)
    for name in ("C2", "C3", "Z", "S3"):
        elems = ball(name, 5).elements
        for _ in range(300):
            g, h = rng.choice(elems), rng.choice(elems)
            assert word_length(multiply(g, h)) <= word_length(g) + word_length(h)
            assert word_length(inverse(g)) == word_length(g)


@pytest.mark.parametrize("name, n", [("C2", 16), ("C3", 10), ("Z", 9), ("S3", 6), ("C2xC2", 7)])
def test_sphere_counts_match_bfs(name, n):
    b = ball(name, n)
    assert sphere_sizes(SPECS[name], n) == [len(s) for s in b.shells]


def test_c2_ball_sizes():
    sizes = growth_from_counts(C2, 16).sizes
    assert sizes == [1, 4, 10, 22, 44, 84, 155, 278, 490, 850, 1457, 2474, 4167, 6974, 11609, 19238, 31762]


def test_budget_raises_with_partial():
    with pytest.raises(BudgetExceeded) as info:
        build_ball(C2, standard_genset(C2), 10, budget=100)
    partial = info.value.partial
    assert info.value.last_radius == 5
    assert partial.radius == 5 and len(partial) == 84


def test_budget_precheck_path():
    # radius above the precheck threshold: counts decide the cut-off before BFS
    with pytest.raises(BudgetExceeded) as info:
        build_ball(C2, standard_genset(C2), 400, budget=1000)
    assert info.value.last_radius == 9
    assert len(info.value.partial) == 850


def test_budget_env(monkeypatch):
    monkeypatch.setenv("WREATH_DC_BUDGET", "50")
    with pytest.raises(BudgetExceeded):
        build_ball(C2, standard_genset(C2), 6)


def test_stratification_examples():
    st = base_stratification(ball("C2", 1))
    assert st.in_base == 2 and st.in_A0 == 2
    assert base_stratification(ball("C2", 0)).in_base == 1
    st3 = base_stratification(ball("C2", 3))
    assert st3.in_base <= 4 * st3.in_A0


@pytest.mark.parametrize("name, n", [("C2", 10), ("C3", 8), ("Z", 7), ("S3", 5)])
def test_stratification_layers(name, n):
    for r in range(n + 1):
        st = base_stratification(ball(name, n).restrict(r))
        for s, count in st.by_min.items():
            if s <= -1:
                assert count <= st.in_A0
            if s < -r:
                assert count == 0
        assert st.in_base <= (r + 1) * st.in_A0


def test_density_examples():
    gs = standard_genset(C2)
    rep = density_sequence(C2, gs, 6, "always", ball=ball("C2", 6))
    assert all(rep.density(n) == 1 for n in range(7))
    rep = density_sequence(C2, gs, 6, "identity", ball=ball("C2", 6))
    vals = [rep.density(n) for n in range(7)]
    assert vals == [Fraction(1, s) for s in ball("C2", 6).sizes()]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    rep = density_sequence(C2, gs, 1, "base")
    assert rep.density(1) == Fraction(2, 4)
    assert rep.genset == "{a0, t}"


def test_density_callable_and_torsion():
    z = SPECS["Z"]
    gs = standard_genset(z)
    rep = density_sequence(z, gs, 3, "torsion-base")
    assert all(rep.density(n) == Fraction(1, len(ball("Z", n))) for n in range(4))
    rep = density_sequence(C2, standard_genset(C2), 3, lambda g: g.shift > 0)
    assert rep.density(1) == Fraction(1, 4)


def test_growth_report_examples():
    rep = growth_report(ball("C2", 10))
    assert all(r >= 1 for r in rep.ratios)
    assert rep.sizes == ball("C2", 10).sizes()
    c3 = growth_from_counts(SPECS["C3"], 12)
    assert all(r > 2 for r in c3.ratios[-3:])
    phi = (1 + 5**0.5) / 2
    roots = growth_from_counts(C2, 40).roots
    assert abs(roots[-1] - phi) < 0.1 * phi
    assert all(b < a for a, b in zip(roots[-10:], roots[-9:]))


def test_ball_is_deterministic():
    spec = SPECS["C3"]
    a = build_ball(spec, standard_genset(spec), 6)
    b = build_ball(spec, standard_genset(spec), 6)
    assert [list(s) for s in a.shells] == [list(s) for s in b.shells]
