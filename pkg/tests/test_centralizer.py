from __future__ import annotations

import random
from fractions import Fraction

import pytest
from conftest import SPECS, ball

from wreathdc.centralizer import (
    CentralizerReport,
    centralizer_in_ball,
    centralizer_linear_bound_check,
    element_order,
    structure_suite,
    translation_estimate,
    verify_cyclic_structure,
)
from wreathdc.element import commutes, from_lamps, head, identity, inverse, lamp, power
from wreathdc.geometry import word_length

C2 = SPECS["C2"]


def test_centralizer_of_t():
    rep = centralizer_in_ball(head(C2), ball("C2", 4))
    assert set(rep.members) == {head(C2, j) for j in range(-4, 5)}
    assert rep.unique_per_shift and rep.pairwise_commuting
    assert sorted(rep.by_shift) == list(range(-4, 5))
    assert verify_cyclic_structure(rep) == (True, None)
    assert rep.size == 9 and centralizer_linear_bound_check(rep, 1)


def test_centralizer_of_a0():
    rep = centralizer_in_ball(lamp(C2, 0), ball("C2", 2))
    assert set(rep.members) == {identity(C2), lamp(C2, 0)}
    assert rep.contained_in_base


def test_centralizer_of_identity_is_ball():
    b = ball("C2", 3)
    assert set(centralizer_in_ball(identity(C2), b).members) == set(b.elements)


def test_centralizer_of_a0t():
    g = from_lamps(C2, {0: 1}, 1)
    rep = centralizer_in_ball(g, ball("C2", 4))
    assert {identity(C2), g, inverse(g)} <= set(rep.members)
    assert verify_cyclic_structure(rep)[0]
    assert centralizer_linear_bound_check(rep, 1)


def test_centralizer_of_t_squared():
    rep = centralizer_in_ball(head(C2, 2), ball("C2", 4))
    assert {identity(C2), head(C2), head(C2, -1)} <= set(rep.members)
    assert rep.size <= 9 and centralizer_linear_bound_check(rep, 1)


def test_centralizer_outside_ball_target():
    g = from_lamps(C2, {0: 1, 5: 1}, 1)
    b = ball("C2", 4)
    rep = centralizer_in_ball(g, b)
    assert all(commutes(g, h) for h in rep.members)
    assert set(rep.members) == {h for h in b.elements if commutes(g, h)}


def test_injected_violation_is_caught():
    t2 = head(C2, 2)
    v, v2 = t2, from_lamps(C2, {0: 1}, 2)
    rep = CentralizerReport(head(C2), 4, [identity(C2), v, v2], {0: [identity(C2)], 2: [v, v2]},
                            False, False, True)
    ok, witness = verify_cyclic_structure(rep)
    assert not ok and witness[0] == "same shift"


def test_non_power_is_caught():
    g = head(C2)
    u = from_lamps(C2, {0: 1}, 2)  # not t^2
    rep = CentralizerReport(g, 4, [identity(C2), g, u], {0: [identity(C2)], 1: [g], 2: [u]},
                            False, True, True)
    ok, witness = verify_cyclic_structure(rep)
    assert not ok


def test_cyclic_structure_rejects_base_target():
    rep = centralizer_in_ball(lamp(C2, 0), ball("C2", 2))
    with pytest.raises(ValueError):
        verify_cyclic_structure(rep)
    with pytest.raises(ValueError):
        centralizer_linear_bound_check(rep)


def test_linear_bound_needs_lambda_at_least_one():
    rep = centralizer_in_ball(head(C2), ball("C2", 2))
    with pytest.raises(ValueError):
        centralizer_linear_bound_check(rep, Fraction(1, 2))


@pytest.mark.parametrize("name, n", [("C2", 6), ("C3", 6), ("Z", 5), ("S3", 4)])
def test_structure_suite(name, n):
    b = ball(name, n)
    for row in structure_suite(b):
        if not row.in_base:
            assert row.cyclic_ok, row.witness
            assert row.bound_ok and row.size <= 2 * n + 1
        elif not row.target.is_identity:
            assert row.contained_in_base
            if b.spec.abelian:
                assert row.all_base_members


def test_centralizer_kernel_matches_scalar():
    b = ball("S3", 3)
    rng = random.Random(3)
    for g in rng.sample(b.elements, 25):
        rep = centralizer_in_ball(g, b)
        assert set(rep.members) == {h for h in b.elements if commutes(g, h)}


# --- translation lengths -----------------------------------------------------

def test_tau_of_t():
    est = translation_estimate(head(C2))
    assert all(v == 1 for v in est.values)
    assert est.tau == 1 and est.lam == 1


def test_tau_of_a0():
    est = translation_estimate(lamp(C2, 0), exponents=(1, 2, 3, 4))
    assert est.lengths == [1, 0, 1, 0]
    assert est.tau == 0 and est.order == 2 and est.lam is None


def test_tau_of_a0t():
    g = from_lamps(C2, {0: 1}, 1)
    est = translation_estimate(g)
    assert all(v == 2 for v in est.values) and est.tau == 2
    for n in range(1, 5):
        assert ball("C2", 8).dist[power(g, n)] == 2 * n == word_length(power(g, n))


def test_tau_lower_bound_random():
    rng = random.Random(11)
    for name in ("C2", "C3", "Z", "S3"):
        elems = ball(name, 6).elements
        for g in rng.sample(elems, 50):
            est = translation_estimate(g)
            assert all(v >= abs(g.shift) for v in est.values)
            assert est.tau >= abs(g.shift)
            if g.shift:
                # |g^n| is eventually tau*n + c: the slope is the exact integer
                assert est.slope.denominator == 1 and est.slope >= abs(g.shift)
                assert est.tau >= est.slope


def test_tau_torsion_base_is_zero():
    for name in ("C2", "C3", "S3"):
        for g in ball(name, 4).elements:
            if g.shift == 0:
                assert translation_estimate(g).tau == 0


def test_element_order():
    assert element_order(head(C2)) is None
    assert element_order(from_lamps(SPECS["C3"], {0: 1, 1: 2})) == 3
    assert element_order(lamp(SPECS["Z"], 0)) is None
    assert element_order(identity(C2)) == 1


def test_translation_estimate_rejects_bad_exponents():
    with pytest.raises(ValueError):
        translation_estimate(head(C2), exponents=(0, 4))
