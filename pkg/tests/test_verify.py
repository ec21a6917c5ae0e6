from __future__ import annotations

from dataclasses import replace
from fractions import Fraction as F

import pytest

from toricmirror.extension import extend
from toricmirror.ifun import iseries
from toricmirror.linform import normalize, residue_at, substitute_z
from toricmirror.stackyfan import (
    adjacent_pairs,
    affine_quotient,
    all_box_elements,
    box,
    find_box_element,
    football,
    weighted_projective,
)
from toricmirror.verify import (
    check_bijection,
    check_c1,
    check_c2,
    check_restriction,
    check_wall_identities,
    recursion_coefficient,
    verify_all,
)

P1 = weighted_projective(1, 1)
P12 = weighted_projective(1, 2)
C2MU3 = affine_quotient([(0, 1), (3, -1)])


def pair_from(fan, sigma):
    return next(p for p in adjacent_pairs(fan) if p.sigma == sigma)


def zero_box(fan):
    return find_box_element(fan, (0,) * fan.N.ngens)


def nonzero_box(fan):
    return [b.element for b in all_box_elements(fan) if not b.is_zero]


X = (1, 0)  # the form x1 in one variable


def test_recursion_coefficient_examples():
    assert recursion_coefficient(P1, pair_from(P1, (0,)), zero_box(P1), 1) == normalize(1, -1, [(X, -1)])
    assert recursion_coefficient(P12, pair_from(P12, (0,)), zero_box(P12), 1) == normalize(1, 1, [])
    assert recursion_coefficient(P12, pair_from(P12, (1,)), zero_box(P12), 1) == normalize(1, 2, [(X, -2)])


def test_residue_identity_by_hand():
    pair = pair_from(P1, (0,))
    lhs = residue_at(normalize(1, 1, [((1, 1), -1)]), (1, 1))
    rc = recursion_coefficient(P1, pair, zero_box(P1), 1)
    rhs = rc * substitute_z(normalize(1, 1, [((0, 1), 1)]), (-1,))
    assert lhs == rhs == normalize(1, 1, [])


def test_c1_examples():
    ext = extend(P1, [])
    s = iseries(P1, ext, (0,), (1, 0), 3)
    assert check_c1(P1, ext, (0,), zero_box(P1), s).ok

    ext = extend(C2MU3, nonzero_box(C2MU3))
    s = iseries(C2MU3, ext, (0, 1), (0, 0), 3)
    for b in box(C2MU3, (0, 1), include_faces=True):
        rep = check_c1(C2MU3, ext, (0, 1), b, s)
        assert rep.ok and "[0 poles]" in rep.checks[0].witness


def test_c1_injected_double_pole():
    ext = extend(P1, [])
    s = iseries(P1, ext, (0,), (1, 0), 2)
    key = s.keys()[1]
    bad = dict(s.terms)
    bad[key] = (bad[key][0], normalize(1, 1, [((1, 1), -2)]))
    rep = check_c1(P1, ext, (0,), zero_box(P1), replace(s, terms=bad))
    assert not rep.ok and "pole not simple" in rep.checks[0].witness


def test_c1_injected_foreign_pole():
    ext = extend(P1, [])
    s = iseries(P1, ext, (0,), (1, 0), 2)
    key = s.keys()[1]
    bad = dict(s.terms)
    bad[key] = (bad[key][0], normalize(1, 1, [((1, -1), -1)]))
    assert not check_c1(P1, ext, (0,), zero_box(P1), replace(s, terms=bad)).ok


def test_c2_passes_and_controls_fail():
    ext = extend(P12, [])
    pair = pair_from(P12, (0,))
    b = zero_box(P12)
    assert check_c2(P12, ext, pair, b, (1, 0), 2).ok
    assert not check_c2(P12, ext, pair, b, (1, 0), 2, rc_factor=2).ok
    assert not check_c2(P12, ext, pair, b, (1, 0), 2, residue_sign=-1).ok
    assert not check_c2(P12, ext, pair, b, (1, 0), 3, key_shift=(1, F(1, 2))).ok


def test_c2_failure_carries_witness():
    ext = extend(P1, [])
    rep = check_c2(P1, ext, pair_from(P1, (0,)), zero_box(P1), (1, 0), 2, rc_factor=2)
    fails = [c for c in rep.checks if not c.passed]
    assert fails and all("LHS=" in c.witness and "RHS=" in c.witness for c in fails)


def test_restriction_examples():
    ext = extend(P1, [])
    for cone in P1.top_cones:
        assert check_restriction(P1, ext, cone, (1, 0), 3).ok
    ext = extend(P12, [])
    assert check_restriction(P12, ext, (1,), (1, 0), 3).ok

    def tamper(table):
        return {k: -v for k, v in table.items()}

    assert not check_restriction(P1, extend(P1, []), (0,), (1, 0), 3, perturb=tamper).ok


def test_verify_all_examples():
    rep = verify_all(P1, extend(P1, []), (1, 0), 4)
    assert rep.ok and rep.lines()[-1] == f"ALL CHECKS PASSED ({len(rep.checks)} checks)"
    assert "NOTE C3: partial (parameterization identity only)" in rep.lines()

    fan = football(2, 3)
    rep = verify_all(fan, extend(fan, nonzero_box(fan)), (1, 0), 3)
    assert rep.ok


def test_verify_all_is_deterministic():
    fan = weighted_projective(1, 1, 2)
    ext = extend(fan, nonzero_box(fan))
    a = verify_all(fan, ext, (1, 0, 0), 2).lines()
    b = verify_all(fan, ext, (1, 0, 0), 2, jobs=2).lines()
    assert a == b


def test_checks_can_be_selected():
    rep = verify_all(P1, extend(P1, []), (1, 0), 2, checks=["c1"])
    assert {c.ident.split()[0] for c in rep.checks} == {"LEAD", "C1"}


def test_wall_identities_and_bijection():
    fan = weighted_projective(1, 1, 2)
    ext = extend(fan, nonzero_box(fan))
    for pair in adjacent_pairs(fan):
        assert check_wall_identities(fan, pair).ok
        for b in box(fan, pair.sigma, include_faces=True):
            rep = check_bijection(fan, ext, pair, b, (1, 0, 0), 2)
            assert rep.ok and rep.checks


@pytest.mark.parametrize("sigma", [(0,), (1,)])
def test_wrong_pole_sign_is_not_a_pole(sigma):
    ext = extend(P1, [])
    s = iseries(P1, ext, sigma, (1, 0), 2)
    key = s.keys()[1]
    e = s.coefficient(key)
    assert not residue_at(e, (1, 1) if sigma == (0,) else (1, -1)).is_zero
    assert residue_at(e, (1, -1) if sigma == (0,) else (1, 1)).is_zero
