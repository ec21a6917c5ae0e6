from __future__ import annotations

from fractions import Fraction

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from toricmirror.exactlin import FgAbelianGroup, free_group, matvec
from toricmirror.stackyfan import (
    InvalidWeights,
    StackyFan,
    UnknownCone,
    adjacent_pairs,
    affine_quotient,
    all_box_elements,
    box,
    box_involution,
    check_kahler,
    fixed_point_weights,
    football,
    mori_generators,
    pair_weight,
    product,
    validate,
    weighted_projective,
)

P1 = weighted_projective(1, 1)
P12 = weighted_projective(1, 2)
P112 = weighted_projective(1, 1, 2)
F23 = football(2, 3)
C2MU3 = affine_quotient([(0, 1), (3, -1)])
P1xP1 = product(P1, P1)
GERBE = StackyFan(FgAbelianGroup(1, (2,)), [(1, 0), (-1, 1)], [(0,), (1,)])

ALL = [P1, P12, P112, F23, C2MU3, P1xP1, weighted_projective(2, 3), GERBE]


def test_validate_examples():
    assert validate(P1).ok
    p2 = StackyFan(free_group(2), [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    assert validate(p2).ok
    gap = StackyFan(free_group(2), [(1, 0), (1, 1), (0, 1), (-1, 1)], [(0, 1), (2, 3)])
    rep = validate(gap)
    assert not rep.ok
    assert any("support not convex" in m for _, _, m in rep.failures())


def test_validate_rejects_non_simplicial():
    bad = StackyFan(free_group(2), [(1, 0), (0, 1), (1, 1)], [(0, 1, 2)])
    rep = validate(bad)
    assert any("cone [0, 1, 2] is not simplicial" in m for _, _, m in rep.failures())


def test_validate_rejects_overlap():
    bad = StackyFan(free_group(1), [(1,), (2,)], [(0,), (1,)])
    assert not validate(bad).ok


@pytest.mark.parametrize("fan", ALL)
def test_builders_validate_and_fan_sequence_exact(fan):
    assert validate(fan).ok
    for k in fan.kernel:
        assert fan.rho(k) == fan.N.zero()
    assert len(fan.kernel) == fan.n - fan.dim


def test_builder_examples():
    assert F23.rays == ((-2,), (3,)) and F23.kernel == ((3, 2),)
    assert P12.rays == ((1,), (-2,)) and P12.kernel == ((2, 1),)
    assert P112.rays == ((1, 0), (0, 1), (-1, -2))
    with pytest.raises(InvalidWeights):
        weighted_projective(1)


def test_box_examples():
    b = box(P12, [1])
    assert len(b) == 1 and b[0].element == (-1,) and b[0].fracs == (0, Fraction(1, 2))
    assert b[0].age == Fraction(1, 2)
    assert [x.element for x in box(P12, [1], include_faces=True)] == [(0,), (-1,)]
    assert all(x.is_zero for c in P1.cones for x in box(P1, c, include_faces=True))
    assert len(box(F23, [0])) == 1 and len(box(F23, [1])) == 2
    assert sorted(b.age for b in all_box_elements(F23)) == [0, Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)]
    with pytest.raises(UnknownCone):
        box(P1, [0, 1])


def test_box_with_torsion_in_n():
    empty = box(GERBE, [])
    assert [b.element for b in empty] == [(0, 0), (0, 1)]


def _torsion_order(fan, cone):
    cols = [list(fan.rays[i]) for i in cone]
    for t, m in enumerate(fan.N.torsion):
        col = [0] * fan.N.ngens
        col[fan.N.rank + t] = m
        cols.append(col)
    if not cols:
        return 1
    M = Matrix(cols).T
    facs = [abs(int(x)) for x in invariant_factors(M, domain=ZZ)]
    free = fan.N.ngens - len([f for f in facs if f])
    assert free == fan.N.rank - len(cone)
    out = 1
    for f in facs:
        if f:
            out *= f
    return out


@pytest.mark.parametrize("fan", ALL)
def test_box_count_matches_snf_oracle(fan):
    for c in fan.cones:
        assert len(box(fan, c, include_faces=True)) == _torsion_order(fan, c)


@pytest.mark.parametrize("fan", ALL)
def test_box_element_invariants(fan):
    for b in all_box_elements(fan):
        lhs = tuple(sum((b.fracs[i] * fan.rays_bar[i][k] for i in b.cone), Fraction(0))
                    for k in range(fan.dim))
        assert lhs == tuple(b.element[: fan.dim])
        h = box_involution(fan, b)
        assert h.cone == b.cone
        assert box_involution(fan, h) == b
        assert b.age + h.age == len(b.cone)


def test_involution_examples():
    z = all_box_elements(P12)[0]
    assert box_involution(P12, z) == z
    b = box(P12, [1])[0]
    assert box_involution(P12, b) == b
    third = next(x for x in box(F23, [1]) if x.fracs[1] == Fraction(1, 3))
    assert box_involution(F23, third).fracs[1] == Fraction(2, 3)


def test_adjacent_pairs():
    pairs = adjacent_pairs(P1)
    assert [(p.sigma, p.sigma_prime, p.j, p.j_prime) for p in pairs] == [((0,), (1,), 0, 1), ((1,), (0,), 1, 0)]
    assert len(adjacent_pairs(P112)) == 6
    assert adjacent_pairs(C2MU3) == []


def test_weights():
    w = fixed_point_weights(P1, [0])
    assert w[0] == (1,) and w[1] == (0,)
    assert fixed_point_weights(P12, [1])[1] == (Fraction(-1, 2),)


@pytest.mark.parametrize("fan", ALL)
def test_weight_duality(fan):
    for c in fan.top_cones:
        ws = fixed_point_weights(fan, c)
        for i in range(fan.n):
            if i not in c:
                assert not any(ws[i])
                continue
            for k in c:
                assert pair_weight(ws[i], fan.rays_bar[k]) == int(i == k)


def test_mori_examples():
    assert mori_generators(P1) == [(1, 1)]
    assert mori_generators(P12) == [(2, 1)]
    assert len(mori_generators(P1xP1)) == 2
    assert mori_generators(C2MU3) == []


def test_mori_generators_lie_in_kernel():
    for fan in ALL:
        for g in mori_generators(fan):
            assert matvec([list(r) for r in zip(*fan.rays_bar)], g) == (0,) * fan.dim


def test_check_kahler():
    assert check_kahler(P1, [1, 0])
    assert not check_kahler(P1, [1, -1])
    assert check_kahler(C2MU3, [0, 0])
