from __future__ import annotations

from fractions import Fraction as F
from math import floor

import sympy
from hypothesis import given, settings, strategies as st

from toricmirror.exactlin import FgAbelianGroup
from toricmirror.extension import enumerate_cone, extend
from toricmirror.ifun import (
    icoeff,
    iseries,
    iseries_restriction_form,
    jfun_bg,
    leading_term_ok,
)
from toricmirror.linform import evaluate, normalize
from toricmirror.stackyfan import (
    affine_quotient,
    all_box_elements,
    fixed_point_weights,
    football,
    product,
    weighted_projective,
)

P1 = weighted_projective(1, 1)
P12 = weighted_projective(1, 2)
C2MU3 = affine_quotient([(0, 1), (3, -1)])

Z = sympy.Symbol("z")


def nonzero_box(fan):
    return [b.element for b in all_box_elements(fan) if not b.is_zero]


def to_sympy(e, xs):
    if e.is_zero:
        return sympy.Integer(0)
    out = sympy.Rational(e.scalar.numerator, e.scalar.denominator)
    for f, k in e.factors:
        lin = sum(c * v for c, v in zip(f.coeffs, list(xs) + [Z]))
        out *= lin ** k
    return out


def oracle(fan, ext, cone, lam, depth=12):
    """The ratio of infinite products, both cut at the same far-negative floor."""
    xs = sympy.symbols(f"x1:{fan.dim + 1}")
    ws = fixed_point_weights(fan, cone)
    out = Z
    for i, li in enumerate(lam):
        li = F(li)
        u = sum(sympy.Rational(w.numerator, w.denominator) * x for w, x in zip(ws[i], xs)) \
            if i in cone else sympy.Integer(0)
        f = li - floor(li)
        lo = f - depth
        num, den = sympy.Integer(1), sympy.Integer(1)
        a = lo
        while a <= max(li, 0):
            term = u + sympy.Rational(a.numerator, a.denominator) * Z
            skip = u == 0 and a == 0
            if a <= 0 and not skip:
                num *= term
            if a <= li and not skip:
                den *= term
            if skip and li < 0:
                return sympy.Integer(0), xs
            a += 1
        out *= num / den
    return sympy.cancel(out), xs


def test_icoeff_examples():
    ext = extend(P1, [])
    assert icoeff(P1, ext, (0,), (0, 0)) == normalize(1, 1, [((0, 1), 1)])
    assert icoeff(P1, ext, (0,), (1, 1)) == normalize(1, 1, [((1, 1), -1)])
    two = icoeff(P1, ext, (0,), (2, 2))
    assert two == normalize(1, F(1, 2), [((0, 1), -1), ((1, 1), -1), ((1, 2), -1)])


def test_icoeff_p12_twisted_sector():
    # u_2 = -x/2 and lam_2 = -1/2: the a-range (-1/2, 0] holds no a with <a> = 1/2
    ext = extend(P12, [(-1,)])
    assert icoeff(P12, ext, (1,), (0, F(-1, 2), 1)) == normalize(1, 1, [])


def test_iseries_examples():
    s = iseries(P1, extend(P1, []), (0,), (1, 0), 2)
    assert [k[1] for k in s.keys()] == [(0, 0), (1, 1), (2, 2)]
    assert leading_term_ok(s)

    s = iseries(P1, extend(P1, []), (1,), (1, 0), 0)
    assert len(s.terms) == 1 and leading_term_ok(s)

    ext = extend(C2MU3, nonzero_box(C2MU3))
    s = iseries(C2MU3, ext, (0, 1), (0, 0), 3)
    assert all(not any(k[1]) for k in s.keys())
    assert any(any(k[2]) for k in s.keys())


def test_render_format():
    s = iseries(P1, extend(P1, []), (0,), (1, 0), 1)
    assert s.render() == ["I[0][b=(0)] Q^(0,0) x^() : 1 * (z)",
                          "I[0][b=(0)] Q^(1,1) x^() : 1 * (x1 + z)^-1"]


def test_jfun_bg_examples():
    G = FgAbelianGroup(0, (2,))
    j = jfun_bg(G, [(1,)], 2, dim=1)
    z = ((0, 1),)
    assert j[((0,), (0,))] == normalize(1, -1, [(z[0], 1)])
    assert j[((1,), (1,))] == normalize(1, 1, [])
    assert j[((0,), (2,))] == normalize(1, F(-1, 2), [(z[0], -1)])


def test_restriction_form_examples():
    for fan in (P1, P12):
        ext = extend(fan, nonzero_box(fan))
        for cone in fan.top_cones:
            a = iseries(fan, ext, cone, (1, 0), 3)
            b = iseries_restriction_form(fan, ext, cone, (1, 0), 3)
            assert {k: v[1] for k, v in a.terms.items()} == {k: v[1] for k, v in b.terms.items()}
    s = iseries_restriction_form(P12, extend(P12, []), (1,), (1, 0), 1)
    assert (P12.N.reduce((-1,)), (1, F(1, 2)), ()) in s.terms


def test_parallel_matches_serial():
    fan = football(2, 3)
    ext = extend(fan, nonzero_box(fan))
    a = iseries(fan, ext, (0,), (1, 0), 3)
    b = iseries(fan, ext, (0,), (1, 0), 3, jobs=3)
    assert a.render() == b.render()


FANS = st.one_of(
    st.lists(st.integers(1, 3), min_size=2, max_size=3).map(lambda w: weighted_projective(*w)),
    st.tuples(st.integers(1, 4), st.integers(1, 4)).map(lambda r: football(*r)),
    st.just(product(P1, P12)),
)


def omega_for(fan):
    return (1, 0, 1, 0) if fan.n == 4 and fan.dim == 2 else (1,) + (0,) * (fan.n - 1)


@settings(max_examples=15, deadline=None)
@given(FANS, st.booleans())
def test_icoeff_against_product_oracle(fan, extended):
    ext = extend(fan, nonzero_box(fan) if extended else [])
    for cone in fan.top_cones:
        for deg in enumerate_cone(ext, cone, omega_for(fan), 2):
            e = icoeff(fan, ext, cone, deg.lam)
            want, xs = oracle(fan, ext, cone, deg.lam)
            assert sympy.cancel(to_sympy(e, xs) - want) == 0
            # homogeneity: total degree in (x, z) is 1 - sum of ceilings
            if not e.is_zero:
                assert e.degree() == 1 - sum(-((-x).__floor__()) for x in deg.lam)


@settings(max_examples=15, deadline=None)
@given(FANS, st.booleans())
def test_restriction_identity(fan, extended):
    ext = extend(fan, nonzero_box(fan) if extended else [])
    for cone in fan.top_cones:
        a = iseries(fan, ext, cone, omega_for(fan), 2)
        b = iseries_restriction_form(fan, ext, cone, omega_for(fan), 2)
        assert {k: v[1] for k, v in a.terms.items()} == {k: v[1] for k, v in b.terms.items()}
        assert leading_term_ok(a)


def test_restriction_perturbed_differs():
    ext = extend(P12, [])
    a = iseries(P12, ext, (1,), (1, 0), 3)

    def flip(table):
        return {k: -v for k, v in table.items()}

    try:
        b = iseries_restriction_form(P12, ext, (1,), (1, 0), 3, perturb=flip)
        differs = {k: v[1] for k, v in a.terms.items()} != {k: v[1] for k, v in b.terms.items()}
    except (KeyError, AssertionError, ValueError):
        differs = True
    assert differs


def test_evaluate_matches_oracle_point():
    ext = extend(P1, [])
    e = icoeff(P1, ext, (0,), (3, 3))
    want, (x1,) = oracle(P1, ext, (0,), (3, 3))
    assert evaluate(e, (F(5), F(2))) == F(str(want.subs({x1: 5, Z: 2})))
