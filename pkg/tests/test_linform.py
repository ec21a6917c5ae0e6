from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from toricmirror.linform import (
    EvalPole,
    NotSimplePole,
    PoleHit,
    ZeroFactor,
    classify_poles,
    constant,
    div,
    evaluate,
    factor,
    mul,
    normalize,
    residue_at,
    substitute_z,
    z_power,
)

X_Z = (1, 1)  # x + z
X = (1, 0)
Z = (0, 1)


def test_normalize_examples():
    e = normalize(1, 2, [((2, 2), 1)])
    assert e.scalar == 4 and e.factors == factor(X_Z).factors
    e = normalize(1, 1, [(X_Z, 1), (X_Z, -1)])
    assert e.scalar == 1 and e.factors == ()
    e = normalize(1, 1, [((-1, -1), 1)])
    assert e.scalar == -1 and e.factors[0][0].coeffs == (1, 1)
    with pytest.raises(ZeroFactor):
        normalize(1, 1, [((0, 0), 1)])


def test_normalize_idempotent():
    e = normalize(2, Fraction(3, 4), [((2, -4, 6), 2), ((0, 0, -3), -1)])
    again = normalize(2, e.scalar, [(f.coeffs, k) for f, k in e.factors])
    assert again == e


def test_mul_div_examples():
    x = factor(X)
    assert mul(x, div(constant(1, 1), x)) == constant(1, 1)
    assert div(mul(x, factor(X_Z)), x) == factor(X_Z)
    e = mul(factor((2, 0)), factor((0, 3)))
    assert e.scalar == 6 and [f.coeffs for f, _ in e.factors] == [(1, 0), (0, 1)]


def test_substitute_examples():
    with pytest.raises(PoleHit):
        substitute_z(factor(X_Z, -1), [-1])
    assert substitute_z(factor(X_Z), [-1]).is_zero
    e = substitute_z(factor((1, 2)), [-1])
    assert e.scalar == -1 and e.factors[0][0].coeffs == (1, 0)
    e = substitute_z(factor(X_Z, -1), [Fraction(-1, 2)])
    assert e == normalize(1, 2, [(X, -1)])


def test_residue_examples():
    assert residue_at(factor(X_Z, -1), X_Z) == constant(1, 1)
    e = normalize(1, 1, [(Z, -1), (X_Z, -1)])
    assert residue_at(e, X_Z) == normalize(1, -1, [(X, -1)])
    with pytest.raises(NotSimplePole):
        residue_at(factor(X_Z, -2), X_Z)
    assert residue_at(factor(X, -1), X_Z).is_zero


def test_eval_examples():
    assert evaluate(factor(X_Z), (1, 2)) == 3
    assert evaluate(normalize(1, 2, [(X, -2)]), (Fraction(1, 2), 0)) == 8
    with pytest.raises(EvalPole):
        evaluate(factor(X, -1), (0, 1))


def test_classify_poles():
    e = normalize(1, 1, [(Z, -1), (X_Z, -1)])
    poles = classify_poles(e)
    assert [(p.form.coeffs, p.order, p.at_zero) for p in poles] == [((0, 1), 1, True), ((1, 1), 1, False)]
    assert classify_poles(mul(factor(X), factor(X_Z))) == []
    assert classify_poles(factor(X_Z, -2))[0].order == 2


def test_render():
    e = normalize(2, Fraction(-1, 2), [((1, -1, 2), -2), ((0, 0, 1), 1)])
    assert e.render() == "-1/2 * (z) * (x1 - x2 + 2*z)^-2"
    assert constant(1, 0).render() == "0"


forms = st.lists(st.integers(-3, 3), min_size=3, max_size=3).filter(any)
exprs = st.tuples(
    st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool),
    st.lists(st.tuples(forms, st.integers(-2, 2)), max_size=4),
)


def _build(raw):
    s, fs = raw
    return normalize(2, s, fs)


def _points(seed, n=10):
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3)) for _ in range(n)]


def _safe_eval(e, p):
    try:
        return evaluate(e, p)
    except EvalPole:
        return None


@settings(max_examples=80, deadline=None)
@given(exprs, exprs)
def test_mul_is_homomorphic_under_eval(a, b):
    ea, eb = _build(a), _build(b)
    for p in _points(1):
        va, vb, vab = _safe_eval(ea, p), _safe_eval(eb, p), _safe_eval(mul(ea, eb), p)
        if va is not None and vb is not None and vab is not None:
            assert vab == va * vb


@settings(max_examples=80, deadline=None)
@given(exprs)
def test_normalize_preserves_value(a):
    s, fs = a
    e = normalize(2, s, fs)
    for p in _points(2):
        raw = Fraction(s)
        ok = True
        for coeffs, k in fs:
            v = sum(Fraction(c) * x for c, x in zip(coeffs, p))
            if v == 0:
                ok = False
                break
            raw *= v ** k
        if ok:
            assert evaluate(e, p) == raw


@settings(max_examples=60, deadline=None)
@given(exprs, st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.integers(1, 4))
def test_residue_matches_sympy(a, u, c):
    x1, x2, z = sympy.symbols("x1 x2 z")
    pole = (u[0], u[1], c)
    base = _build(a)
    e = div(base, factor(pole))
    if any(p.form == residue_pole(pole) and p.order > 1 for p in classify_poles(e)):
        return
    res = residue_at(e, pole)
    sym = sympy.Rational(e.scalar)
    for f, k in e.factors:
        sym *= (f.coeffs[0] * x1 + f.coeffs[1] * x2 + f.coeffs[2] * z) ** k
    root = -(u[0] * x1 + u[1] * x2) / sympy.Integer(c)
    lin = z - root
    oracle = sympy.cancel(sympy.together(sym * lin)).subs(z, root)
    rng = random.Random(3)
    for _ in range(10):
        pt = {x1: sympy.Rational(rng.randint(-40, 40), rng.randint(1, 7)),
              x2: sympy.Rational(rng.randint(-40, 40), rng.randint(1, 7))}
        try:
            want = oracle.subs(pt)
        except ZeroDivisionError:
            continue
        if want.has(sympy.zoo, sympy.nan):
            continue
        got = _safe_eval(res, (Fraction(str(pt[x1])), Fraction(str(pt[x2])), Fraction(0)))
        if got is not None:
            assert Fraction(str(want)) == got


def residue_pole(pole):
    return factor(pole).factors[0][0]


def test_zpower():
    assert z_power(1, 2).factors[0][1] == 2
