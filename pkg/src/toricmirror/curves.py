"""Torus-invariant orbifold curves joining adjacent fixed points.

A wall ``sigma | sigma'`` together with a box element ``b`` of ``sigma`` and
a rational ``c > 0`` with ``<c> = b^_j`` determines a representable map from
a football.  This module computes its degree ``l(c)``, the box element
``b'`` it picks up at the far end, and the associated integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Sequence

from .stackyfan import (
    AdjacentPair,
    BoxElement,
    Cone,
    StackyFan,
    box,
    box_element_of,
    box_involution,
    fixed_point_weights,
    pair_weight,
)


class CurveError(ValueError):
    pass


class FractionalPartMismatch(CurveError):
    pass


class NotAdmissible(CurveError):
    pass


def frac(x: Fraction) -> Fraction:
    return x - floor(x)


@dataclass(frozen=True)
class WallCurve:
    pair: AdjacentPair
    c: Fraction
    c_prime: Fraction
    c_wall: tuple[tuple[int, Fraction], ...]  # (i, c_i) for i on the shared wall
    degree: tuple[Fraction, ...]  # l(c, sigma, j) in Q^n
    b: BoxElement
    b_prime: BoxElement
    q_prime: int
    r1: int
    r2: int

    @property
    def sigma(self) -> Cone:
        return self.pair.sigma

    @property
    def sigma_prime(self) -> Cone:
        return self.pair.sigma_prime

    @property
    def j(self) -> int:
        return self.pair.j

    @property
    def j_prime(self) -> int:
        return self.pair.j_prime


def unit_degree(fan: StackyFan, pair: AdjacentPair) -> tuple[Fraction, ...]:
    """``l(1, sigma, j)``; every curve degree on this wall is a positive multiple."""
    ws = fixed_point_weights(fan, pair.sigma_prime)
    rj = fan.rays_bar[pair.j]
    deg = [Fraction(0)] * fan.n
    deg[pair.j] = Fraction(1)
    for i in pair.sigma_prime:
        deg[i] = -pair_weight(ws[i], rj)
    return tuple(deg)


@lru_cache(maxsize=None)
def _box_with_faces(fan: StackyFan, cone: Cone) -> tuple[BoxElement, ...]:
    return tuple(box(fan, cone, include_faces=True))


@lru_cache(maxsize=None)
def _wall_quotient(fan: StackyFan, wall: Cone):
    return fan.cone_quotient(wall)


def _order_in(fan: StackyFan, cone: Cone, v) -> int:
    quo = _wall_quotient(fan, cone)
    o = quo.group.element_order(quo.projection(v))
    if o is None:
        raise CurveError(f"{v} has infinite order modulo cone {list(cone)}")
    return o


def transport_box(fan: StackyFan, pair: AdjacentPair, b_hat: BoxElement, c: Fraction
                  ) -> tuple[BoxElement, int]:
    """The unique ``(b', q')`` with ``b^ + floor(c) rho_j + q' rho_j' + b' = 0`` mod the wall."""
    wall = pair.wall
    quo = _wall_quotient(fan, wall)
    G = quo.group
    if G.rank != 1:
        raise CurveError(f"wall {list(wall)} does not have a rank one quotient")
    fl = floor(c)
    base = [x + fl * y for x, y in zip(b_hat.element, fan.rays[pair.j])]
    step = quo.projection(fan.rays[pair.j_prime])
    found = []
    for cand in _box_with_faces(fan, pair.sigma_prime):
        x = quo.projection([p + q for p, q in zip(base, cand.element)])
        q = Fraction(-x[0], step[0])
        if q.denominator != 1 or q < 0:
            continue
        q = int(q)
        if G.add(x, G.scale(q, step)) == G.zero():
            found.append((cand, q))
    if len(found) != 1:
        raise CurveError(f"expected a unique transported box element, found {len(found)}")
    return found[0]


def curve_from_c(fan: StackyFan, pair: AdjacentPair, b: BoxElement, c) -> WallCurve:
    c = Fraction(c)
    if c <= 0:
        raise FractionalPartMismatch(f"c = {c} must be positive")
    b_hat = box_involution(fan, b)
    if frac(c) != b_hat.fracs[pair.j]:
        raise FractionalPartMismatch(
            f"<{c}> does not match the involution coordinate {b_hat.fracs[pair.j]} at ray {pair.j}")
    unit = unit_degree(fan, pair)
    degree = tuple(c * x for x in unit)
    c_prime = degree[pair.j_prime]
    c_wall = tuple((i, degree[i]) for i in pair.wall)

    # the relation c rho_j + c' rho_j' + sum c_i rho_i = 0 holds in N tensor Q
    for k in range(fan.dim):
        assert sum(degree[i] * fan.rays_bar[i][k] for i in range(fan.n)) == 0

    b_prime, q_prime = transport_box(fan, pair, b_hat, c)
    if q_prime != floor(c_prime) or frac(c_prime) != b_prime.fracs[pair.j_prime]:
        raise CurveError(f"transport inconsistent: q'={q_prime}, c'={c_prime}")
    r1 = _order_in(fan, pair.sigma, b_hat.element)
    r2 = _order_in(fan, pair.sigma_prime, b_prime.element)
    return WallCurve(pair, c, c_prime, c_wall, degree, b, b_prime, q_prime, r1, r2)


def admissible_c(fan: StackyFan, pair: AdjacentPair, b: BoxElement, omega: Sequence, cutoff):
    """Values ``c > 0`` with ``<c> = b^_j`` and ``omega . l(c) <= cutoff``, increasing."""
    cutoff = Fraction(cutoff)
    b_hat = box_involution(fan, b)
    per_unit = pair_weight(omega, unit_degree(fan, pair))
    if per_unit <= 0:
        raise CurveError("Kahler class is not positive on the wall curve")
    c = b_hat.fracs[pair.j]
    if c == 0:
        c = Fraction(1)
    out = []
    while c * per_unit <= cutoff:
        out.append(c)
        c += 1
    return out


def enumerate_wall_degrees(fan: StackyFan, pair: AdjacentPair, b: BoxElement,
                           b_prime: BoxElement | None, omega: Sequence, cutoff) -> list[WallCurve]:
    """Curves on the wall starting at ``b``, of degree at most ``cutoff``, ending at ``b_prime``.

    With ``b_prime=None`` every target is kept.
    """
    out = []
    for c in admissible_c(fan, pair, b, omega, cutoff):
        curve = curve_from_c(fan, pair, b, c)
        if b_prime is None or curve.b_prime == b_prime:
            out.append(curve)
    return out


# ---------------------------------------------------------------------------
# one-dimensional targets


@dataclass(frozen=True)
class OneDimData:
    r1: int
    r2: int
    q1: int
    q2: int
    f1: Fraction
    f2: Fraction
    b2: BoxElement


def classify_1d(fan: StackyFan, b1: BoxElement, l, first: int = 0) -> OneDimData:
    """Data of the map from a football onto a complete one-dimensional stack.

    ``first`` is the index of the ray whose fixed point is the image of 0.
    The relations are symmetric under reversing the orientation of N, so
    either ray may be chosen.
    """
    if fan.dim != 1 or fan.n != 2 or len(fan.top_cones) != 2:
        raise NotAdmissible("classify_1d needs a complete one-dimensional fan with two rays")
    second = 1 - first
    l = Fraction(l)
    if l <= 0:
        raise NotAdmissible("l must be positive")
    (k,) = fan.kernel
    if k[0] < 0:
        k = tuple(-x for x in k)
    if k[0] <= 0 or k[1] <= 0:
        raise NotAdmissible("rays do not point in opposite directions")
    w2, w1 = k[first], k[second]
    if not set(b1.cone) <= {first}:
        raise NotAdmissible("b1 is not a box element of the first cone")
    f1 = b1.fracs[first]
    t = w2 * l - f1
    if t.denominator != 1 or t < 0:
        raise NotAdmissible(f"w2*l - f1 = {t} is not a nonnegative integer")
    q1, q2 = floor(l * w2), floor(l * w1)
    f2 = frac(l * w1)
    rho1, rho2 = fan.rays[first], fan.rays[second]
    v = [-(q1 * a + q2 * b + c) for a, b, c in zip(rho1, rho2, b1.element)]
    b2 = box_element_of(fan, v, (second,))
    if b2.element != fan.N.reduce(v) or b2.fracs[second] != f2:
        raise CurveError("second box element inconsistent with the relation")
    r1 = _order_in(fan, (first,), b1.element)
    r2 = _order_in(fan, (second,), b2.element)
    return OneDimData(r1, r2, q1, q2, f1, f2, b2)
