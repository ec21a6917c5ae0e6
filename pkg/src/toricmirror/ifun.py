"""The S-extended equivariant I-function restricted to torus fixed points (at t = 0)."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, factorial, floor
from typing import Callable, Sequence

from .exactlin import FgAbelianGroup, enumerate_lattice_points
from .extension import (
    ExtDegree,
    ExtendedData,
    coefficient_matrix,
    enumerate_cone,
    lambda_from_free,
    omega_degree,
    split,
)
from .linform import (
    FactoredExpr,
    chi_form,
    flip_z,
    normalize,
    zero,
)
from .stackyfan import BoxElement, Cone, StackyFan, WeightSystem, box, fixed_point_weights

Key = tuple  # (box element coordinates, d_part, k_part)


def _frac(x: Fraction) -> Fraction:
    return x - floor(x)


def _a_range(lam: Fraction) -> tuple[list[Fraction], int]:
    """Values ``a`` with ``<a> = <lam>`` strictly between 0 and lam (inclusive at lam / 0).

    Returns the values and the side they belong to: -1 (denominator) for
    ``a in (0, lam]``, +1 (numerator) for ``a in (lam, 0]``.
    """
    if lam > 0:
        vals, a = [], lam
        while a > 0:
            vals.append(a)
            a -= 1
        return vals, -1
    vals, a = [], lam + 1
    while a <= 0:
        vals.append(a)
        a += 1
    return vals, 1


def icoeff(fan: StackyFan, ext: ExtendedData, cone: Cone, lam: Sequence,
           weights: WeightSystem | None = None) -> FactoredExpr:
    """Coefficient of the I-function at the fixed point of ``cone`` for the degree ``lam``."""
    ws = weights or fixed_point_weights(fan, cone)
    dim = fan.dim
    lam = [Fraction(x) for x in lam]
    raw = [((0,) * dim + (1,), 1)]
    scalar = Fraction(1)
    expected = 1
    for i, li in enumerate(lam):
        expected -= ceil(li)
        if i in cone:
            continue
        if li.denominator != 1:
            raise ValueError(f"coordinate {i} off the cone is not integral")
        if li < 0:
            return zero(dim)
        scalar /= factorial(int(li))
        if li:
            raw.append(((0,) * dim + (1,), -int(li)))
    for i in cone:
        vals, side = _a_range(lam[i])
        for a in vals:
            raw.append((chi_form(ws[i], a), side))
    e = normalize(dim, scalar, raw)
    if e.degree() != expected:
        raise AssertionError(f"coefficient at {lam} has degree {e.degree()}, expected {expected}")
    return e


@dataclass
class ISeries:
    fan: StackyFan
    ext: ExtendedData
    cone: Cone
    omega: tuple
    cutoff: Fraction
    terms: dict = field(default_factory=dict)  # Key -> (ExtDegree, FactoredExpr)

    def coefficient(self, key: Key) -> FactoredExpr:
        t = self.terms.get(key)
        return t[1] if t else zero(self.fan.dim)

    def keys(self, label: BoxElement | None = None) -> list[Key]:
        ks = [k for k in self.terms if label is None or k[0] == label.element]
        return sorted(ks, key=self.sort_key)

    def sort_key(self, key: Key):
        deg = self.terms[key][0]
        return (deg.omega_degree, key)

    def render(self) -> list[str]:
        out = []
        sig = ",".join(str(i) for i in self.cone)
        for key in self.keys():
            deg, e = self.terms[key]
            b = ",".join(str(x) for x in key[0])
            d = ",".join(str(x) for x in key[1])
            k = ",".join(str(x) for x in key[2])
            out.append(f"I[{sig}][b=({b})] Q^({d}) x^({k}) : {e.render()}")
        return out


def degree_key(deg: ExtDegree) -> Key:
    return (deg.box.element, deg.d_part, deg.k_part)


def _coeff_chunk(args):
    fan, ext, cone, lams = args
    ws = fixed_point_weights(fan, cone)
    return [icoeff(fan, ext, cone, lam, ws) for lam in lams]


def _chunks(items: list, k: int) -> list[list]:
    size = max(1, -(-len(items) // k))
    return [items[i:i + size] for i in range(0, len(items), size)]


def iseries(fan: StackyFan, ext: ExtendedData, cone: Sequence[int], omega: Sequence, cutoff,
            jobs: int = 1) -> ISeries:
    cone = tuple(sorted(cone))
    degrees = enumerate_cone(ext, cone, omega, cutoff)
    if jobs > 1 and len(degrees) > 1:
        parts = _chunks([d.lam for d in degrees], jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            coeffs = [c for chunk in pool.map(_coeff_chunk, [(fan, ext, cone, p) for p in parts])
                      for c in chunk]
    else:
        coeffs = _coeff_chunk((fan, ext, cone, [d.lam for d in degrees]))
    series = ISeries(fan, ext, cone, tuple(Fraction(w) for w in omega), Fraction(cutoff))
    for deg, e in zip(degrees, coeffs):
        key = degree_key(deg)
        if key in series.terms:
            raise AssertionError(f"two degrees share the key {key}")
        if not e.is_zero:
            series.terms[key] = (deg, e)
    return series


# ---------------------------------------------------------------------------
# the fixed-point (restriction) form


def jfun_bg(G: FgAbelianGroup, gens: Sequence[Sequence[int]], cutoff,
            weights: Sequence | None = None, dim: int = 0) -> dict:
    """J-function of BG for a finite group G, in the ``-z`` convention.

    Returns ``{(label, lam): coefficient}`` over ``lam`` in Z_{>=0}^len(gens)
    with ``sum weights_i lam_i <= cutoff`` (unit weights by default); the
    coefficient is ``-z * prod 1/(lam_i! (-z)^lam_i)`` and the label is
    ``sum lam_i gens_i`` in G.
    """
    if not G.is_finite:
        raise ValueError("jfun_bg needs a finite group")
    ell = len(gens)
    weights = [Fraction(1)] * ell if weights is None else [Fraction(w) for w in weights]
    cons = [(tuple(int(k == t) for k in range(ell)), 0) for t in range(ell)]
    cons.append((tuple(-w for w in weights), Fraction(cutoff)))
    out = {}
    for lam in enumerate_lattice_points(cons, ell):
        label = G.zero()
        for x, g in zip(lam, gens):
            label = G.add(label, G.scale(x, g))
        scalar = Fraction(-1)
        total = 0
        for x in lam:
            scalar /= factorial(x)
            total += x
        scalar *= (-1) ** total
        e = normalize(dim, scalar, [((0,) * dim + (1,), 1 - total)])
        out[(label, tuple(lam))] = e
    return out


@dataclass
class RestrictionTerm:
    free: tuple  # (lam_i : i off the cone)
    lam: tuple
    label: tuple  # element of N(sigma)
    minus_z: FactoredExpr  # summand in the I(-z) convention


def restriction_terms(fan: StackyFan, ext: ExtendedData, cone: Cone, omega: Sequence, cutoff,
                      perturb: Callable[[dict], dict] | None = None) -> list[RestrictionTerm]:
    """Summands of the fixed-point form, one per ``(lam_i)_{i off cone}`` in Z_{>=0}^l.

    The coordinates on the cone come from ``lam_j = -sum_i a_{ij} lam_i`` and
    the box label is ``sum_i lam_i b^i`` computed in ``N(sigma)``.
    ``perturb`` may replace the ``a_{ij}`` table (used by negative controls).
    """
    cone = tuple(sorted(cone))
    off = [i for i in range(ext.size) if i not in cone]
    a = coefficient_matrix(ext, cone)
    if perturb is not None:
        a = perturb(dict(a))
    ws = fixed_point_weights(fan, cone)
    quo = fan.cone_quotient(cone)
    G = quo.group
    gens = [quo.projection(ext.ray(i)) for i in off]
    honest = coefficient_matrix(ext, cone)
    unit = [omega_degree(ext, omega, lambda_from_free(ext, cone, {i: 1}, honest)) for i in off]
    cons = [(tuple(int(k == t) for k in range(len(off))), 0) for t in range(len(off))]
    cons.append((tuple(-w for w in unit), Fraction(cutoff)))
    dim = fan.dim
    out = []
    for pt in enumerate_lattice_points(cons, len(off)):
        free = dict(zip(off, pt))
        lam = lambda_from_free(ext, cone, free, a)
        label = G.zero()
        for x, g in zip(pt, gens):
            label = G.add(label, G.scale(x, g))
        scalar = Fraction(-1)
        raw = [((0,) * dim + (1,), 1)]
        for x in pt:
            scalar /= factorial(x)
            if x:
                raw.append(((0,) * dim + (-1,), -x))
        for j in cone:
            vals, side = _a_range(lam[j])
            for av in vals:
                raw.append((chi_form(ws[j], -av), side))
        out.append(RestrictionTerm(tuple(pt), lam, label, normalize(dim, scalar, raw)))
    return out


def iseries_restriction_form(fan: StackyFan, ext: ExtendedData, cone: Sequence[int], omega: Sequence,
                             cutoff, perturb: Callable[[dict], dict] | None = None) -> ISeries:
    """The same series as :func:`iseries`, built from the fixed-point parameterization."""
    cone = tuple(sorted(cone))
    quo = fan.cone_quotient(cone)
    by_label = {quo.projection(b.element): b for b in box(fan, cone, include_faces=True)}
    series = ISeries(fan, ext, cone, tuple(Fraction(w) for w in omega), Fraction(cutoff))
    for term in restriction_terms(fan, ext, cone, omega, cutoff, perturb):
        e = flip_z(term.minus_z)
        if e.is_zero:
            continue
        b = by_label[term.label]
        d, k = split(ext, term.lam)
        deg = ExtDegree(term.lam, d, k, b, omega_degree(ext, omega, term.lam))
        key = (b.element, d, k)
        if key in series.terms:
            raise AssertionError(f"two degrees share the key {key}")
        series.terms[key] = (deg, e)
    return series


def leading_term_ok(series: ISeries) -> bool:
    dim = series.fan.dim
    zero_key = (series.fan.N.zero(), (Fraction(0),) * series.ext.n, (0,) * series.ext.m)
    return series.coefficient(zero_key) == normalize(dim, 1, [((0,) * dim + (1,), 1)])


__all__ = [
    "ISeries", "RestrictionTerm", "degree_key", "icoeff", "iseries", "iseries_restriction_form",
    "jfun_bg", "leading_term_ok", "restriction_terms",
]
