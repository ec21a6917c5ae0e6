"""Products of linear forms with a rational scalar in front.

Every coefficient the engine produces is of the shape

    scalar * prod_k L_k ** e_k

where each ``L_k`` is a homogeneous linear form in the equivariant
variables x1..xd and the formal variable z.  Keeping this factored shape
(and never adding two expressions) makes all arithmetic exact and cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class LinFormError(ValueError):
    pass


class ZeroFactor(LinFormError):
    pass


class DivisionByZeroExpr(LinFormError):
    pass


class PoleHit(LinFormError):
    pass


class NotSimplePole(LinFormError):
    pass


class EvalPole(LinFormError):
    pass


@dataclass(frozen=True, order=True)
class LinForm:
    """Primitive integer coefficients over (x1..xd, z), z last.

    Instances are always canonical: coprime entries with the first nonzero
    entry positive.  Use :func:`canonical_form` to build one from arbitrary
    rational coefficients.
    """

    coeffs: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.coeffs) - 1

    @property
    def z(self) -> int:
        return self.coeffs[-1]

    @property
    def chi(self) -> tuple[int, ...]:
        return self.coeffs[:-1]

    def sort_key(self):
        return (self.z, self.chi)

    def involves_z(self) -> bool:
        return self.z != 0

    def is_pure_z(self) -> bool:
        return self.z != 0 and not any(self.chi)

    def value(self, point: Sequence) -> Fraction:
        return sum((Fraction(c) * p for c, p in zip(self.coeffs, point)), Fraction(0))

    def render(self, names: Sequence[str]) -> str:
        terms = []
        for c, name in zip(self.coeffs, names):
            if c == 0:
                continue
            mag = abs(c)
            body = name if mag == 1 else f"{mag}*{name}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(terms)


def canonical_form(coeffs: Sequence) -> tuple[Fraction, LinForm]:
    """Split rational coefficients into ``scale * LinForm``."""
    fr = [Fraction(c) for c in coeffs]
    lead = next((c for c in fr if c != 0), None)
    if lead is None:
        raise ZeroFactor("zero linear form")
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if lead < 0:
        g = -g
    ints = [x // g for x in ints]
    return Fraction(g, den), LinForm(tuple(ints))


def variable_names(dim: int) -> list[str]:
    return [f"x{i + 1}" for i in range(dim)] + ["z"]


@dataclass(frozen=True)
class FactoredExpr:
    """``scalar * prod(form ** exp)``; the zero expression has scalar 0 and no factors."""

    dim: int
    scalar: Fraction
    factors: tuple[tuple[LinForm, int], ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.scalar == 0

    def degree(self) -> int:
        """Total degree in (x, z); meaningless for the zero expression."""
        return sum(e for _, e in self.factors)

    def exponent(self, form: LinForm) -> int:
        for f, e in self.factors:
            if f == form:
                return e
        return 0

    def numerator(self) -> list[tuple[LinForm, int]]:
        return [(f, e) for f, e in self.factors if e > 0]

    def denominator(self) -> list[tuple[LinForm, int]]:
        return [(f, -e) for f, e in self.factors if e < 0]

    def __mul__(self, other: "FactoredExpr") -> "FactoredExpr":
        return mul(self, other)

    def __truediv__(self, other: "FactoredExpr") -> "FactoredExpr":
        return div(self, other)

    def __neg__(self) -> "FactoredExpr":
        return FactoredExpr(self.dim, -self.scalar, self.factors)

    def render(self, names: Sequence[str] | None = None) -> str:
        if self.is_zero:
            return "0"
        names = names or variable_names(self.dim)
        parts = [str(self.scalar)]
        for f, e in self.factors:
            txt = f"({f.render(names)})"
            parts.append(txt if e == 1 else f"{txt}^{e}")
        return " * ".join(parts)

    def __str__(self) -> str:
        return self.render()


def zero(dim: int) -> FactoredExpr:
    return FactoredExpr(dim, Fraction(0))


def constant(dim: int, value) -> FactoredExpr:
    return FactoredExpr(dim, Fraction(value))


def normalize(dim: int, scalar, factors: Iterable[tuple[Sequence, int]]) -> FactoredExpr:
    """Canonical expression from a raw scalar and raw ``(coeffs, exponent)`` pairs."""
    scalar = Fraction(scalar)
    acc: dict[LinForm, int] = {}
    for coeffs, e in factors:
        if len(coeffs) != dim + 1:
            raise LinFormError(f"form {tuple(coeffs)} does not have {dim + 1} coefficients")
        s, f = canonical_form(coeffs)
        if e:
            scalar *= s ** e
            acc[f] = acc.get(f, 0) + e
    if scalar == 0:
        return zero(dim)
    items = sorted(((f, e) for f, e in acc.items() if e), key=lambda t: t[0].sort_key())
    return FactoredExpr(dim, scalar, tuple(items))


def factor(coeffs: Sequence, exponent: int = 1) -> FactoredExpr:
    """A single linear form raised to ``exponent``."""
    return normalize(len(coeffs) - 1, 1, [(coeffs, exponent)])


def z_power(dim: int, k: int) -> FactoredExpr:
    return normalize(dim, 1, [((0,) * dim + (1,), k)])


def _merge(a: FactoredExpr, b: FactoredExpr, sign: int) -> FactoredExpr:
    if a.dim != b.dim:
        raise LinFormError("dimension mismatch")
    acc = dict(a.factors)
    for f, e in b.factors:
        acc[f] = acc.get(f, 0) + sign * e
    scalar = a.scalar * b.scalar if sign > 0 else a.scalar / b.scalar
    items = sorted(((f, e) for f, e in acc.items() if e), key=lambda t: t[0].sort_key())
    return FactoredExpr(a.dim, scalar, tuple(items))


def mul(a: FactoredExpr, b: FactoredExpr) -> FactoredExpr:
    if a.is_zero or b.is_zero:
        return zero(a.dim)
    return _merge(a, b, 1)


def div(a: FactoredExpr, b: FactoredExpr) -> FactoredExpr:
    if b.is_zero:
        raise DivisionByZeroExpr("division by the zero expression")
    if a.is_zero:
        return zero(a.dim)
    return _merge(a, b, -1)


def power(a: FactoredExpr, k: int) -> FactoredExpr:
    if a.is_zero:
        if k <= 0:
            raise DivisionByZeroExpr("non-positive power of zero")
        return a
    return FactoredExpr(a.dim, a.scalar ** k,
                        tuple((f, e * k) for f, e in a.factors) if k else ())


def product_of(dim: int, exprs: Iterable[FactoredExpr]) -> FactoredExpr:
    out = constant(dim, 1)
    for e in exprs:
        out = mul(out, e)
    return out


def scale(a: FactoredExpr, q) -> FactoredExpr:
    q = Fraction(q)
    if q == 0 or a.is_zero:
        return zero(a.dim)
    return FactoredExpr(a.dim, a.scalar * q, a.factors)


def substitute_z(e: FactoredExpr, target: Sequence) -> FactoredExpr:
    """Replace z by the x-linear form ``target`` (length dim rationals)."""
    if e.is_zero:
        return e
    target = [Fraction(t) for t in target]
    if len(target) != e.dim:
        raise LinFormError("substitution target has wrong length")
    raw = []
    for f, k in e.factors:
        new = [Fraction(c) + f.z * t for c, t in zip(f.chi, target)] + [Fraction(0)]
        if not any(new):
            if k < 0:
                raise PoleHit(f"factor ({f.render(variable_names(e.dim))}) vanishes in a denominator")
            return zero(e.dim)
        raw.append((new, k))
    return normalize(e.dim, e.scalar, raw)


def residue_at(e: FactoredExpr, pole: Sequence | LinForm) -> FactoredExpr:
    """Residue in z at the root of the linear form ``pole`` (which must involve z).

    The pole must occur with multiplicity at most one; if it does not occur
    in the denominator the residue is zero.
    """
    coeffs = pole.coeffs if isinstance(pole, LinForm) else pole
    _, p = canonical_form(coeffs)
    if p.z == 0:
        raise LinFormError("pole form does not involve z")
    if e.is_zero:
        return e
    k = e.exponent(p)
    if k <= -2:
        raise NotSimplePole(f"pole of order {-k}")
    if k >= 0:
        return zero(e.dim)
    rest = FactoredExpr(e.dim, e.scalar / p.z,
                        tuple((f, x) for f, x in e.factors if f != p))
    root = [Fraction(-c, p.z) for c in p.chi]
    return substitute_z(rest, root)


def evaluate(e: FactoredExpr, point: Sequence) -> Fraction:
    """Exact value at ``point`` = (x1..xd, z)."""
    if e.is_zero:
        return Fraction(0)
    out = Fraction(e.scalar)
    for f, k in e.factors:
        v = f.value(point)
        if v == 0:
            if k < 0:
                raise EvalPole(f"denominator vanishes at {tuple(point)}")
            return Fraction(0)
        out *= v ** k
    return out


@dataclass(frozen=True)
class Pole:
    form: LinForm
    order: int
    at_zero: bool


def classify_poles(e: FactoredExpr) -> list[Pole]:
    """Denominator factors involving z; a pure power of z is flagged ``at_zero``."""
    return [Pole(f, -k, f.is_pure_z()) for f, k in e.factors if k < 0 and f.involves_z()]


def flip_z(e: FactoredExpr) -> FactoredExpr:
    """The expression with z replaced by -z."""
    if e.is_zero:
        return e
    return normalize(e.dim, e.scalar, [(f.chi + (-f.z,), k) for f, k in e.factors])


def chi_form(weights: Sequence, zcoef=0) -> tuple[Fraction, ...]:
    """Coefficient vector of ``u + zcoef * z`` for an x-linear form ``u``."""
    return tuple(Fraction(w) for w in weights) + (Fraction(zcoef),)
