"""Extended degrees: the splitting of L^S, the reduction function and degree enumeration."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Sequence

from .exactlin import enumerate_lattice_points
from .stackyfan import (
    BoxElement,
    Cone,
    StackyFan,
    box_element_of,
    check_kahler,
    fixed_point_weights,
    pair_weight,
)


class ExtensionError(ValueError):
    pass


class OutsideSupport(ExtensionError):
    def __init__(self, j: int, element):
        super().__init__(f"extension element {j} = {tuple(element)} lies outside the support of the fan")
        self.j = j


class NotInLambdaS(ExtensionError):
    pass


class InvalidKahler(ExtensionError):
    pass


class IncompatibleBoxData(ExtensionError):
    pass


def frac(x: Fraction) -> Fraction:
    return x - floor(x)


@dataclass(frozen=True)
class ExtensionVector:
    element: tuple[int, ...]
    cone: Cone
    coeffs: tuple[Fraction, ...]  # s_{ji}, length n, zero off the cone
    order: int


class ExtendedData:
    """An S-extended stacky fan with its splitting ``mu``."""

    def __init__(self, fan: StackyFan, vectors: Sequence[ExtensionVector]):
        self.fan = fan
        self.vectors = tuple(vectors)
        self.m = len(self.vectors)
        self.n = fan.n
        self.size = fan.n + self.m

    @property
    def S(self) -> tuple[tuple[int, ...], ...]:
        return tuple(v.element for v in self.vectors)

    def ray_bar(self, i: int) -> tuple:
        """Image in N tensor Q of the i-th extended generator (rays first, then S)."""
        if i < self.n:
            return self.fan.rays_bar[i]
        return self.vectors[i - self.n].element[: self.fan.dim]

    def ray(self, i: int) -> tuple[int, ...]:
        if i < self.n:
            return self.fan.rays[i]
        return self.vectors[i - self.n].element

    def mu(self, j: int) -> tuple[Fraction, ...]:
        """Splitting image ``mu(e_j) = e_{n+j} - sum_i s_{ji} e_i``."""
        v = [-c for c in self.vectors[j].coeffs] + [Fraction(0)] * self.m
        v[self.n + j] = Fraction(1)
        return tuple(v)


def _locate(fan: StackyFan, vbar) -> tuple[Cone, tuple[Fraction, ...]] | None:
    for c in fan.top_cones:
        ws = fixed_point_weights(fan, c)
        coords = [pair_weight(ws[i], vbar) for i in c]
        if all(a >= 0 for a in coords):
            cone = tuple(i for i, a in zip(c, coords) if a > 0)
            full = [Fraction(0)] * fan.n
            for i, a in zip(c, coords):
                full[i] = a
            return cone, tuple(full)
    return None


def extend(fan: StackyFan, S: Iterable[Sequence[int]] = ()) -> ExtendedData:
    vecs = []
    for j, s in enumerate(S):
        s = fan.N.reduce(tuple(int(x) for x in s))
        found = _locate(fan, s[: fan.dim])
        if found is None:
            raise OutsideSupport(j, s)
        cone, coeffs = found
        order = fan.cone_quotient(cone).group.element_order(fan.cone_quotient(cone).projection(s))
        if order is None:
            raise OutsideSupport(j, s)
        for c in coeffs:
            if (order * c).denominator != 1:
                raise ExtensionError(f"extension element {j}: order {order} does not clear {c}")
        vecs.append(ExtensionVector(s, cone, coeffs, order))
    return ExtendedData(fan, vecs)


# ---------------------------------------------------------------------------
# degrees


@dataclass(frozen=True)
class ExtDegree:
    lam: tuple[Fraction, ...]
    d_part: tuple[Fraction, ...]
    k_part: tuple[int, ...]
    box: BoxElement
    omega_degree: Fraction

    def sort_key(self):
        return (self.omega_degree, self.lam)


def _check_lambda(ext: ExtendedData, lam: Sequence[Fraction]) -> Cone:
    fan = ext.fan
    if len(lam) != ext.size:
        raise NotInLambdaS(f"degree has length {len(lam)}, expected {ext.size}")
    for k in range(fan.dim):
        if sum((lam[i] * ext.ray_bar(i)[k] for i in range(ext.size)), Fraction(0)) != 0:
            raise NotInLambdaS(f"{_fmt(lam)} is not in the kernel of the extended ray map")
    if any(lam[ext.n + j].denominator != 1 for j in range(ext.m)):
        raise NotInLambdaS(f"{_fmt(lam)} has a non-integral extended coordinate")
    frac_set = tuple(i for i in range(ext.n) if lam[i].denominator != 1)
    for c in fan.cones:
        if set(frac_set) <= set(c):
            return frac_set
    raise NotInLambdaS(f"non-integral coordinates {list(frac_set)} of {_fmt(lam)} do not lie in a cone")


def _fmt(lam) -> str:
    return "(" + ", ".join(str(x) for x in lam) + ")"


def reduction(ext: ExtendedData, lam: Sequence) -> BoxElement:
    """``v^S(lam) = sum ceil(lam_i) rho_i + sum ceil(lam_{n+j}) s_j`` as a box element."""
    lam = tuple(Fraction(x) for x in lam)
    cone = _check_lambda(ext, lam)
    fan = ext.fan
    v = [0] * fan.N.ngens
    for i in range(ext.size):
        c = ceil(lam[i])
        if c:
            r = ext.ray(i)
            v = [x + c * y for x, y in zip(v, r)]
    b = box_element_of(fan, v, cone)
    for i in range(ext.n):
        if b.fracs[i] != frac(-lam[i]):
            raise AssertionError(f"reduction of {_fmt(lam)} has wrong fractional part at {i}")
    return b


def omega_degree(ext: ExtendedData, omega: Sequence, lam: Sequence) -> Fraction:
    d, k = split(ext, lam)
    return pair_weight(omega, d) + sum(k)


def split(ext: ExtendedData, lam: Sequence) -> tuple[tuple[Fraction, ...], tuple[int, ...]]:
    """Write ``lam = iota(d) + mu(k)``; returns ``(d, k)``."""
    k = tuple(int(lam[ext.n + j]) for j in range(ext.m))
    d = [Fraction(x) for x in lam[: ext.n]]
    for j, kj in enumerate(k):
        for i, s in enumerate(ext.vectors[j].coeffs):
            d[i] += kj * s
    return tuple(d), k


def unsplit(ext: ExtendedData, d: Sequence, k: Sequence[int]) -> tuple[Fraction, ...]:
    lam = [Fraction(x) for x in d] + [Fraction(0)] * ext.m
    for j, kj in enumerate(k):
        mu = ext.mu(j)
        lam = [a + kj * b for a, b in zip(lam, mu)]
    return tuple(lam)


def make_degree(ext: ExtendedData, omega: Sequence, lam: Sequence) -> ExtDegree:
    lam = tuple(Fraction(x) for x in lam)
    b = reduction(ext, lam)
    d, k = split(ext, lam)
    return ExtDegree(lam, d, k, b, pair_weight(omega, d) + sum(k))


def coefficient_matrix(ext: ExtendedData, cone: Cone) -> dict[tuple[int, int], Fraction]:
    """``a_{ij} = u_j(sigma)(rho_i)`` for i off the cone and j on it."""
    ws = fixed_point_weights(ext.fan, cone)
    return {(i, j): pair_weight(ws[j], ext.ray_bar(i))
            for i in range(ext.size) if i not in cone for j in cone}


def lambda_from_free(ext: ExtendedData, cone: Cone, free: dict[int, int],
                     a: dict[tuple[int, int], Fraction] | None = None) -> tuple[Fraction, ...]:
    """Complete the off-cone coordinates to a degree using ``lam_j = -sum a_{ij} lam_i``."""
    a = coefficient_matrix(ext, cone) if a is None else a
    lam = [Fraction(0)] * ext.size
    for i, x in free.items():
        lam[i] = Fraction(x)
    for j in cone:
        lam[j] = -sum((a[(i, j)] * x for i, x in free.items()), Fraction(0))
    return tuple(lam)


def _require_kahler(ext: ExtendedData, omega: Sequence) -> None:
    if len(omega) != ext.n:
        raise InvalidKahler(f"Kahler class has length {len(omega)}, expected {ext.n}")
    if not check_kahler(ext.fan, omega):
        raise InvalidKahler("Kahler class is not positive on the Mori cone")


def enumerate_cone(ext: ExtendedData, cone: Cone, omega: Sequence, cutoff) -> list[ExtDegree]:
    """Degrees with nonnegative integral coordinates off ``cone`` and omega-degree <= cutoff."""
    _require_kahler(ext, omega)
    cutoff = Fraction(cutoff)
    off = [i for i in range(ext.size) if i not in cone]
    a = coefficient_matrix(ext, cone)
    unit_weights = []
    for i in off:
        lam = lambda_from_free(ext, cone, {i: 1}, a)
        w = omega_degree(ext, omega, lam)
        if w <= 0:
            raise InvalidKahler(f"degree of generator {i} on cone {list(cone)} is not positive")
        unit_weights.append(w)
    cons = [(tuple(int(k == t) for k in range(len(off))), 0) for t in range(len(off))]
    cons.append((tuple(-w for w in unit_weights), cutoff))
    out = []
    for pt in enumerate_lattice_points(cons, len(off)):
        lam = lambda_from_free(ext, cone, dict(zip(off, pt)), a)
        out.append(make_degree(ext, omega, lam))
    return sorted(out, key=ExtDegree.sort_key)


def enumerate_lambda(ext: ExtendedData, omega: Sequence, cutoff) -> dict[BoxElement, list[ExtDegree]]:
    """All enumerated degrees over every top cone, deduplicated and grouped by box element."""
    seen: dict[tuple, ExtDegree] = {}
    for c in ext.fan.top_cones:
        for deg in enumerate_cone(ext, c, omega, cutoff):
            seen.setdefault(deg.lam, deg)
    grouped: dict[BoxElement, list[ExtDegree]] = {}
    for deg in sorted(seen.values(), key=ExtDegree.sort_key):
        grouped.setdefault(deg.box, []).append(deg)
    return dict(sorted(grouped.items(), key=lambda kv: kv[0].sort_key()))


def shift_lambda(ext: ExtendedData, omega: Sequence, deg: ExtDegree, shift: Sequence,
                 expected_box: BoxElement | None = None) -> ExtDegree:
    """``deg + shift`` for a curve degree ``shift`` (extended coordinates zero)."""
    shift = tuple(Fraction(x) for x in shift)
    if len(shift) == ext.n:
        shift = shift + (Fraction(0),) * ext.m
    if not any(shift):
        raise IncompatibleBoxData("a curve degree must be nonzero")
    try:
        out = make_degree(ext, omega, tuple(a + b for a, b in zip(deg.lam, shift)))
    except NotInLambdaS as exc:
        raise IncompatibleBoxData(str(exc)) from exc
    if expected_box is not None and out.box != expected_box:
        raise IncompatibleBoxData(f"shifted degree lands in {out.box.label()}, not {expected_box.label()}")
    return out


__all__ = [
    "ExtDegree", "ExtendedData", "ExtensionError", "ExtensionVector", "IncompatibleBoxData",
    "InvalidKahler", "NotInLambdaS", "OutsideSupport", "coefficient_matrix", "enumerate_cone",
    "enumerate_lambda", "extend", "lambda_from_free", "make_degree", "omega_degree", "reduction",
    "shift_lambda", "split", "unsplit",
]
