"""Stacky fans: validation, box elements, fixed-point weights and Mori cones."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .exactlin import (
    FgAbelianGroup,
    SingularInput,
    cokernel,
    dual_basis_solve,
    free_group,
    kernel_basis,
    map_from_images,
    primitive_integer,
    quotient_by,
    rational_kernel,
    rational_rank,
    solve_in_span,
)

Cone = tuple  # sorted tuple of 0-based ray indices


class FanError(ValueError):
    pass


class UnknownCone(FanError):
    pass


class InvalidWeights(FanError):
    pass


class StackyFan:
    """A stacky fan ``(N, Sigma, rho)`` given by its rays and maximal cones.

    Ray indices are 0-based.  Construction only checks shapes; call
    :func:`validate` for the semantic conditions.
    """

    def __init__(self, N: FgAbelianGroup, rays: Iterable[Sequence[int]],
                 max_cones: Iterable[Iterable[int]]):
        self.N = N
        self.rays = tuple(N.reduce(tuple(int(x) for x in r)) for r in rays)
        self.n = len(self.rays)
        cones = set()
        for c in max_cones:
            cone = tuple(sorted(set(int(i) for i in c)))
            if any(i < 0 or i >= self.n for i in cone):
                raise FanError(f"cone {list(cone)} refers to a ray index out of range")
            cones.add(cone)
        self.max_cones = tuple(sorted(cones, key=lambda c: (len(c), c)))
        self.dim = N.rank
        self.rho = map_from_images(N, self.rays)
        self.rays_bar = tuple(r[: N.rank] for r in self.rays)

    def __repr__(self) -> str:
        return f"StackyFan(N={self.N}, rays={list(self.rays)}, max_cones={list(self.max_cones)})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, StackyFan) and self.N == other.N
                and self.rays == other.rays and self.max_cones == other.max_cones)

    def __hash__(self) -> int:
        return hash((self.N, self.rays, self.max_cones))

    @cached_property
    def kernel(self) -> tuple[tuple[int, ...], ...]:
        """Lattice basis of L = ker(rho: Z^n -> N)."""
        return tuple(kernel_basis(self.rho))

    @cached_property
    def cones(self) -> tuple[Cone, ...]:
        faces = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                faces.update(combinations(c, k))
        return tuple(sorted(faces, key=lambda c: (len(c), c)))

    @cached_property
    def top_cones(self) -> tuple[Cone, ...]:
        return tuple(c for c in self.max_cones if len(c) == self.dim)

    @cached_property
    def anticones(self) -> tuple[Cone, ...]:
        full = set(range(self.n))
        return tuple(sorted((tuple(sorted(full - set(c))) for c in self.cones),
                            key=lambda c: (len(c), c)))

    def is_cone(self, cone: Iterable[int]) -> bool:
        return tuple(sorted(cone)) in set(self.cones)

    def check_cone(self, cone: Iterable[int]) -> Cone:
        c = tuple(sorted(cone))
        if c not in set(self.cones):
            raise UnknownCone(f"{list(c)} is not a cone of the fan")
        return c

    def cone_quotient(self, cone: Iterable[int]):
        """``N / sum_{i in cone} Z rho_i`` as a :class:`Quotient`."""
        return quotient_by(self.N, [self.rays[i] for i in cone])

    def cone_coordinates(self, cone: Cone, vbar: Sequence) -> tuple[Fraction, ...] | None:
        """Coefficients of ``vbar`` in the rays of ``cone`` (None if outside their span)."""
        if not cone:
            return () if not any(vbar) else None
        return solve_in_span([self.rays_bar[i] for i in cone], vbar)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    items: list = field(default_factory=list)  # (check, ok, message)

    def add(self, check: str, ok: bool, message: str = "") -> None:
        self.items.append((check, ok, message))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    def failures(self) -> list:
        return [it for it in self.items if not it[1]]

    def lines(self) -> list[str]:
        out = []
        for check, ok, msg in self.items:
            line = f"{check}: {'ok' if ok else 'FAIL'}"
            out.append(f"{line} ({msg})" if msg else line)
        return out


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _wall_normal(fan: StackyFan, wall: Cone) -> tuple[Fraction, ...]:
    vecs = [fan.rays_bar[i] for i in wall]
    if not vecs:
        return tuple(Fraction(int(k == 0)) for k in range(fan.dim))
    return rational_kernel(vecs)[0]


def _pair(h, v) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(h, v)), Fraction(0))


def validate(fan: StackyFan) -> ValidationReport:
    """Check the stacky fan conditions; never raises."""
    rep = ValidationReport()
    d = fan.dim
    rank_ok = rational_rank(fan.rays_bar) == d if fan.rays_bar else d == 0
    rep.add("finite cokernel", rank_ok,
            "" if rank_ok else "ray images do not span N tensor Q")

    simplicial = True
    for c in fan.max_cones:
        if rational_rank([fan.rays_bar[i] for i in c]) != len(c):
            simplicial = False
            rep.add("simplicial", False, f"cone {list(c)} is not simplicial")
    if simplicial:
        rep.add("simplicial", True)

    used = {i for c in fan.max_cones for i in c}
    rays_ok = True
    for i in range(fan.n):
        if i not in used or not any(fan.rays_bar[i]):
            rays_ok = False
            rep.add("rays generate 1-cones", False, f"ray {i} does not span a 1-dimensional cone")
    for i, k in combinations(range(fan.n), 2):
        a, b = fan.rays_bar[i], fan.rays_bar[k]
        if any(a) and any(b) and rational_rank([a, b]) == 1 and _pair(a, b) > 0:
            rays_ok = False
            rep.add("rays generate 1-cones", False, f"rays {i} and {k} span the same 1-cone")
    if rays_ok:
        rep.add("rays generate 1-cones", True)

    full = all(len(c) == d for c in fan.max_cones) and bool(fan.max_cones)
    rep.add("full-dimensional", full,
            "" if full else "every maximal cone must be top-dimensional")

    if not (rank_ok and simplicial and rays_ok and full):
        rep.add("support convex", False, "skipped: earlier checks failed")
        return rep

    convex = True
    walls: dict[Cone, list] = {}
    for c in fan.top_cones:
        for j in c:
            wall = tuple(i for i in c if i != j)
            walls.setdefault(wall, []).append((c, j))
    for wall, owners in sorted(walls.items()):
        h = _wall_normal(fan, wall)
        if len(owners) > 2:
            convex = False
            rep.add("support convex", False, f"wall {list(wall)} lies on {len(owners)} cones")
            continue
        if len(owners) == 2:
            (_, j), (_, jj) = owners
            s1, s2 = _sign(_pair(h, fan.rays_bar[j])), _sign(_pair(h, fan.rays_bar[jj]))
            if s1 * s2 != -1:
                convex = False
                rep.add("support convex", False,
                        f"cones {list(owners[0][0])} and {list(owners[1][0])} overlap across wall {list(wall)}")
            continue
        (c, j), = owners
        s = _sign(_pair(h, fan.rays_bar[j]))
        if any(_sign(_pair(h, r)) == -s for r in fan.rays_bar):
            convex = False
            rep.add("support convex", False,
                    f"support not convex at boundary wall {list(wall)} of cone {list(c)}")
    if convex:
        rep.add("support convex", True)
    return rep


# ---------------------------------------------------------------------------
# box elements


@dataclass(frozen=True)
class BoxElement:
    element: tuple[int, ...]
    cone: Cone
    fracs: tuple[Fraction, ...]

    @property
    def age(self) -> Fraction:
        return sum(self.fracs, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.cone and not any(self.element)

    def sort_key(self):
        return (len(self.cone), self.cone, self.fracs, self.element)

    def label(self) -> str:
        return "(" + ",".join(str(x) for x in self.element) + ")"


def box_element_of(fan: StackyFan, v: Sequence[int], cone: Cone) -> BoxElement:
    """Box representative of ``v`` modulo the rays of ``cone``.

    ``v`` must map to the Q-span of those rays.
    """
    v = fan.N.reduce(v)
    coords = fan.cone_coordinates(cone, v[: fan.dim])
    if coords is None:
        raise FanError(f"{v} is not in the span of cone {list(cone)}")
    shift = [0] * fan.N.ngens
    for i, a in zip(cone, coords):
        fl = a.numerator // a.denominator
        for k in range(fan.N.ngens):
            shift[k] += fl * fan.rays[i][k]
    b = fan.N.reduce([x - s for x, s in zip(v, shift)])
    fracs = [Fraction(0)] * fan.n
    for i, a in zip(cone, coords):
        fracs[i] = a - (a.numerator // a.denominator)
    minimal = tuple(i for i in cone if fracs[i] != 0)
    return BoxElement(b, minimal, tuple(fracs))


def box(fan: StackyFan, cone: Iterable[int], include_faces: bool = False) -> list[BoxElement]:
    """Box elements with minimal cone ``cone`` (or any face of it, with ``include_faces``)."""
    cone = fan.check_cone(cone)
    quo = fan.cone_quotient(cone)
    G = quo.group
    out = []
    torsion_part = FgAbelianGroup(0, G.torsion)
    for t in torsion_part.elements():
        y = (0,) * G.rank + t
        b = box_element_of(fan, quo.lift(y), cone)
        if include_faces or b.cone == cone:
            out.append(b)
    return sorted(out, key=BoxElement.sort_key)


def all_box_elements(fan: StackyFan) -> list[BoxElement]:
    seen = {}
    for c in fan.max_cones:
        for b in box(fan, c, include_faces=True):
            seen[b.element] = b
    return sorted(seen.values(), key=BoxElement.sort_key)


def box_involution(fan: StackyFan, b: BoxElement) -> BoxElement:
    """``b^ = sum_{i in cone(b)} rho_i - b``, with fractional parts ``<-b_i>``."""
    v = [-x for x in b.element]
    for i in b.cone:
        v = [x + y for x, y in zip(v, fan.rays[i])]
    fracs = tuple((1 - f) if f else Fraction(0) for f in b.fracs)
    return BoxElement(fan.N.reduce(v), b.cone, fracs)


def find_box_element(fan: StackyFan, element: Sequence[int]) -> BoxElement:
    """The box element with the given N-coordinates."""
    element = fan.N.reduce(element)
    for b in all_box_elements(fan):
        if b.element == element:
            return b
    raise FanError(f"{element} is not a box element")


# ---------------------------------------------------------------------------
# torus weights, walls, Mori cone


@dataclass(frozen=True)
class WeightSystem:
    """``u_i(sigma)`` as coefficient vectors in the equivariant variables x1..xd."""

    cone: Cone
    weights: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.weights[i]


def fixed_point_weights(fan: StackyFan, cone: Iterable[int]) -> WeightSystem:
    cone = tuple(sorted(cone))
    if cone not in fan.top_cones:
        raise UnknownCone(f"{list(cone)} is not a top-dimensional cone")
    duals = dual_basis_solve([fan.rays_bar[i] for i in cone]) if cone else []
    zero = (Fraction(0),) * fan.dim
    w = [zero] * fan.n
    for i, u in zip(cone, duals):
        w[i] = tuple(Fraction(x) for x in u)
    return WeightSystem(cone, tuple(w))


def pair_weight(u: Sequence, v: Sequence) -> Fraction:
    """Evaluate the linear form ``u`` on the vector ``v``."""
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True, order=True)
class AdjacentPair:
    sigma: Cone
    sigma_prime: Cone
    j: int
    j_prime: int

    @property
    def wall(self) -> Cone:
        return tuple(i for i in self.sigma if i != self.j)


def adjacent_pairs(fan: StackyFan) -> list[AdjacentPair]:
    out = []
    tops = fan.top_cones
    for s in tops:
        for t in tops:
            if s == t:
                continue
            common = set(s) & set(t)
            if len(common) == fan.dim - 1:
                (j,) = set(s) - common
                (jj,) = set(t) - common
                out.append(AdjacentPair(s, t, j, jj))
    return sorted(out)


def _cone_mori_generators(fan: StackyFan, cone: Cone) -> list[tuple[Fraction, ...]]:
    ws = fixed_point_weights(fan, cone)
    gens = []
    for k in range(fan.n):
        if k in cone:
            continue
        d = [Fraction(0)] * fan.n
        d[k] = Fraction(1)
        for i in cone:
            d[i] = -pair_weight(ws[i], fan.rays_bar[k])
        gens.append(tuple(d))
    return gens


def _extreme_rays(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    gens = sorted(set(gens))
    if not gens:
        return []
    basis = []
    for g in gens:
        if rational_rank(basis + [g]) > len(basis):
            basis.append(g)
    r = len(basis)
    if r == 1:
        return gens
    # functionals on span(basis) written as t -> sum t_k <basis_k, .>
    gram = [[pair_weight(g, b) for b in basis] for g in gens]
    facets = []
    for subset in combinations(range(len(gens)), r - 1):
        rows = [gram[s] for s in subset]
        if rational_rank(rows) != r - 1:
            continue
        t = rational_kernel(rows)[0]
        vals = [sum((a * b for a, b in zip(gram[i], t)), Fraction(0)) for i in range(len(gens))]
        if all(v >= 0 for v in vals):
            facets.append(vals)
        elif all(v <= 0 for v in vals):
            facets.append([-v for v in vals])
    if not facets:
        return gens
    out = []
    for i, g in enumerate(gens):
        # g is extreme iff the facets through it cut out a line; a facet is
        # determined by its values on the (spanning) generators
        tight = [f for f in facets if f[i] == 0]
        if tight and rational_rank(tight) == r - 1:
            out.append(g)
    return out


def mori_generators(fan: StackyFan) -> list[tuple[int, ...]]:
    """Extreme rays of the Mori cone as primitive integer vectors in Z^n."""
    gens = set()
    for c in fan.top_cones:
        for g in _cone_mori_generators(fan, c):
            gens.add(primitive_integer(g))
    return sorted(_extreme_rays(list(gens)))


def check_kahler(fan: StackyFan, omega: Sequence) -> bool:
    return all(pair_weight(omega, g) > 0 for g in mori_generators(fan))


# ---------------------------------------------------------------------------
# builders


def weighted_projective(*weights: int) -> StackyFan:
    """Weighted projective stack with weights ``w_0, ..., w_n``.

    Rays are listed as the images of ``e_1 .. e_n`` followed by the image of
    ``e_0``, so the fan sequence kernel is ``Z (w_1, ..., w_n, w_0)``.  When
    ``w_0 = 1`` the rays are the standard ones ``e_1 .. e_n, -sum w_i e_i``.
    """
    if len(weights) < 2 or any(int(w) != w or w < 1 for w in weights):
        raise InvalidWeights(f"need at least two positive integer weights, got {list(weights)}")
    w0, rest = int(weights[0]), [int(w) for w in weights[1:]]
    n = len(rest)
    if w0 == 1:
        N = free_group(n)
        rays = [tuple(int(i == k) for i in range(n)) for k in range(n)]
        rays.append(tuple(-w for w in rest))
    else:
        relation = map_from_images(free_group(n + 1), [list(rest) + [w0]])
        quo = cokernel(relation)
        N = quo.group
        rays = [quo.projection(tuple(int(i == k) for i in range(n + 1))) for k in range(n + 1)]
    cones = list(combinations(range(n + 1), n))
    return StackyFan(N, rays, cones)


def football(r1: int, r2: int) -> StackyFan:
    """``P_{r1,r2}``: N = Z with rays ``-r1`` and ``r2``."""
    if r1 < 1 or r2 < 1:
        raise InvalidWeights("football orders must be positive")
    return StackyFan(free_group(1), [(-r1,), (r2,)], [(0,), (1,)])


def affine_quotient(rays: Sequence[Sequence[int]]) -> StackyFan:
    """The affine stack of a single simplicial top cone in ``Z^d``."""
    rays = [tuple(r) for r in rays]
    if not rays:
        raise InvalidWeights("need at least one ray")
    d = len(rays[0])
    if len(rays) != d:
        raise InvalidWeights("a single top cone needs exactly d rays")
    return StackyFan(free_group(d), rays, [tuple(range(d))])


def product(fa: StackyFan, fb: StackyFan) -> StackyFan:
    """Product stacky fan; N is the direct sum, cones are products."""
    ra, rb = fa.N.rank, fb.N.rank
    N = FgAbelianGroup(ra + rb, fa.N.torsion + fb.N.torsion)
    ta, tb = len(fa.N.torsion), len(fb.N.torsion)

    def embed_a(v):
        return tuple(v[:ra]) + (0,) * rb + tuple(v[ra:]) + (0,) * tb

    def embed_b(v):
        return (0,) * ra + tuple(v[:rb]) + (0,) * ta + tuple(v[rb:])

    rays = [embed_a(r) for r in fa.rays] + [embed_b(r) for r in fb.rays]
    cones = [tuple(a) + tuple(fa.n + i for i in b) for a in fa.max_cones for b in fb.max_cones]
    return StackyFan(N, rays, cones)


def is_valid_weight_vector(fan: StackyFan, ws: WeightSystem) -> bool:
    for i in ws.cone:
        for k in ws.cone:
            if pair_weight(ws[i], fan.rays_bar[k]) != int(i == k):
                return False
    return all(not any(ws[i]) for i in range(fan.n) if i not in ws.cone)


__all__ = [
    "AdjacentPair", "BoxElement", "FanError", "InvalidWeights", "StackyFan", "UnknownCone",
    "ValidationReport", "WeightSystem", "adjacent_pairs", "affine_quotient", "all_box_elements",
    "box", "box_element_of", "box_involution", "check_kahler", "find_box_element",
    "fixed_point_weights", "football", "mori_generators", "pair_weight", "product", "validate",
    "weighted_projective", "SingularInput",
]
