"""Exact integer and rational linear algebra.

Matrices are plain lists of rows holding Python ints (or Fractions for the
rational helpers).  Nothing here ever touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterable, Sequence

IntMatrix = list  # list[list[int]], row-major
Vector = tuple


class LinAlgError(ValueError):
    pass


class InfiniteCokernel(LinAlgError):
    pass


class SingularInput(LinAlgError):
    pass


class UnboundedRegion(LinAlgError):
    pass


# ---------------------------------------------------------------------------
# small matrix helpers


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> IntMatrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def shape(m: IntMatrix, cols: int | None = None) -> tuple[int, int]:
    if not m:
        return 0, (cols or 0)
    return len(m), len(m[0])


def matmul(a: IntMatrix, b: IntMatrix, inner: int | None = None) -> IntMatrix:
    ra = len(a)
    if not b:
        return zeros(ra, 0) if inner is None else zeros(ra, 0)
    cb = len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cb)]
            for i in range(ra)]


def matvec(a: IntMatrix, v: Sequence) -> tuple:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in a)


def transpose(m: IntMatrix, cols: int | None = None) -> IntMatrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def columns_to_matrix(cols: Sequence[Sequence], rows: int) -> IntMatrix:
    """Stack column vectors side by side into a rows x len(cols) matrix."""
    return [[c[i] for c in cols] for i in range(rows)]


def det(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        result *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return result


# ---------------------------------------------------------------------------
# Smith normal form


def _snf_full(m: IntMatrix, cols: int | None = None):
    """Return (U, D, V, Uinv, Vinv) with U*M*V = D."""
    rows, ncols = shape(m, cols)
    d = [list(r) for r in m]
    u, uinv = identity(rows), identity(rows)
    v, vinv = identity(ncols), identity(ncols)

    def swap_rows(i, j):
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]
            for row in uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]
            vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(src, dst, f):
        # row_dst += f * row_src
        if f:
            d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
            u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]
            for row in uinv:
                row[src] -= f * row[dst]

    def add_col(src, dst, f):
        # col_dst += f * col_src
        if f:
            for row in d:
                row[dst] += f * row[src]
            for row in v:
                row[dst] += f * row[src]
            vinv[src] = [x - f * y for x, y in zip(vinv[src], vinv[dst])]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]

    t = 0
    while t < min(rows, ncols):
        # pivot: smallest |entry|, then lowest row, then lowest column
        best = None
        for i in range(t, rows):
            for j in range(t, ncols):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, ncols):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    if d[t][j]:
                        dirty = True
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, rows)
                            for j in range(t + 1, ncols) if d[i][j] % p), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
            # re-pivot within row t / column t
            best = None
            for i in range(t, rows):
                x = d[i][t]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, t)
            for j in range(t, ncols):
                x = d[t][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), t, j)
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
        if d[t][t] < 0:
            negate_row(t)
        t += 1
    return u, d, v, uinv, vinv


def smith_normal_form(m: IntMatrix, cols: int | None = None):
    """Smith normal form ``U * M * V = D`` with U, V unimodular.

    The diagonal of D is nonnegative and forms a divisibility chain.  ``cols``
    gives the column count when ``m`` has no rows.
    """
    u, d, v, _, _ = _snf_full(m, cols)
    return u, d, v


def diagonal(d: IntMatrix) -> list[int]:
    if not d:
        return []
    return [d[i][i] for i in range(min(len(d), len(d[0])))]


def rank(m: IntMatrix, cols: int | None = None) -> int:
    _, d, _, _, _ = _snf_full(m, cols)
    return sum(1 for x in diagonal(d) if x)


# ---------------------------------------------------------------------------
# Hermite normal form (row style)


def hermite_normal_form(rows_in: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style HNF of the lattice spanned by the given integer rows.

    Zero rows are dropped, pivots are positive and entries above each pivot
    are reduced into ``[0, pivot)``.  Two generating sets span the same
    lattice iff their HNFs are equal.
    """
    a = [list(r) for r in rows_in]
    if not a:
        return []
    ncols = len(a[0])
    r0 = 0
    for c in range(ncols):
        # gcd-combine all rows below r0 in column c
        while True:
            nz = [i for i in range(r0, len(a)) if a[i][c]]
            if len(nz) <= 1:
                break
            i_min = min(nz, key=lambda i: (abs(a[i][c]), i))
            for i in nz:
                if i != i_min:
                    f = a[i][c] // a[i_min][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[i_min])]
        nz = [i for i in range(r0, len(a)) if a[i][c]]
        if not nz:
            continue
        i = nz[0]
        a[r0], a[i] = a[i], a[r0]
        if a[r0][c] < 0:
            a[r0] = [-x for x in a[r0]]
        p = a[r0][c]
        for k in range(r0):
            f = a[k][c] // p
            if f:
                a[k] = [x - f * y for x, y in zip(a[k], a[r0])]
        r0 += 1
    return [tuple(r) for r in a[:r0]]


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^rank`` plus cyclic factors ``Z/m`` for each modulus in ``torsion``.

    Elements are integer tuples of length ``rank + len(torsion)``, free
    coordinates first, torsion coordinates reduced into ``[0, m)``.
    Groups produced by :func:`cokernel` carry invariant factors in a
    divisibility chain; user-supplied groups only need moduli >= 2.
    """

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0 or any(m < 2 for m in self.torsion):
            raise LinAlgError(f"invalid group Z^{self.rank} x {self.torsion}")

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> int:
        if self.rank:
            raise LinAlgError("infinite group")
        out = 1
        for m in self.torsion:
            out *= m
        return out

    def presentation(self) -> IntMatrix:
        """Relation matrix (ngens x len(torsion)) whose cokernel is the group."""
        n = self.ngens
        cols = [[0] * n for _ in self.torsion]
        for k, m in enumerate(self.torsion):
            cols[k][self.rank + k] = m
        return columns_to_matrix(cols, n)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ngens:
            raise LinAlgError(f"element {tuple(v)} has wrong length for {self}")
        r = self.rank
        return tuple(v[:r]) + tuple(x % m for x, m in zip(v[r:], self.torsion))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def add(self, a, b) -> tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def scale(self, k: int, a) -> tuple[int, ...]:
        return self.reduce([k * x for x in a])

    def neg(self, a) -> tuple[int, ...]:
        return self.reduce([-x for x in a])

    def element_order(self, a) -> int | None:
        """Order of ``a``, or None when it has infinite order."""
        a = self.reduce(a)
        if any(a[: self.rank]):
            return None
        out = 1
        for x, m in zip(a[self.rank:], self.torsion):
            o = m // gcd(x, m)
            out = out * o // gcd(out, o)
        return out

    def elements(self) -> list[tuple[int, ...]]:
        """All elements of a finite group, in lexicographic order."""
        if self.rank:
            raise LinAlgError("cannot list elements of an infinite group")
        return [tuple(t) for t in product(*(range(m) for m in self.torsion))]

    def free_part(self, a) -> tuple[int, ...]:
        return tuple(a[: self.rank])

    def __str__(self) -> str:
        parts = ([f"Z^{self.rank}"] if self.rank else []) + [f"Z/{m}" for m in self.torsion]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class LatticeMap:
    """Homomorphism between f.g. abelian groups given on element coordinates."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: tuple  # target.ngens rows x source.ngens columns

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(matvec(self.matrix, v))

    def rows(self) -> IntMatrix:
        return [list(r) for r in self.matrix]

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(r[i] for r in self.matrix)

    def is_well_defined(self) -> bool:
        """Torsion relations of the source map to zero in the target."""
        rel = self.source.presentation()
        for k in range(len(self.source.torsion)):
            col = [row[k] for row in rel]
            if any(self(col)):
                return False
        return True


def free_group(n: int) -> FgAbelianGroup:
    return FgAbelianGroup(n, ())


def lattice_map(source: FgAbelianGroup, target: FgAbelianGroup,
                matrix: Sequence[Sequence[int]]) -> LatticeMap:
    mat = tuple(tuple(int(x) for x in row) for row in matrix)
    if len(mat) != target.ngens or any(len(r) != source.ngens for r in mat):
        raise LinAlgError("matrix shape does not match source/target")
    f = LatticeMap(source, target, mat)
    if not f.is_well_defined():
        raise LinAlgError("map is not well defined on torsion")
    return f


def map_from_images(target: FgAbelianGroup, images: Sequence[Sequence[int]]) -> LatticeMap:
    """The map ``Z^k -> target`` sending ``e_i`` to ``images[i]``."""
    src = free_group(len(images))
    mat = columns_to_matrix([target.reduce(v) for v in images], target.ngens)
    return LatticeMap(src, target, tuple(tuple(r) for r in mat))


# ---------------------------------------------------------------------------
# kernels, cokernels and the Gale dual


def integer_kernel(m: IntMatrix, cols: int) -> list[tuple[int, ...]]:
    """Lattice basis (HNF rows) of ``{v in Z^cols : M v = 0}``."""
    _, d, v, _, _ = _snf_full(m, cols)
    r = sum(1 for x in diagonal(d) if x)
    gens = [tuple(v[i][k] for i in range(cols)) for k in range(r, cols)]
    return hermite_normal_form(gens)


def kernel_basis(f: LatticeMap) -> list[tuple[int, ...]]:
    """Basis of ker f for a map out of a free group, as a list of vectors.

    Torsion in the target is handled by appending its relations to the
    matrix and projecting the kernel back onto the source coordinates.
    """
    if f.source.torsion:
        raise LinAlgError("kernel_basis needs a free source")
    n = f.source.ngens
    rel = f.target.presentation()
    k = len(f.target.torsion)
    big = [list(f.matrix[i]) + list(rel[i]) for i in range(f.target.ngens)]
    gens = [vec[:n] for vec in integer_kernel(big, n + k)]
    return hermite_normal_form(gens)


@dataclass(frozen=True)
class Quotient:
    """A cokernel together with its projection and a section on coordinates."""

    group: FgAbelianGroup
    projection: LatticeMap
    lift_matrix: tuple  # ambient.ngens x group.ngens, a set-theoretic section

    def lift(self, y: Sequence[int]) -> tuple[int, ...]:
        return self.projection.source.reduce(matvec(self.lift_matrix, y))


def cokernel(f: LatticeMap) -> Quotient:
    """``target / image(f)`` in invariant-factor form, with its projection."""
    tgt = f.target
    n = tgt.ngens
    rel = tgt.presentation()
    big = [list(f.matrix[i]) + list(rel[i]) for i in range(n)]
    ncols = f.source.ngens + len(tgt.torsion)
    u, d, _, uinv, _ = _snf_full(big, ncols)
    diag = diagonal(d) + [0] * max(0, n - min(n, ncols))
    diag = diag[:n]
    tors_rows = [i for i in range(n) if diag[i] > 1]
    free_rows = [i for i in range(n) if diag[i] == 0]
    group = FgAbelianGroup(len(free_rows), tuple(diag[i] for i in tors_rows))
    sel = free_rows + tors_rows
    proj_rows = tuple(tuple(u[i]) for i in sel)
    proj = LatticeMap(tgt, group, proj_rows)
    lift = tuple(tuple(uinv[r][i] for i in sel) for r in range(n))
    return Quotient(group, proj, lift)


def quotient_by(group: FgAbelianGroup, gens: Sequence[Sequence[int]]) -> Quotient:
    """``group / <gens>``."""
    if gens:
        mat = columns_to_matrix([group.reduce(g) for g in gens], group.ngens)
    else:
        mat = [[] for _ in range(group.ngens)]
    f = LatticeMap(free_group(len(gens)), group, tuple(tuple(r) for r in mat))
    return cokernel(f)


@dataclass(frozen=True)
class GaleDual:
    group: FgAbelianGroup       # L^vee
    rho_dual: LatticeMap        # (Z^n)^* -> L^vee


def gale_dual(rho: LatticeMap) -> GaleDual:
    """Gale dual of ``rho: Z^n -> N`` via the mapping-cone recipe.

    With ``N = coker(Q: Z^s -> Z^t)`` and ``rho`` lifted to ``Z^n -> Z^t``,
    ``L^vee`` is the cokernel of ``[rho | Q]^T : (Z^t)^* -> (Z^n)^* + (Z^s)^*``
    and ``rho_dual`` is the composite ``(Z^n)^* -> (Z^n)^* + (Z^s)^* -> L^vee``.
    """
    n = rho.source.ngens
    N = rho.target
    if rank([list(r) for r in rho.matrix[: N.rank]], n) != N.rank:
        raise InfiniteCokernel("rho tensor Q is not surjective")
    q = N.presentation()
    stacked = [list(rho.matrix[i]) + list(q[i]) for i in range(N.ngens)]
    s = len(N.torsion)
    trans = transpose(stacked, n + s)  # (n + s) x t
    f = LatticeMap(free_group(N.ngens), free_group(n + s), tuple(tuple(r) for r in trans))
    quo = cokernel(f)
    proj = quo.projection
    mat = tuple(tuple(row[:n]) for row in proj.matrix)
    rho_dual = LatticeMap(free_group(n), quo.group, mat)
    return GaleDual(quo.group, rho_dual)


# ---------------------------------------------------------------------------
# rational linear algebra


def solve_rational(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Unique solution of the square system ``A x = b``, or None if singular."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(row[n] for row in aug)


def inverse_rational(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularInput("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def dual_basis_solve(vectors: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Vectors ``u_i`` with ``u_i . v_k = delta_ik`` for a basis ``v_1..v_n``."""
    n = len(vectors)
    if any(len(v) != n for v in vectors):
        raise SingularInput("need n vectors of length n")
    # rows of (V^T)^{-1}
    vt = [[vectors[k][i] for k in range(n)] for i in range(n)]
    inv = inverse_rational(vt)
    return [tuple(r) for r in inv]


def rational_rank(vectors: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def rational_kernel(vectors_as_rows: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : A x = 0}`` over Q, A given by rows."""
    if not vectors_as_rows:
        return []
    a = [[Fraction(x) for x in r] for r in vectors_as_rows]
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for row_i, pc in enumerate(pivots):
            x[pc] = -a[row_i][fc]
        out.append(tuple(x))
    return out


def primitive_integer(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector (same direction)."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise LinAlgError("zero vector has no primitive form")
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# lattice points in rational polytopes


Inequality = tuple  # (coeffs, const) meaning  coeffs . x + const >= 0


def _normalize_ineq(coeffs, const) -> tuple:
    vals = [Fraction(c) for c in coeffs] + [Fraction(const)]
    den = 1
    for x in vals:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vals]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints[:-1]), ints[-1]


def _eliminate(system: set, k: int) -> set:
    """Fourier-Motzkin elimination of variable ``k``."""
    pos, neg, rest = [], [], set()
    for a, c in system:
        if a[k] > 0:
            pos.append((a, c))
        elif a[k] < 0:
            neg.append((a, c))
        else:
            rest.add((a, c))
    for ap, cp in pos:
        for an, cn in neg:
            fp, fn = -an[k], ap[k]
            coeffs = [fp * x + fn * y for x, y in zip(ap, an)]
            rest.add(_normalize_ineq(coeffs, fp * cp + fn * cn))
    return rest


def enumerate_lattice_points(constraints: Sequence[Inequality], dim: int) -> list[tuple[int, ...]]:
    """All integer points of ``{x in Q^dim : a.x + c >= 0}``, sorted lexicographically.

    Coordinates are bounded one at a time from Fourier-Motzkin projections of
    the region onto the leading coordinates.  Raises :class:`UnboundedRegion`
    when a coordinate has no finite bound.
    """
    if dim == 0:
        ok = all(Fraction(c) >= 0 for _, c in constraints)
        return [()] if ok else []
    full = {_normalize_ineq(a, c) for a, c in constraints}
    projections: list[set] = [set()] * dim
    projections[dim - 1] = full
    for k in range(dim - 1, 0, -1):
        projections[k - 1] = _eliminate(projections[k], k)
    if any(c < 0 for a, c in _eliminate(projections[0], 0) if not any(a)):
        return []
    for k, system in enumerate(projections):
        has_up = any(a[k] < 0 for a, _ in system)
        has_lo = any(a[k] > 0 for a, _ in system)
        if not (has_up and has_lo):
            raise UnboundedRegion(f"coordinate {k} admits no finite bound")

    out: list[tuple[int, ...]] = []

    def bounds(k, prefix):
        lo, hi = None, None
        for a, c in projections[k]:
            rest = c + sum(a[i] * prefix[i] for i in range(k))
            if a[k] > 0:
                b = Fraction(-rest, a[k])
                lo = b if lo is None or b > lo else lo
            elif a[k] < 0:
                b = Fraction(rest, -a[k])
                hi = b if hi is None or b < hi else hi
            elif rest < 0:
                return 1, 0
        return _ceil(lo), _floor(hi)

    def descend(prefix):
        k = len(prefix)
        if k == dim:
            out.append(tuple(prefix))
            return
        lo, hi = bounds(k, prefix)
        for x in range(lo, hi + 1):
            prefix.append(x)
            descend(prefix)
            prefix.pop()

    descend([])
    return out


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def frac(x: Fraction) -> Fraction:
    """Fractional part ``<x> = x - floor(x)``."""
    x = Fraction(x)
    return x - _floor(x)


def floor(x) -> int:
    return _floor(Fraction(x))


def ceil(x) -> int:
    return _ceil(Fraction(x))


def solve_in_span(columns: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients ``a`` with ``sum a_k columns[k] = v`` for independent columns, else None."""
    k = len(columns)
    rows = len(v)
    aug = [[Fraction(columns[c][r]) for c in range(k)] + [Fraction(v[r])] for r in range(rows)]
    pivots = []
    r0 = 0
    for c in range(k):
        piv = next((r for r in range(r0, rows) if aug[r][c] != 0), None)
        if piv is None:
            raise SingularInput("columns are linearly dependent")
        aug[r0], aug[piv] = aug[piv], aug[r0]
        p = aug[r0][c]
        aug[r0] = [x / p for x in aug[r0]]
        for r in range(rows):
            if r != r0 and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[r0])]
        pivots.append(c)
        r0 += 1
    if any(aug[r][k] != 0 for r in range(r0, rows)):
        return None
    return tuple(aug[i][k] for i in range(k))
