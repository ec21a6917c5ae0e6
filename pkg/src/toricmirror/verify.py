"""Executable checks of the pole, residue-recursion and restriction conditions.

Orientation: the engine works with I(z); the cone point is I(-z).  Poles of
the restriction at ``sigma`` sit at ``z = -u_j(sigma)/c`` and the recursion
reads

    Res_{z=-u_j/c} I_(sigma,b) dz = Q^l(c) * RC(c) * I_(sigma',b')|_{z=-u_j/c}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, floor
from typing import Callable, Iterable, Sequence

from .curves import CurveError, admissible_c, curve_from_c, unit_degree
from .extension import ExtendedData
from .ifun import ISeries, iseries, iseries_restriction_form, jfun_bg, leading_term_ok, restriction_terms
from .linform import (
    EvalPole,
    FactoredExpr,
    LinFormError,
    PoleHit,
    chi_form,
    classify_poles,
    evaluate,
    normalize,
    residue_at,
    scale,
    substitute_z,
)
from .stackyfan import (
    AdjacentPair,
    BoxElement,
    Cone,
    StackyFan,
    adjacent_pairs,
    box,
    box_involution,
    fixed_point_weights,
)


@dataclass
class Check:
    ident: str
    passed: bool
    witness: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.ident} {status}" + (f" {self.witness}" if self.witness else "")


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, ident: str, passed: bool, witness: str = "") -> None:
        if not passed and not witness:
            witness = "(no witness recorded)"
        self.checks.append(Check(ident, passed, witness))

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)
        self.notes.extend(n for n in other.notes if n not in self.notes)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def lines(self) -> list[str]:
        out = [f"NOTE {n}" for n in self.notes]
        out += [c.line() for c in self.checks]
        if self.ok:
            out.append(f"ALL CHECKS PASSED ({len(self.checks)} checks)")
        else:
            out.append(f"{self.failed} OF {len(self.checks)} CHECKS FAILED")
        return out


def _cone_label(c: Cone) -> str:
    return "{" + ",".join(str(i) for i in c) + "}"


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _key_label(key) -> str:
    return f"b={_vec(key[0])} Q^{_vec(key[1])} x^{_vec(key[2])}"


# ---------------------------------------------------------------------------
# recursion coefficient


def recursion_coefficient(fan: StackyFan, pair: AdjacentPair, b: BoxElement, c) -> FactoredExpr:
    """RC(c) for the wall ``pair`` and ``b`` in Box(sigma), as a product of x-linear forms."""
    curve = curve_from_c(fan, pair, b, c)
    c = curve.c
    ws = fixed_point_weights(fan, pair.sigma)
    uj = ws[pair.j]
    b_hat = box_involution(fan, b)
    dim = fan.dim
    scalar = Fraction(1) / c
    raw = []
    for i in pair.sigma:
        if b.fracs[i] == 0:
            raw.append((chi_form(ws[i]), 1))
    fc, fcp = floor(c), floor(curve.c_prime)
    scalar *= c ** fc / factorial(fc)
    scalar *= (-c) ** fcp / factorial(fcp)
    raw.append((chi_form(uj), -(fc + fcp)))
    for i, ci in curve.c_wall:
        f = b_hat.fracs[i]
        ui = ws[i]
        if ci >= 0:
            # denominator keeps a in [0, c_i] with <a> = f
            a, side, stop = f, -1, ci
            vals = []
            while a <= stop:
                vals.append(a)
                a += 1
        else:
            # numerator keeps a in (c_i, 0) with <a> = f
            side = 1
            vals = []
            a = f - 1
            while a > ci:
                vals.append(a)
                a -= 1
        for av in vals:
            form = tuple(Fraction(x) - (av / c) * y for x, y in zip(ui, uj)) + (Fraction(0),)
            raw.append((form, side))
    return normalize(dim, scalar, raw)


def pole_form(weight: Sequence, c) -> tuple:
    """Coefficients of ``u + c z``."""
    return chi_form(weight, c)


# ---------------------------------------------------------------------------
# C1


def _explain_pole(fan, series, b, form, walls) -> tuple[bool, str]:
    """Is ``form`` proportional to ``u_j(sigma) + c z`` for an admissible (j, c)?"""
    ws = fixed_point_weights(fan, series.cone)
    b_hat = box_involution(fan, b)
    for j in walls:
        uj = ws[j]
        k = next(i for i, x in enumerate(uj) if x != 0)
        t = Fraction(form.chi[k]) / uj[k]
        if any(Fraction(x) != t * y for x, y in zip(form.chi, uj)):
            continue
        c = Fraction(form.z) / t
        if c > 0 and c - floor(c) == b_hat.fracs[j]:
            return True, f"j={j} c={c}"
    return False, ""


def check_c1(fan: StackyFan, ext: ExtendedData, cone: Cone, b: BoxElement, series: ISeries
             ) -> VerificationReport:
    rep = VerificationReport()
    walls = sorted({p.j for p in adjacent_pairs(fan) if p.sigma == series.cone})
    ident = f"C1 sigma={_cone_label(series.cone)} b={_vec(b.element)}"
    bad = None
    count = 0
    for key in series.keys(b):
        e = series.coefficient(key)
        for pole in classify_poles(e):
            if pole.at_zero:
                continue
            count += 1
            if pole.order != 1:
                bad = f"pole not simple at key {_key_label(key)}: order {pole.order} for ({pole.form.render(_names(fan))})"
                break
            ok, _ = _explain_pole(fan, series, b, pole.form, walls)
            if not ok:
                bad = f"unexpected pole ({pole.form.render(_names(fan))}) at key {_key_label(key)}"
                break
        if bad:
            break
    rep.add(ident, bad is None, bad or f"[{count} poles]")
    return rep


def _names(fan):
    from .linform import variable_names
    return variable_names(fan.dim)


# ---------------------------------------------------------------------------
# C2


def _eval_points(dim: int, seed: int, count: int = 3) -> list[tuple]:
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randint(-97, 97) or 1, rng.randint(1, 13)) for _ in range(dim))
            + (Fraction(0),) for _ in range(count)]


def check_c2(fan: StackyFan, ext: ExtendedData, pair: AdjacentPair, b: BoxElement, omega: Sequence,
             cutoff, series: dict | None = None, rc_factor=1, residue_sign: int = 1,
             key_shift: Sequence | None = None) -> VerificationReport:
    """Residue recursion for one wall and box element, every admissible c within the cutoff.

    ``series`` maps top cones to precomputed :class:`ISeries`.  ``rc_factor``,
    ``residue_sign`` and ``key_shift`` tamper with the identity and exist
    only for negative controls.
    """
    cutoff = Fraction(cutoff)
    series = series if series is not None else {}
    for c_ in (pair.sigma, pair.sigma_prime):
        if c_ not in series:
            series[c_] = iseries(fan, ext, c_, omega, cutoff)
    left, right = series[pair.sigma], series[pair.sigma_prime]
    ws = fixed_point_weights(fan, pair.sigma)
    uj = ws[pair.j]
    dim = fan.dim
    rep = VerificationReport()
    for c in admissible_c(fan, pair, b, omega, cutoff):
        ident = (f"C2 sigma={_cone_label(pair.sigma)} sigma'={_cone_label(pair.sigma_prime)} "
                 f"b={_vec(b.element)} c={c}")
        try:
            curve = curve_from_c(fan, pair, b, c)
            rc = scale(recursion_coefficient(fan, pair, b, c), rc_factor)
        except (CurveError, LinFormError) as exc:
            rep.add(ident, False, f"curve data failed: {exc}")
            continue
        l = curve.degree
        shift = tuple(l) if key_shift is None else tuple(x + y for x, y in zip(l, key_shift))
        target = [-x / c for x in uj]
        pole = pole_form(uj, c)
        lhs_keys = set(left.keys(b))
        rhs_keys = {(b.element, tuple(x + y for x, y in zip(k[1], shift)), k[2])
                    for k in right.keys(curve.b_prime)}
        compared = 0
        bad = None
        for key in sorted(lhs_keys | rhs_keys):
            lkey = key
            rkey = (curve.b_prime.element, tuple(x - y for x, y in zip(key[1], shift)), key[2])
            if key not in lhs_keys:
                rdeg = right.terms[rkey][0]
                if rdeg.omega_degree + sum(w * x for w, x in zip(omega, l)) > cutoff:
                    continue
            try:
                lhs = residue_at(left.coefficient(lkey), pole)
                if residue_sign != 1:
                    lhs = scale(lhs, residue_sign)
            except LinFormError as exc:
                bad = f"residue failed at {_key_label(lkey)}: {exc}"
                break
            try:
                rhs = rc * substitute_z(right.coefficient(rkey), target)
            except PoleHit as exc:
                bad = f"substitution hits a pole of the sigma' coefficient at {_key_label(rkey)}: {exc}"
                break
            compared += 1
            if lhs != rhs:
                bad = f"at {_key_label(lkey)}: LHS={lhs.render()} RHS={rhs.render()}"
                break
            for pt in _eval_points(dim, seed=compared):
                try:
                    if evaluate(lhs, pt) != evaluate(rhs, pt):
                        bad = f"evaluation mismatch at {_key_label(lkey)} point {pt}"
                except EvalPole:
                    pass
            if bad:
                break
        rep.add(ident, bad is None, bad or f"[{compared} keys, b'={_vec(curve.b_prime.element)}]")
    return rep


# ---------------------------------------------------------------------------
# restriction identity


def check_restriction(fan: StackyFan, ext: ExtendedData, cone: Cone, omega: Sequence, cutoff,
                      series: ISeries | None = None,
                      perturb: Callable[[dict], dict] | None = None) -> VerificationReport:
    rep = VerificationReport()
    rep.notes.append("C3: partial (parameterization identity only)")
    cone = tuple(sorted(cone))
    ident = f"RESTRICTION sigma={_cone_label(cone)}"
    series = series or iseries(fan, ext, cone, omega, cutoff)
    try:
        other = iseries_restriction_form(fan, ext, cone, omega, cutoff, perturb)
    except (AssertionError, KeyError, ValueError) as exc:
        rep.add(ident, False, f"restriction form failed: {exc}")
        return rep
    bad = None
    for key in sorted(set(series.terms) | set(other.terms)):
        a, b_ = series.coefficient(key), other.coefficient(key)
        if a != b_:
            bad = f"at {_key_label(key)}: I={a.render()} restriction={b_.render()}"
            break
    rep.add(ident, bad is None, bad or f"[{len(series.terms)} coefficients]")

    # coefficients with empty cone-side products are exactly those of J_BN(sigma)
    jid = f"JBG sigma={_cone_label(cone)}"
    quo = fan.cone_quotient(cone)
    off = [i for i in range(ext.size) if i not in cone]
    gens = [quo.projection(ext.ray(i)) for i in off]
    terms = restriction_terms(fan, ext, cone, omega, cutoff, perturb)
    jb = jfun_bg(quo.group, gens, cutoff=max(sum(t.free) for t in terms), dim=fan.dim)
    bad = None
    checked = 0
    lead = jb.get((quo.group.zero(), (0,) * len(off)))
    if lead != normalize(fan.dim, -1, [((0,) * fan.dim + (1,), 1)]):
        bad = "J-function of BG does not start with -z"
    for t in terms:
        if bad:
            break
        if all(-1 < t.lam[j] <= 0 for j in cone):
            want = jb.get((t.label, t.free))
            checked += 1
            if want != t.minus_z:
                bad = f"at lam={_vec(t.free)}: restriction={t.minus_z.render()} J_BG={want.render() if want else None}"
    rep.add(jid, bad is None, bad or f"[{checked} coefficients]")
    return rep


# ---------------------------------------------------------------------------
# wall identities and the degree shift


def check_wall_identities(fan: StackyFan, pair: AdjacentPair, c=1) -> VerificationReport:
    """``u_i(sigma) = u_i(sigma') + (c_i/c) u_j(sigma)`` for every ray, and the tangent weights.

    At ``i = j'`` the first identity says ``u_j(sigma)/c = -u_j'(sigma')/c'``:
    the two ends of the wall curve carry opposite weights.
    """
    rep = VerificationReport()
    ident = f"WALL sigma={_cone_label(pair.sigma)} sigma'={_cone_label(pair.sigma_prime)}"
    c = Fraction(c)
    deg = tuple(c * x for x in unit_degree(fan, pair))
    ws, wsp = fixed_point_weights(fan, pair.sigma), fixed_point_weights(fan, pair.sigma_prime)
    zero_w = (Fraction(0),) * fan.dim

    def u(system, cone, i):
        return tuple(system[i]) if i in cone else zero_w

    uj = ws[pair.j]
    bad = None
    for i in range(fan.n):
        lhs = u(ws, pair.sigma, i)
        rhs = tuple(a + deg[i] / c * b for a, b in zip(u(wsp, pair.sigma_prime, i), uj))
        if lhs != rhs:
            bad = f"weight difference fails at ray {i}: {_vec(lhs)} != {_vec(rhs)}"
            break
    if bad is None:
        cp = deg[pair.j_prime]
        left = tuple(x / c for x in uj)
        right = tuple(-x / cp for x in wsp[pair.j_prime])
        if left != right:
            bad = f"tangent weights not opposite: {_vec(left)} vs {_vec(right)}"
    rep.add(ident, bad is None, bad or "")
    return rep


def _in_domain(ext: ExtendedData, lam) -> bool:
    """Does ``lam`` have nonnegative integral coordinates off some top cone?"""
    for cone in ext.fan.top_cones:
        if all(lam[i].denominator == 1 and lam[i] >= 0 for i in range(ext.size) if i not in cone):
            return True
    return False


def check_bijection(fan: StackyFan, ext: ExtendedData, pair: AdjacentPair, b: BoxElement,
                    omega: Sequence, cutoff) -> VerificationReport:
    """``lam' -> lam' + l(c)`` maps the b'-degrees onto the b-degrees, truncated.

    With ``w = omega . l(c)`` the check is exact set equality between the
    shifted b'-degrees of degree <= cutoff and the b-degrees of degree
    <= cutoff + w whose unshifted preimage is enumerable; every image and
    every preimage must also carry the expected box element.
    """
    from .extension import enumerate_lambda, reduction

    cutoff = Fraction(cutoff)
    rep = VerificationReport()
    low = enumerate_lambda(ext, omega, cutoff)
    low_all = {d.lam for ds in low.values() for d in ds}
    for c in admissible_c(fan, pair, b, omega, cutoff):
        ident = (f"BIJECTION sigma={_cone_label(pair.sigma)} sigma'={_cone_label(pair.sigma_prime)} "
                 f"b={_vec(b.element)} c={c}")
        curve = curve_from_c(fan, pair, b, c)
        shift = tuple(curve.degree) + (Fraction(0),) * ext.m
        w = sum(Fraction(x) * y for x, y in zip(omega, curve.degree))
        high = enumerate_lambda(ext, omega, cutoff + w)
        source = [d.lam for d in low.get(curve.b_prime, [])]
        image = {tuple(x + y for x, y in zip(lam, shift)) for lam in source}
        bad = None
        for lam in sorted(image):
            if reduction(ext, lam) != b:
                bad = f"{_vec(lam)} lands in box {reduction(ext, lam).label()}"
                break
        target = set()
        for d in high.get(b, []):
            pre = tuple(x - y for x, y in zip(d.lam, shift))
            if pre in low_all:
                target.add(d.lam)
                if bad is None and reduction(ext, pre) != curve.b_prime:
                    bad = f"preimage {_vec(pre)} is not in box {curve.b_prime.label()}"
        if bad is None:
            image_in = {lam for lam in image if _in_domain(ext, lam)}
            diff = sorted(image_in ^ target)
            if diff:
                bad = f"sets differ at {_vec(diff[0])}"
        rep.add(ident, bad is None, bad or f"[{len(target)} degrees]")
    return rep


# ---------------------------------------------------------------------------
# aggregate


ALL_CHECKS = ("c1", "c2", "restriction")


def compute_all_series(fan: StackyFan, ext: ExtendedData, omega, cutoff, jobs: int = 1) -> dict:
    return {c: iseries(fan, ext, c, omega, cutoff, jobs=jobs) for c in fan.top_cones}


def verify_all(fan: StackyFan, ext: ExtendedData, omega: Sequence, cutoff,
               checks: Iterable[str] = ALL_CHECKS, jobs: int = 1) -> VerificationReport:
    checks = set(checks)
    rep = VerificationReport()
    rep.notes.append("orientation: poles of I(z) at z = -u_j(sigma)/c; "
                     "Res I_(sigma,b) = Q^l RC I_(sigma',b')|z=-u_j(sigma)/c")
    series = compute_all_series(fan, ext, omega, cutoff, jobs)
    for c in fan.top_cones:
        rep.add(f"LEAD sigma={_cone_label(c)}", leading_term_ok(series[c]),
                "" if leading_term_ok(series[c]) else "zero-key coefficient is not z")
    if "c1" in checks:
        for c in fan.top_cones:
            for b in box(fan, c, include_faces=True):
                rep.extend(check_c1(fan, ext, c, b, series[c]))
    if "c2" in checks:
        for pair in adjacent_pairs(fan):
            for b in box(fan, pair.sigma, include_faces=True):
                rep.extend(check_c2(fan, ext, pair, b, omega, cutoff, series))
    if "restriction" in checks:
        for c in fan.top_cones:
            rep.extend(check_restriction(fan, ext, c, omega, cutoff, series[c]))
    return rep


__all__ = [
    "ALL_CHECKS", "Check", "VerificationReport", "check_bijection", "check_c1", "check_c2",
    "check_restriction", "check_wall_identities", "compute_all_series", "recursion_coefficient",
    "verify_all",
]
