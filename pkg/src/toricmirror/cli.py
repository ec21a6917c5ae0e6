"""Command line front end: strict input parsing, command dispatch and the example corpus."""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactlin import FgAbelianGroup, LinAlgError
from .extension import ExtensionError, extend
from .ifun import iseries
from .stackyfan import (
    FanError,
    StackyFan,
    affine_quotient,
    all_box_elements,
    check_kahler,
    fixed_point_weights,
    football,
    mori_generators,
    product,
    validate,
    weighted_projective,
)
from .verify import ALL_CHECKS, verify_all

FIELDS = ("rank", "torsion", "rays", "max_cones", "extension", "kahler", "cutoff")
REQUIRED = ("rank", "rays", "max_cones")
DEFAULT_CUTOFF = Fraction(3)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message, self.line, self.column = message, line, column
        super().__init__(f"{message} (line {line}, column {column})" if line else message)


class InputError(ValueError):
    pass


@dataclass
class InputDoc:
    rank: int
    rays: list
    max_cones: list
    torsion: list = field(default_factory=list)
    extension: list = field(default_factory=list)
    kahler: list | None = None
    cutoff: Fraction | None = None

    def fan(self) -> StackyFan:
        return StackyFan(FgAbelianGroup(self.rank, tuple(self.torsion)), self.rays, self.max_cones)

    def to_text(self) -> str:
        def enc(x):
            if isinstance(x, Fraction):
                return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
            if isinstance(x, list):
                return [enc(y) for y in x]
            return x

        parts = [("rank", self.rank), ("torsion", self.torsion), ("rays", self.rays),
                 ("max_cones", self.max_cones), ("extension", self.extension)]
        if self.kahler is not None:
            parts.append(("kahler", self.kahler))
        if self.cutoff is not None:
            parts.append(("cutoff", self.cutoff))
        body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(enc(v))}" for k, v in parts)
        return "{\n" + body + "\n}\n"


# ---------------------------------------------------------------------------
# parsing


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    return line, offset - (text.rfind("\n", 0, offset) + 1) + 1


_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|[A-Za-z]+|\S')


def _tokens(text: str):
    for m in _TOKEN.finditer(text):
        yield m.group(), m.start()


def _first_offset(text: str, pred) -> int:
    for tok, off in _tokens(text):
        if pred(tok):
            return off
    return 0


def _key_offset(text: str, key: str, nth: int = 1) -> int:
    want, seen = json.dumps(key), 0
    toks = list(_tokens(text))
    for idx, (tok, off) in enumerate(toks):
        if tok == want and idx + 1 < len(toks) and toks[idx + 1][0] == ":":
            seen += 1
            if seen == nth:
                return off
    return 0


def _fail(text: str, message: str, offset: int) -> ParseError:
    return ParseError(message, *_position(text, offset))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_rational(x, what: str) -> Fraction:
    if _is_int(x):
        return Fraction(x)
    if isinstance(x, str):
        m = re.fullmatch(r"\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?", x)
        if m and (m.group(2) is None or int(m.group(2)) != 0):
            return Fraction(int(m.group(1)), int(m.group(2) or 1))
    raise InputError(f"{what}: invalid rational {json.dumps(x)}")


def parse(text: str) -> InputDoc:
    dup: list[str] = []

    def pairs(items):
        out = {}
        for k, v in items:
            if k in out and not dup:
                dup.append(k)
            out[k] = v
        return out

    def no_float(s):
        raise InputError(f"floating point literal {s} is not allowed; use \"p/q\"")

    def no_const(s):
        raise InputError(f"literal {s} is not allowed")

    try:
        data = json.loads(text, object_pairs_hook=pairs, parse_float=no_float, parse_constant=no_const)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except InputError as exc:
        off = _first_offset(text, lambda t: bool(re.fullmatch(r"-?\d+[.eE].*", t))
                            or t in ("NaN", "Infinity"))
        raise _fail(text, str(exc), off) from None
    if dup:
        raise _fail(text, f"duplicate key {json.dumps(dup[0])}", _key_offset(text, dup[0], 2))
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", 1, 1)
    for k in data:
        if k not in FIELDS:
            raise _fail(text, f"unknown field {json.dumps(k)}", _key_offset(text, k))
    for k in REQUIRED:
        if k not in data:
            raise ParseError(f"missing field {json.dumps(k)}", 1, 1)

    def where(k):
        return _key_offset(text, k)

    def int_list(v, what, k):
        if not isinstance(v, list) or not all(_is_int(x) for x in v):
            raise _fail(text, f"{what} must be a list of integers", where(k))
        return list(v)

    rank = data["rank"]
    if not _is_int(rank) or rank < 0:
        raise _fail(text, "rank must be a nonnegative integer", where("rank"))
    torsion = int_list(data.get("torsion", []), "torsion", "torsion")
    if any(t < 2 for t in torsion):
        raise _fail(text, "torsion moduli must be at least 2", where("torsion"))
    width = rank + len(torsion)
    rays = data["rays"]
    if not isinstance(rays, list) or not rays:
        raise _fail(text, "rays must be a nonempty list", where("rays"))
    for i, r in enumerate(rays):
        int_list(r, f"ray {i}", "rays")
        if len(r) != width:
            raise _fail(text, f"ray {i} has length {len(r)}, expected {width}", where("rays"))
    cones = data["max_cones"]
    if not isinstance(cones, list) or not cones:
        raise _fail(text, "max_cones must be a nonempty list", where("max_cones"))
    for i, c in enumerate(cones):
        int_list(c, f"cone {i}", "max_cones")
        if any(x < 0 or x >= len(rays) for x in c) or len(set(c)) != len(c):
            raise _fail(text, f"cone {i} has an invalid ray index", where("max_cones"))
    ext = data.get("extension", [])
    if not isinstance(ext, list):
        raise _fail(text, "extension must be a list", where("extension"))
    for j, s in enumerate(ext):
        int_list(s, f"extension element {j}", "extension")
        if len(s) != width:
            raise _fail(text, f"extension element {j} has length {len(s)}, expected {width}",
                        where("extension"))
    kahler = None
    if "kahler" in data:
        if not isinstance(data["kahler"], list) or len(data["kahler"]) != len(rays):
            raise _fail(text, f"kahler must be a list of {len(rays)} rationals", where("kahler"))
        try:
            kahler = [parse_rational(x, f"kahler[{i}]") for i, x in enumerate(data["kahler"])]
        except InputError as exc:
            raise _fail(text, str(exc), where("kahler")) from None
    cutoff = None
    if "cutoff" in data:
        try:
            cutoff = parse_rational(data["cutoff"], "cutoff")
        except InputError as exc:
            raise _fail(text, str(exc), where("cutoff")) from None
        if cutoff < 0:
            raise _fail(text, "cutoff must be nonnegative", where("cutoff"))
    return InputDoc(rank, [list(r) for r in rays], [list(c) for c in cones], torsion,
                    [list(s) for s in ext], kahler, cutoff)


# ---------------------------------------------------------------------------
# examples


def _example_fan(name: str, args: list[str]) -> tuple[StackyFan, list]:
    ints = []
    try:
        if name == "p1":
            if args:
                raise InputError("p1 takes no arguments")
            fan = weighted_projective(1, 1)
            return fan, [1, 0]
        if name == "wp":
            ints = [int(a) for a in args]
            fan = weighted_projective(*ints)
            return fan, [1] + [0] * (fan.n - 1)
        if name == "football":
            ints = [int(a) for a in args]
            if len(ints) != 2:
                raise InputError("football takes two orders")
            fan = football(*ints)
            return fan, [1, 0]
        if name == "affine-quotient":
            rays = [[int(x) for x in a.split(",")] for a in args]
            fan = affine_quotient(rays)
            return fan, [0] * fan.n
        if name == "product":
            if "x" not in args:
                raise InputError("product needs two factors separated by 'x'")
            k = args.index("x")
            fa, oa = _example_fan(args[0], args[1:k]) if k else (None, None)
            if fa is None or k + 1 >= len(args):
                raise InputError("product needs two factors")
            fb, ob = _example_fan(args[k + 1], args[k + 2:])
            return product(fa, fb), oa + ob
    except ValueError as exc:
        raise InputError(f"example {name}: {exc}") from None
    raise InputError(f"unknown example {name!r}; choose from p1, wp, football, affine-quotient, product")


def example_doc(name: str, args: Sequence[str], with_box: bool = False) -> InputDoc:
    fan, omega = _example_fan(name, list(args))
    if not check_kahler(fan, omega):
        raise InputError(f"example {name}: no default Kahler class")
    S = [list(b.element) for b in all_box_elements(fan) if not b.is_zero] if with_box else []
    return InputDoc(fan.N.rank, [list(r) for r in fan.rays], [list(c) for c in fan.max_cones],
                    list(fan.N.torsion), S, [Fraction(w) for w in omega], DEFAULT_CUTOFF)


# ---------------------------------------------------------------------------
# commands


def _fmt(x) -> str:
    return str(Fraction(x))


def _vec(v) -> str:
    return "(" + ",".join(_fmt(x) for x in v) + ")"


def _cone(c) -> str:
    return "{" + ",".join(str(i) for i in c) + "}"


def _linear(coeffs) -> str:
    out = []
    for k, c in enumerate(coeffs):
        c = Fraction(c)
        if c == 0:
            continue
        mag = abs(c)
        body = f"x{k + 1}" if mag == 1 else f"{mag}*x{k + 1}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out) or "0"


def _checked_fan(doc: InputDoc) -> StackyFan:
    try:
        fan = doc.fan()
    except (FanError, LinAlgError) as exc:
        raise InputError(str(exc)) from None
    rep = validate(fan)
    if not rep.ok:
        raise InputError("invalid fan: " + "; ".join(m for _, _, m in rep.failures()))
    return fan


def _kahler(doc: InputDoc) -> list:
    if doc.kahler is None:
        raise InputError("this command needs a kahler class")
    return doc.kahler


def cmd_validate(doc: InputDoc, opts, out) -> int:
    try:
        fan = doc.fan()
    except (FanError, LinAlgError) as exc:
        raise InputError(str(exc)) from None
    rep = validate(fan)
    for line in rep.lines():
        print(line, file=out)
    if not rep.ok:
        raise InputError("invalid fan: " + "; ".join(m for _, _, m in rep.failures()))
    if doc.extension:
        extend(fan, doc.extension)
    if doc.kahler is not None and not check_kahler(fan, doc.kahler):
        raise InputError("kahler class is not positive on the Mori cone")
    print("VALID", file=out)
    return 0


def cmd_box(doc: InputDoc, opts, out) -> int:
    fan = _checked_fan(doc)
    elems = all_box_elements(fan)
    for b in elems:
        print(f"b={b.label()} cone={_cone(b.cone)} fracs={_vec(b.fracs)} age={_fmt(b.age)}", file=out)
    print(f"{len(elems)} box elements", file=out)
    return 0


def cmd_weights(doc: InputDoc, opts, out) -> int:
    fan = _checked_fan(doc)
    for c in fan.top_cones:
        ws = fixed_point_weights(fan, c)
        body = ", ".join(f"u{i} = {_linear(ws[i])}" for i in c)
        print(f"sigma={_cone(c)}: {body}", file=out)
    return 0


def cmd_mori(doc: InputDoc, opts, out) -> int:
    fan = _checked_fan(doc)
    gens = mori_generators(fan)
    for g in gens:
        print(f"generator {_vec(g)}", file=out)
    if doc.kahler is not None:
        ok = check_kahler(fan, doc.kahler)
        print(f"kahler {_vec(doc.kahler)} {'positive' if ok else 'NOT positive'}", file=out)
        if not ok:
            return 2
    return 0


def _setup(doc: InputDoc, opts):
    fan = _checked_fan(doc)
    omega = _kahler(doc)
    try:
        ext = extend(fan, doc.extension)
    except ExtensionError as exc:
        raise InputError(str(exc)) from None
    cutoff = opts.cutoff if opts.cutoff is not None else (doc.cutoff if doc.cutoff is not None
                                                          else DEFAULT_CUTOFF)
    if not check_kahler(fan, omega):
        raise InputError("kahler class is not positive on the Mori cone")
    return fan, ext, omega, cutoff


def cmd_ifunction(doc: InputDoc, opts, out) -> int:
    fan, ext, omega, cutoff = _setup(doc, opts)
    cones = fan.top_cones
    if opts.sigma is not None:
        if not 0 <= opts.sigma < len(cones):
            raise InputError(f"--sigma must be between 0 and {len(cones) - 1}")
        cones = [cones[opts.sigma]]
    for c in cones:
        try:
            series = iseries(fan, ext, c, omega, cutoff, jobs=opts.jobs)
        except ExtensionError as exc:
            raise InputError(str(exc)) from None
        for line in series.render():
            print(line, file=out)
    return 0


def cmd_verify(doc: InputDoc, opts, out) -> int:
    fan, ext, omega, cutoff = _setup(doc, opts)
    checks = [c.strip() for c in opts.checks.split(",") if c.strip()]
    bad = [c for c in checks if c not in ALL_CHECKS]
    if bad:
        raise InputError(f"unknown check {bad[0]!r}; choose from {', '.join(ALL_CHECKS)}")
    try:
        rep = verify_all(fan, ext, omega, cutoff, checks, jobs=opts.jobs)
    except ExtensionError as exc:
        raise InputError(str(exc)) from None
    for line in rep.lines():
        print(line, file=out)
    return 0 if rep.ok else 1


COMMANDS = {
    "validate": cmd_validate,
    "box": cmd_box,
    "weights": cmd_weights,
    "mori": cmd_mori,
    "ifunction": cmd_ifunction,
    "verify": cmd_verify,
}


def _rational_arg(s: str) -> Fraction:
    try:
        return parse_rational(int(s) if re.fullmatch(r"-?\d+", s) else s, "cutoff")
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _jobs(s: str) -> int:
    k = int(s)
    if k < 1:
        raise argparse.ArgumentTypeError("--jobs must be positive")
    return k


def _command_parser(with_file: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricmirror", description=(
        "Equivariant I-functions of toric stacks and checks of their Lagrangian-cone conditions."))
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if with_file:
            sp.add_argument("file")
        if name in ("ifunction", "verify"):
            sp.add_argument("--cutoff", type=_rational_arg)
            sp.add_argument("--jobs", type=_jobs, default=1)
        if name == "ifunction":
            sp.add_argument("--sigma", type=int)
        if name == "verify":
            sp.add_argument("--checks", default=",".join(ALL_CHECKS))
    if with_file:
        ex = sub.add_parser("example", help="print or run a built-in example")
        ex.add_argument("name")
        ex.add_argument("args", nargs="*")
        ex.add_argument("--with-box", action="store_true",
                        help="extend by every nonzero box element")
    return p


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(argv)
    tail = None
    if argv and argv[0] == "example" and "--" in argv:
        k = argv.index("--")
        argv, tail = argv[:k], argv[k + 1:]
    try:
        opts = _command_parser(True).parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if opts.command == "example":
            doc = example_doc(opts.name, opts.args, opts.with_box)
            if tail is None:
                out.write(doc.to_text())
                return 0
            try:
                sub = _command_parser(False).parse_args(tail)
            except SystemExit as exc:
                return 0 if exc.code == 0 else 2
            return COMMANDS[sub.command](doc, sub, out)
        try:
            with open(opts.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {opts.file}: {exc.strerror}") from None
        doc = parse(text)
        return COMMANDS[opts.command](doc, opts, out)
    except (ParseError, InputError) as exc:
        print(f"error: {exc}", file=err)
        return 2


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
