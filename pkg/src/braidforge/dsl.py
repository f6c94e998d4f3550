"""Text syntax for factorizations.

    @ambient doubled 24          # or: base 5 / labels 1 2 3 3' 4 5
    @group phi3
    @provenance reconstructed
    Z2[3 3',9] Z3[1 1',9] Zbar3[9',21 21'] (Fu(16,3,1,21))_{Z2[3 3',9] Z2[1 1',9]}
    Z[1,4] det(2-2,above) ^{sigma(1,-2)}

Twist names are Z, Z2, Z3, Z4 (paths below the axis) and Zbar, Zbar2, Zbar3,
Zbar4 (above). An endpoint written as a pair ``3 3'`` expands by the
regeneration rules. A written product of motions ``A B`` is applied left to
right, so it is the braid word BA. ``^{A B}`` conjugates as (BA)^-1 X (BA) and
``_{A B}`` as (BA) X (BA)^-1.
``Fu(a,b,c,d)``, ``Fm``, ``Fl`` build the F blocks; ``C[j]``, ``phi[j]`` and
``b[n]`` are looked up in the resolver given to the parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .braid import BraidWord, product as word_product
from .disk import ABOVE, BELOW, Detour, PathError, PathSpec, PunctureSet, label
from .factorization import Factor, Factorization
from . import regeneration as regen


class DSLError(ValueError):
    def __init__(self, msg: str, text: str = "", pos: int = 0):
        if text:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            msg = f"line {line}, column {col}: {msg}"
        super().__init__(msg)


TWISTS = {
    "Z": (BELOW, 1), "Z2": (BELOW, 2), "Z3": (BELOW, 3), "Z4": (BELOW, 4),
    "Zbar": (ABOVE, 1), "Zbar2": (ABOVE, 2), "Zbar3": (ABOVE, 3), "Zbar4": (ABOVE, 4),
}
MACROS = {"Fu": "u", "Fm": "m", "Fl": "l"}
REFS = ("C", "phi", "b")

Resolver = Callable[[str, int], Sequence[Factor]]

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_INT = re.compile(r"-?\d+")
_LABEL = re.compile(r"\d+'?")


@dataclass
class _State:
    ambient: PunctureSet | None = None
    group: str = ""
    provenance: str = "given"


class _Parser:
    def __init__(self, text: str, resolver: Resolver | None, state: _State):
        self.text = text
        self.pos = 0
        self.resolver = resolver
        self.state = state

    # -- low level
    def error(self, msg, pos=None):
        raise DSLError(msg, self.text, self.pos if pos is None else pos)

    def skip_ws(self, newlines=False):
        t = self.text
        while self.pos < len(t):
            ch = t[self.pos]
            if ch in " \t\r" or (newlines and ch == "\n"):
                self.pos += 1
            elif ch == "#":
                while self.pos < len(t) and t[self.pos] != "\n":
                    self.pos += 1
            else:
                break

    def peek(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        self.skip_ws()
        if not self.peek(s):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def match(self, rx) -> str | None:
        m = rx.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group(0)

    def label(self) -> str:
        self.skip_ws()
        lab = self.match(_LABEL)
        if lab is None:
            self.error("expected a puncture label")
        return lab

    @property
    def K(self) -> PunctureSet:
        if self.state.ambient is None:
            self.error("no @ambient declared")
        return self.state.ambient

    def check_label(self, lab: str, pos: int):
        if lab not in self.K:
            self.error(f"label {lab} out of range", pos)

    # -- grammar
    def product(self, closers: str) -> list:
        """Sequence of terms until one of `closers` (or end of line at top level)."""
        items = []
        while True:
            self.skip_ws(newlines=bool(closers))
            if self.pos >= len(self.text):
                break
            ch = self.text[self.pos]
            if ch in closers or (not closers and ch == "\n"):
                break
            if ch in "·*":
                self.pos += 1
                continue
            items.append(self.term())
        return items

    def term(self):
        start = self.pos
        kind, val = self.primary()
        while True:
            self.skip_ws()
            if self.peek("det("):
                self.error("detours must directly follow the twist they modify")
            elif self.peek("^{") or self.peek("_{"):
                sup = self.peek("^{")
                self.pos += 2
                inner = self.product("}")
                self.expect("}")
                w = self.as_motion(inner)
                if kind == "word":
                    val = w.inverse() * val * w if sup else w * val * w.inverse()
                else:
                    val = regen.sup(val, w) if sup else regen.sub(val, w)
            elif self.peek("^"):
                self.pos += 1
                e = self.match(_INT)
                if e is None:
                    self.error("expected an integer power")
                kind, val = "word", self.as_word([(kind, val)]) ** int(e)
            else:
                break
        return kind, val

    def detours(self) -> list[Detour]:
        out = []
        while True:
            self.skip_ws()
            if not self.peek("det("):
                return out
            self.pos += 4
            p0 = self.pos
            lo = self.label()
            self.expect("-")
            hi = self.label()
            self.check_label(lo, p0)
            self.check_label(hi, p0)
            self.expect(",")
            self.skip_ws()
            side = self.match(_NAME)
            if side not in (ABOVE, BELOW):
                self.error("detour side must be above or below")
            self.expect(")")
            out.append(Detour(lo, hi, side))

    def endpoint(self) -> tuple[str, ...]:
        p0 = self.pos
        labs = [self.label()]
        self.skip_ws()
        if self.text[self.pos:self.pos + 1].isdigit():
            labs.append(self.label())
            if labs[1] != labs[0] + "'":
                self.error("a doubled endpoint is written i i'", p0)
        for lab in labs:
            self.check_label(lab, p0)
        return tuple(labs)

    def primary(self):
        self.skip_ws()
        p0 = self.pos
        if self.peek("("):
            self.pos += 1
            inner = self.product(")")
            self.expect(")")
            if inner and all(k == "factors" for k, _ in inner):
                return "factors", [f for _, fs in inner for f in fs]
            return "word", self.as_word(inner)
        name = self.match(_NAME)
        if name is None:
            self.error("expected a factor")
        if name in TWISTS:
            side, e = TWISTS[name]
            self.expect("[")
            i = self.endpoint()
            self.expect(",")
            j = self.endpoint()
            self.expect("]")
            return "factors", self.twist(side, e, i, j, tuple(self.detours()), p0)
        if name == "Delta2":
            self.expect("[")
            labs = [self.label()]
            while True:
                self.skip_ws()
                if self.peek(","):
                    self.pos += 1
                    labs.append(self.label())
                else:
                    break
            self.expect("]")
            for lab in labs:
                self.check_label(lab, p0)
            f = Factor(None, 2, BraidWord.identity(self.K.size), self.K, self.state.group, tuple(labs))
            return "factors", [f]
        if name == "sigma":
            self.expect("(")
            xs = []
            while True:
                self.skip_ws()
                v = self.match(_INT)
                if v is None:
                    self.error("expected a generator index")
                xs.append(int(v))
                self.skip_ws()
                if self.peek(","):
                    self.pos += 1
                    continue
                break
            self.expect(")")
            try:
                return "word", BraidWord(self.K.size, tuple(xs))
            except ValueError as exc:
                self.error(str(exc), p0)
        if name in MACROS:
            self.expect("(")
            args = [self.label()]
            while True:
                self.skip_ws()
                if self.peek(","):
                    self.pos += 1
                    args.append(self.label())
                else:
                    break
            self.expect(")")
            if len(args) != 4:
                self.error(f"{name} takes four labels", p0)
            try:
                fs = regen.build_F(MACROS[name], *args, K=self.K).factors
            except (regen.RegenerationError, PathError) as exc:
                self.error(str(exc), p0)
            return "factors", [f.with_group(self.state.group) for f in fs]
        if name in REFS:
            self.expect("[")
            self.skip_ws()
            v = self.match(_INT)
            if v is None:
                self.error("expected an index")
            self.expect("]")
            if self.resolver is None:
                self.error(f"no dataset available to expand {name}[{v}]", p0)
            try:
                fs = list(self.resolver(name, int(v)))
            except KeyError:
                self.error(f"unknown block {name}[{v}]", p0)
            return "factors", fs
        self.error(f"unknown name {name}", p0)

    def twist(self, side, e, i, j, dets, p0):
        K, g, prov = self.K, self.state.group, self.state.provenance
        try:
            if len(i) == 1 and len(j) == 1:
                fs = regen.twist(i[0], j[0], e, K, side, dets, prov)
            elif e == 2:
                fs = regen.node(i, j, K, side, dets, prov)
            elif e == 3:
                fs = regen.cusp(i, j, K, side, dets, prov)
            else:
                self.error("only Z2 and Z3 accept a doubled endpoint", p0)
            for f in fs:
                f.base_word
        except (PathError, regen.RegenerationError) as exc:
            self.error(str(exc), p0)
        return [f.with_group(g) for f in fs]

    def as_motion(self, items) -> BraidWord:
        """Motions pushed in written order; the last one ends up outermost."""
        words = []
        for kind, val in items:
            if kind == "word":
                words.append(val)
            else:
                words.extend(f.word for f in val)
        return word_product(words[::-1], self.K.size)

    def as_word(self, items) -> BraidWord:
        words = []
        for kind, val in items:
            if kind == "word":
                words.append(val)
            else:
                words.extend(f.word for f in val)
        return word_product(words, self.K.size)


def _ambient_from(spec: str) -> PunctureSet:
    parts = spec.split()
    if not parts:
        raise DSLError("empty @ambient")
    if parts[0] == "doubled" and len(parts) == 2:
        return PunctureSet.doubled_range(int(parts[1]))
    if parts[0] == "base" and len(parts) == 2:
        return PunctureSet.base(int(parts[1]))
    if parts[0] == "labels":
        return PunctureSet(tuple(parts[1:]))
    raise DSLError(f"bad @ambient {spec!r}")


def parse_dsl(text: str, resolver: Resolver | None = None, ambient: PunctureSet | None = None,
              group: str = "") -> Factorization:
    state = _State(ambient, group)
    factors: list[Factor] = []
    offset = 0
    for raw in text.split("\n"):
        stripped = raw.strip()
        if stripped.startswith("@"):
            key, _, rest = stripped[1:].partition(" ")
            rest = rest.split("#", 1)[0].strip()
            if key == "ambient":
                state.ambient = _ambient_from(rest)
            elif key == "group":
                state.group = rest
            elif key == "provenance":
                state.provenance = rest or "given"
            else:
                raise DSLError(f"unknown directive @{key}", text, offset)
        elif stripped and not stripped.startswith("#"):
            p = _Parser(text, resolver, state)
            p.pos = offset
            end = offset + len(raw)
            items = p.product("")
            if p.pos != end:
                p.error("a statement must fit on one line")
            for kind, val in items:
                if kind != "factors":
                    raise DSLError("a bare braid word is not a factor", text, offset)
                factors.extend(val)
        offset += len(raw) + 1
    if state.ambient is None:
        raise DSLError("no @ambient declared")
    return Factorization(state.ambient, tuple(factors))


# ---------------------------------------------------------------------------
# printing


def _ambient_line(K: PunctureSet) -> str:
    n = K.size
    if K == PunctureSet.base(n):
        return f"@ambient base {n}"
    if n % 2 == 0 and K == PunctureSet.doubled_range(n // 2):
        return f"@ambient doubled {n // 2}"
    return "@ambient labels " + " ".join(K.labels)


def format_factor(f: Factor) -> str:
    if f.support:
        s = "Delta2[" + ",".join(f.support) + "]"
    else:
        p = f.path
        name = ("Zbar" if p.side == ABOVE else "Z") + ("" if f.exponent == 1 else str(f.exponent))
        s = f"{name}[{p.start},{p.end}]"
        for d in p.detours:
            s += f" det({d.lo}-{d.hi},{d.side})"
    if len(f.conjugator):
        s += " ^{sigma(" + ",".join(map(str, f.conjugator.letters)) + ")}"
    return s


def print_factorization(f: Factorization) -> str:
    lines = [_ambient_line(f.ambient)]
    group, prov = "", "given"
    for fac in f.factors:
        if fac.group != group:
            group = fac.group
            lines.append(f"@group {group}")
        fprov = fac.path.provenance if fac.path is not None else prov
        if fprov != prov:
            prov = fprov
            lines.append(f"@provenance {prov}")
        lines.append(format_factor(fac))
    return "\n".join(lines) + "\n"
