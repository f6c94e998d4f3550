"""The punctured disk model and compilation of axis paths into half-twists.

Punctures sit on the real axis. A path between two punctures runs along the
axis and passes each puncture strictly between its endpoints either below or
above it. A path from position a to position b (a < b) compiles to

    W^-1 sigma_a W,   W = prod_{j=a+1}^{b-1} sigma_j^{s_j}

with s_j = -1 when the path passes below puncture j and s_j = +1 above it. For
an all-below path this is sigma_{b-1}...sigma_{a+1} sigma_a sigma_{a+1}^-1...sigma_{b-1}^-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Sequence

from .braid import BraidWord, conjugate, degree, normal_form, permutation_of, power

BELOW = "below"
ABOVE = "above"
SIDES = (BELOW, ABOVE)


class PathError(ValueError):
    pass


def label(x) -> str:
    """Normalize a puncture label: 3 -> '3', "3'" stays."""
    s = str(x).strip()
    if not s:
        raise PathError("empty label")
    return s


def base_of(lab: str) -> str:
    return lab.rstrip("'")


def is_primed(lab: str) -> bool:
    return lab.endswith("'")


def prime(lab) -> str:
    lab = label(lab)
    if is_primed(lab):
        raise PathError(f"label {lab} is already primed")
    return lab + "'"


@dataclass(frozen=True)
class PunctureSet:
    labels: tuple[str, ...]

    def __post_init__(self):
        labs = tuple(label(x) for x in self.labels)
        if len(set(labs)) != len(labs):
            raise PathError("duplicate puncture labels")
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "_pos", {lab: i for i, lab in enumerate(labs, 1)})

    @classmethod
    def base(cls, n: int) -> "PunctureSet":
        return cls(tuple(str(i) for i in range(1, n + 1)))

    @classmethod
    def doubled_range(cls, n: int) -> "PunctureSet":
        return double(cls.base(n))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def is_doubled(self) -> bool:
        return any(is_primed(x) for x in self.labels)

    def position(self, lab) -> int:
        lab = label(lab)
        try:
            return self._pos[lab]
        except KeyError:
            raise PathError(f"label {lab} is not a puncture of this model") from None

    def __contains__(self, lab):
        return label(lab) in self._pos

    def label_at(self, pos: int) -> str:
        return self.labels[pos - 1]


def double(K: PunctureSet) -> PunctureSet:
    if K.is_doubled:
        raise PathError("puncture set is already doubled")
    labs: list[str] = []
    for lab in K.labels:
        labs.extend((lab, lab + "'"))
    return PunctureSet(tuple(labs))


@dataclass(frozen=True)
class Detour:
    """Punctures from label lo to label hi (inclusive, by position) are passed on `side`."""

    lo: str
    hi: str
    side: str

    def __post_init__(self):
        object.__setattr__(self, "lo", label(self.lo))
        object.__setattr__(self, "hi", label(self.hi))
        if self.side not in SIDES:
            raise PathError(f"unknown side {self.side}")


@dataclass(frozen=True)
class PathSpec:
    start: str
    end: str
    side: str = BELOW
    detours: tuple[Detour, ...] = ()
    provenance: str = "given"

    def __post_init__(self):
        object.__setattr__(self, "start", label(self.start))
        object.__setattr__(self, "end", label(self.end))
        if self.start == self.end:
            raise PathError("path endpoints must differ")
        if self.side not in SIDES:
            raise PathError(f"unknown side {self.side}")
        object.__setattr__(self, "detours", tuple(self.detours))

    def reversed(self) -> "PathSpec":
        return PathSpec(self.end, self.start, self.side, self.detours, self.provenance)

    def with_detours(self, extra: Iterable[Detour]) -> "PathSpec":
        return PathSpec(self.start, self.end, self.side, self.detours + tuple(extra), self.provenance)


def path(a, b, side=BELOW, detours: Sequence[tuple] = (), provenance="given") -> PathSpec:
    """Shorthand: path(1, 4, 'below', [(2, 2, 'above')])."""
    dets = tuple(d if isinstance(d, Detour) else Detour(*d) for d in detours)
    return PathSpec(a, b, side, dets, provenance)


def sides_of(p: PathSpec, K: PunctureSet) -> dict[int, str]:
    """Side taken at each intermediate position, after resolving detours."""
    a, b = sorted((K.position(p.start), K.position(p.end)))
    sides = {j: p.side for j in range(a + 1, b)}
    spans = []
    for d in p.detours:
        lo, hi = sorted((K.position(d.lo), K.position(d.hi)))
        if lo <= a or hi >= b:
            raise PathError(f"detour {d.lo}-{d.hi} is not strictly between the endpoints of {p.start}->{p.end}")
        spans.append((lo, hi, d.side))
    # a partial overlap with opposite sides has no consistent reading
    for i, (l1, h1, s1) in enumerate(spans):
        for l2, h2, s2 in spans[i + 1:]:
            overlap = not (h1 < l2 or h2 < l1)
            nested = (l1 <= l2 and h2 <= h1) or (l2 <= l1 and h1 <= h2)
            if overlap and not nested and s1 != s2:
                raise PathError("detours overlap with conflicting sides; path is not simple")
    # widest first, so nested (inner) detours win
    for lo, hi, s in sorted(spans, key=lambda t: -(t[1] - t[0])):
        for j in range(lo, hi + 1):
            sides[j] = s
    return sides


@dataclass(frozen=True)
class HalfTwist:
    path: PathSpec
    word: BraidWord
    ambient: PunctureSet


def transport_word(p: PathSpec, K: PunctureSet) -> tuple[int, BraidWord]:
    """Return (a, W) with the compiled half-twist equal to W^-1 sigma_a W."""
    a, b = sorted((K.position(p.start), K.position(p.end)))
    sides = sides_of(p, K)
    letters = tuple(j if sides[j] == ABOVE else -j for j in range(a + 1, b))
    return a, BraidWord(K.size, letters)


def compile_path(p: PathSpec, K: PunctureSet) -> HalfTwist:
    a, W = transport_word(p, K)
    word = conjugate(BraidWord(K.size, (a,)), W)
    return HalfTwist(p, word, K)


def lift_path(p: PathSpec, K: PunctureSet | None = None) -> PathSpec:
    """Re-read a base path over the doubled set; detours widen to cover primed partners."""
    dets = []
    for d in p.detours:
        hi = d.hi if is_primed(d.hi) else d.hi + "'"
        dets.append(Detour(d.lo, hi, d.side))
    return PathSpec(p.start, p.end, p.side, tuple(dets), p.provenance)


def identify_path(word: BraidWord, K: PunctureSet, endpoints: tuple | None = None) -> PathSpec | None:
    """Find an axis path whose half-twist equals `word`, or None.

    Brute force over the side patterns; only meant for small models.
    """
    if degree(word) != 1:
        return None
    perm = permutation_of(word)
    moved = [p for p in range(1, K.size + 1) if perm(p) != p]
    if len(moved) != 2:
        return None
    a, b = moved
    target = normal_form(word)
    mids = list(range(a + 1, b))
    for pattern in iproduct(SIDES, repeat=len(mids)):
        sides = dict(zip(mids, pattern))
        letters = tuple(j if sides[j] == ABOVE else -j for j in mids)
        cand = conjugate(BraidWord(K.size, (a,)), BraidWord(K.size, letters))
        if normal_form(cand) == target:
            return path_from_sides(K.label_at(a), K.label_at(b), sides, K)
    return None


def path_from_sides(start, end, sides: dict[int, str], K: PunctureSet) -> PathSpec:
    """Encode an explicit side pattern as a below path with above-detours."""
    dets = []
    run = None
    for j in sorted(sides):
        if sides[j] == ABOVE:
            if run and run[1] == j - 1:
                run[1] = j
            else:
                run = [j, j]
                dets.append(run)
    return PathSpec(start, end, BELOW, tuple(Detour(K.label_at(lo), K.label_at(hi), ABOVE) for lo, hi in dets))


def half_twist_power(p: PathSpec, K: PunctureSet, e: int) -> BraidWord:
    return power(compile_path(p, K).word, e)
