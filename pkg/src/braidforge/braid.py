"""Braid words in Artin generators, Garside left normal form and related constants.

A letter is a signed integer: ``k`` stands for the generator sigma_k and ``-k``
for its inverse. Words are read left to right, so ``(1, 2)`` is sigma_1 sigma_2.

Simple elements (permutation braids) are stored as permutation tuples ``p`` of
``0..n-1`` with the convention that multiplying by sigma_i on the right swaps the
entries at indices ``i-1`` and ``i``. Under this convention the right descent set
of ``p`` is ``{i : p[i-1] > p[i]}`` and the left descent set is the right descent
set of the inverse.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class BraidError(ValueError):
    pass


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class BraidWord:
    """A word in the generators of B_n. Letters are kept freely reduced."""

    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise BraidError(f"strand count must be positive, got {self.n}")
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if x == 0 or abs(x) > self.n - 1:
                raise BraidError(f"generator {x} out of range for B_{self.n}")
        object.__setattr__(self, "letters", _reduce(letters))

    @classmethod
    def identity(cls, n: int) -> "BraidWord":
        return cls(n, ())

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return compose(self, other)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple(-x for x in reversed(self.letters)))

    def __pow__(self, e: int) -> "BraidWord":
        return power(self, e)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"s{x}" if x > 0 else f"s{-x}^-1" for x in self.letters)


def _check_same(a: BraidWord, b: BraidWord):
    if a.n != b.n:
        raise BraidError(f"strand counts differ: {a.n} vs {b.n}")


def compose(a: BraidWord, b: BraidWord) -> BraidWord:
    _check_same(a, b)
    return BraidWord(a.n, a.letters + b.letters)


def product(words: Sequence[BraidWord], n: int | None = None) -> BraidWord:
    if not words:
        if n is None:
            raise BraidError("empty product needs a strand count")
        return BraidWord.identity(n)
    m = words[0].n
    letters: list[int] = []
    for w in words:
        if w.n != m:
            raise BraidError(f"strand counts differ: {m} vs {w.n}")
        for x in w.letters:
            if letters and letters[-1] == -x:
                letters.pop()
            else:
                letters.append(x)
    return BraidWord(m, tuple(letters))


def inverse(w: BraidWord) -> BraidWord:
    return w.inverse()


def power(w: BraidWord, e: int) -> BraidWord:
    base = w if e >= 0 else w.inverse()
    return BraidWord(w.n, base.letters * abs(e))


def conjugate(x: BraidWord, w: BraidWord) -> BraidWord:
    """Return w^-1 x w."""
    _check_same(x, w)
    return BraidWord(x.n, w.inverse().letters + x.letters + w.letters)


def degree(w: BraidWord) -> int:
    return sum(1 if x > 0 else -1 for x in w.letters)


def full_twist(n: int) -> BraidWord:
    if n < 2:
        raise BraidError("full twist needs at least 2 strands")
    return BraidWord(n, tuple(range(1, n)) * n)


def half_twist_delta(n: int) -> BraidWord:
    """Garside element Delta as a positive word."""
    letters: list[int] = []
    for k in range(n - 1, 0, -1):
        letters.extend(range(1, k + 1))
    return BraidWord(n, tuple(letters))


@dataclass(frozen=True)
class BraidPermutation:
    """images[p-1] is the final position of the strand that starts at position p."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise BraidError(f"not a permutation: {self.images}")

    @property
    def n(self):
        return len(self.images)

    def __call__(self, p: int) -> int:
        return self.images[p - 1]

    def __mul__(self, other: "BraidPermutation") -> "BraidPermutation":
        # self first, then other
        return BraidPermutation(tuple(other(self(p)) for p in range(1, self.n + 1)))

    def is_identity(self) -> bool:
        return all(q == p for p, q in enumerate(self.images, 1))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for p in range(1, self.n + 1):
            if p in seen or self(p) == p:
                continue
            c, q = [], p
            while q not in seen:
                seen.add(q)
                c.append(q)
                q = self(q)
            out.append(tuple(c))
        return out

    def __str__(self):
        cs = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cs) or "()"


def permutation_of(w: BraidWord) -> BraidPermutation:
    # at[q] = starting position of the strand currently at q
    at = list(range(w.n + 1))
    for x in w.letters:
        k = abs(x)
        at[k], at[k + 1] = at[k + 1], at[k]
    images = [0] * w.n
    for q in range(1, w.n + 1):
        images[at[q] - 1] = q
    return BraidPermutation(tuple(images))


# ---------------------------------------------------------------------------
# Garside normal form


@dataclass(frozen=True)
class NormalForm:
    n: int
    infimum: int
    canonical_factors: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def canonical_length(self):
        return len(self.canonical_factors)

    def to_word(self) -> BraidWord:
        letters: list[int] = []
        d = half_twist_delta(self.n).letters
        if self.infimum >= 0:
            letters.extend(d * self.infimum)
        else:
            letters.extend(tuple(-x for x in reversed(d)) * (-self.infimum))
        for p in self.canonical_factors:
            letters.extend(_simple_word(p))
        return BraidWord(self.n, tuple(letters))


class NormalFormBudgetExceeded(RuntimeError):
    pass


def _simple_word(p: Sequence[int]) -> list[int]:
    # bubble sort the permutation back to the identity; the swaps read
    # backwards give a positive word for p
    q = list(p)
    swaps: list[int] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(q) - 1):
            if q[i] > q[i + 1]:
                q[i], q[i + 1] = q[i + 1], q[i]
                swaps.append(i + 1)
                changed = True
    return swaps[::-1]


def _right_desc(p) -> set[int]:
    return {i for i in range(1, len(p)) if p[i - 1] > p[i]}


def _inv(p):
    q = [0] * len(p)
    for i, v in enumerate(p):
        q[v] = i
    return tuple(q)


def _left_desc(p) -> set[int]:
    return _right_desc(_inv(p))


def _mul_right(p, i):
    q = list(p)
    q[i - 1], q[i] = q[i], q[i - 1]
    return tuple(q)


def _mul_left(i, p):
    # s_i * p swaps the values i-1 and i
    a, b = i - 1, i
    return tuple(b if v == a else a if v == b else v for v in p)


def _tau(p):
    n = len(p)
    return tuple(n - 1 - p[n - 1 - x] for x in range(n))


def _normalize_pair(a, b):
    """Move letters from the front of b to the back of a until (a, b) is left-weighted."""
    while True:
        ra = _right_desc(a)
        lb = _left_desc(b)
        extra = lb - ra
        if not extra:
            return a, b
        i = min(extra)
        a = _mul_right(a, i)
        b = _mul_left(i, b)


class _NFState:
    def __init__(self, n: int):
        self.n = n
        self.inf = 0
        self.factors: list[tuple[int, ...]] = []
        self.ident = tuple(range(n))
        self.delta = tuple(range(n - 1, -1, -1))

    def append_simple(self, s):
        fs = self.factors
        fs.append(s)
        j = len(fs) - 2
        while j >= 0:
            a, b = _normalize_pair(fs[j], fs[j + 1])
            if a == fs[j] and b == fs[j + 1]:
                break
            fs[j], fs[j + 1] = a, b
            j -= 1
        self._trim()

    def _trim(self):
        fs = self.factors
        k = 0
        while k < len(fs) and fs[k] == self.delta:
            k += 1
        if k:
            self.inf += k
            del fs[:k]
        while fs and fs[-1] == self.ident:
            fs.pop()

    def mul_letter(self, x: int):
        if x > 0:
            self.append_simple(_mul_right(self.ident, x))
        else:
            # s_i^-1 = Delta^-1 (Delta s_i^-1); pull Delta^-1 to the front
            self.inf -= 1
            self.factors = [_tau(f) for f in self.factors]
            self.append_simple(_mul_right(self.delta, -x))


def normal_form(w: BraidWord, budget_seconds: float | None = None) -> NormalForm:
    """Left-greedy Garside normal form Delta^inf x_1 ... x_k."""
    st = _NFState(w.n)
    start = time.monotonic()
    for count, x in enumerate(w.letters):
        st.mul_letter(x)
        if budget_seconds is not None and count % 64 == 0:
            if time.monotonic() - start > budget_seconds:
                raise NormalFormBudgetExceeded(
                    f"normal form exceeded {budget_seconds}s after {count} of {len(w)} letters"
                )
    return NormalForm(w.n, st.inf, tuple(st.factors))


def equal(a: BraidWord, b: BraidWord, budget_seconds: float | None = None) -> bool:
    _check_same(a, b)
    return normal_form(compose(a, b.inverse()), budget_seconds) == NormalForm(a.n, 0, ())


def is_left_weighted(nf: NormalForm) -> bool:
    fs = nf.canonical_factors
    return all(_left_desc(fs[i + 1]) <= _right_desc(fs[i]) for i in range(len(fs) - 1))


# ---------------------------------------------------------------------------
# Dynnikov coordinates: a faithful action on integer laminations


def _pos(x: int) -> int:
    return x if x > 0 else 0


def _neg(x: int) -> int:
    return x if x < 0 else 0


def dynnikov_action(w: BraidWord, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    """Apply w letter by letter to the coordinates (a_1, b_1, ..., a_n, b_n)."""
    a, b = list(a), list(b)
    if len(a) != w.n or len(b) != w.n:
        raise BraidError(f"B_{w.n} acts on {w.n} coordinate pairs")
    for s in w.letters:
        i = abs(s) - 1
        j = i + 1
        ai, bi, aj, bj = a[i], b[i], a[j], b[j]
        if s > 0:
            c = ai - _neg(bi) - aj + _pos(bj)
            a[i] = ai + _pos(bi) + _pos(_pos(bj) - c)
            b[i] = bj - _pos(c)
            a[j] = aj + _neg(bj) + _neg(_neg(bi) + c)
            b[j] = bi + _pos(c)
        else:
            d = ai + _neg(bi) - aj - _pos(bj)
            a[i] = ai - _pos(bi) - _pos(_pos(bj) + d)
            b[i] = bj + _neg(d)
            a[j] = aj - _neg(bj) - _neg(_neg(bi) - d)
            b[j] = bi - _neg(d)
    return a, b


def is_trivial(w: BraidWord) -> bool:
    """Word problem by Dynnikov coordinates: w = 1 iff it fixes (0,1,...,0,1).

    Linear in the word length, so it handles words far beyond the reach of normal_form.
    """
    a, b = [0] * w.n, [1] * w.n
    return dynnikov_action(w, a, b) == (a, b)


def dynnikov_key(w: BraidWord) -> tuple[int, ...]:
    """Image of the trivial coordinates; two braids are equal iff their keys are."""
    a, b = dynnikov_action(w, [0] * w.n, [1] * w.n)
    return tuple(a + b)


def equal_fast(x: BraidWord, y: BraidWord) -> bool:
    _check_same(x, y)
    return is_trivial(x * y.inverse())

