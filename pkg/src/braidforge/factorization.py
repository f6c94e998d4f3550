"""Factorizations: ordered products of conjugated half-twist powers.

A factor is ``(path, exponent, conjugator)`` and realizes the braid
``c^-1 H(path)^e c``. Exponents 1, 2, 3 and 4 are branch, node, cusp and tangent
factors. A factor may instead carry a ``support`` tuple, in which case it is the
full twist on a sub-disk around those punctures (its degree is k(k-1)).
"""

from __future__ import annotations

from collections import OrderedDict, deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

from .braid import (
    BraidWord,
    NormalFormBudgetExceeded,
    conjugate,
    degree,
    dynnikov_key,
    full_twist,
    is_trivial,
    normal_form,
    permutation_of,
    power,
    product as word_product,
)
from .disk import BELOW, PathError, PathSpec, PunctureSet, compile_path, path

FORWARD = "forward"
INVERSE = "inverse"


class FactorizationError(ValueError):
    pass


def sub_full_twist(support: Sequence[str], K: PunctureSet) -> BraidWord:
    """Full twist on a disk around `support`, as the ordered product of squared below paths.

    For a consecutive block this is the usual Delta^2 of that block.
    """
    pos = sorted(K.position(s) for s in support)
    labs = [K.label_at(p) for p in pos]
    words = []
    for j in range(1, len(labs)):
        for i in range(j):
            words.append(power(compile_path(path(labs[i], labs[j]), K).word, 2))
    return word_product(words, K.size)


@dataclass(frozen=True)
class Factor:
    path: PathSpec | None
    exponent: int
    conjugator: BraidWord
    ambient: PunctureSet
    group: str = ""
    support: tuple[str, ...] = ()

    def __post_init__(self):
        if self.conjugator.n != self.ambient.size:
            raise FactorizationError("conjugator does not live in the ambient braid group")
        if self.support:
            if self.path is not None:
                raise FactorizationError("a sub-disk twist has no path")
            for s in self.support:
                self.ambient.position(s)
        else:
            if self.path is None:
                raise FactorizationError("factor needs a path or a support")
            if self.exponent not in (1, 2, 3, 4):
                raise FactorizationError(f"exponent {self.exponent} not in 1..4")

    @classmethod
    def make(cls, p: PathSpec, exponent: int, K: PunctureSet, conjugator: BraidWord | None = None, group=""):
        if conjugator is None:
            conjugator = BraidWord.identity(K.size)
        return cls(p, exponent, conjugator, K, group)

    @property
    def is_twist(self) -> bool:
        return not self.support

    @cached_property
    def base_word(self) -> BraidWord:
        if self.support:
            return sub_full_twist(self.support, self.ambient)
        return compile_path(self.path, self.ambient).word

    @cached_property
    def word(self) -> BraidWord:
        if self.support:
            return conjugate(self.base_word, self.conjugator)
        return conjugate(power(self.base_word, self.exponent), self.conjugator)

    @cached_property
    def half_twist_word(self) -> BraidWord:
        """The underlying conjugated half-twist (exponent dropped)."""
        return conjugate(self.base_word, self.conjugator)

    @property
    def degree(self) -> int:
        if self.support:
            k = len(self.support)
            return k * (k - 1)
        return self.exponent

    def conjugated(self, h: BraidWord) -> "Factor":
        """The factor h^-1 F h."""
        return replace(self, conjugator=self.conjugator * h)

    def with_group(self, group: str) -> "Factor":
        return replace(self, group=group)


@dataclass(frozen=True)
class Factorization:
    ambient: PunctureSet
    factors: tuple[Factor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if f.ambient.size != self.ambient.size:
                raise FactorizationError("factor ambient differs from factorization ambient")

    def __len__(self):
        return len(self.factors)

    def __add__(self, other: "Factorization") -> "Factorization":
        if other.ambient != self.ambient:
            raise FactorizationError("ambients differ")
        return Factorization(self.ambient, self.factors + other.factors)

    @property
    def n(self):
        return self.ambient.size

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)

    def conjugated(self, h: BraidWord) -> "Factorization":
        return Factorization(self.ambient, tuple(f.conjugated(h) for f in self.factors))

    def with_group(self, group: str) -> "Factorization":
        return Factorization(self.ambient, tuple(f.with_group(group) for f in self.factors))

    def words(self) -> list[BraidWord]:
        return [f.word for f in self.factors]


def product(f: Factorization) -> BraidWord:
    return word_product(f.words(), f.n)


def hurwitz_move(f: Factorization, k: int, direction: str = FORWARD) -> Factorization:
    """R_k: (t_k, t_k+1) -> (t_k t_k+1 t_k^-1, t_k); inverse: -> (t_k+1, t_k+1^-1 t_k t_k+1). k is 1-based."""
    m = len(f.factors)
    if not 1 <= k < m:
        raise FactorizationError(f"move index {k} out of range for {m} factors")
    fs = list(f.factors)
    a, b = fs[k - 1], fs[k]
    if direction == FORWARD:
        fs[k - 1], fs[k] = b.conjugated(a.word.inverse()), a
    elif direction == INVERSE:
        fs[k - 1], fs[k] = b, a.conjugated(b.word)
    else:
        raise FactorizationError(f"unknown direction {direction}")
    return Factorization(f.ambient, tuple(fs))


def apply_certificate(f: Factorization, cert: Sequence[int]) -> Factorization:
    """Certificates are lists of signed move indices: +k forward at k, -k inverse at k."""
    for m in cert:
        f = hurwitz_move(f, abs(m), FORWARD if m > 0 else INVERSE)
    return f


@dataclass
class BMFReport:
    degree: int
    expected_degree: int
    degree_ok: bool
    permutation_ok: bool
    delta_squared_ok: bool | None
    note: str = ""

    @property
    def all_ok(self):
        return self.degree_ok and self.permutation_ok and self.delta_squared_ok is True


def verify_bmf(f: Factorization, budget_seconds: float | None = 30.0, method: str = "dynnikov") -> BMFReport:
    """Degree, permutation and product = Delta^2, reported independently.

    method "dynnikov" decides the last check exactly in linear time; "garside"
    compares left normal forms and gives up after `budget_seconds`.
    """
    n = f.n
    expected = n * (n - 1)
    total = f.degree
    prod = product(f)
    perm_ok = permutation_of(prod).is_identity()
    note = ""
    quotient = prod * full_twist(n).inverse()
    if method == "dynnikov":
        delta_ok: bool | None = is_trivial(quotient)
    elif method == "garside":
        try:
            delta_ok = normal_form(quotient, budget_seconds) == normal_form(BraidWord.identity(n))
        except NormalFormBudgetExceeded as exc:
            delta_ok = None
            note = f"normal form comparison unavailable: {exc}"
    else:
        raise FactorizationError(f"unknown method {method}")
    return BMFReport(total, expected, total == expected, perm_ok, delta_ok, note)


def degree_audit(f: Factorization) -> "OrderedDict[str, int]":
    """Degree per group label in first-appearance order, plus 'total'."""
    out: OrderedDict[str, int] = OrderedDict()
    for fac in f.factors:
        out[fac.group] = out.get(fac.group, 0) + fac.degree
    out["total"] = f.degree
    return out


def forget_strands(w: BraidWord, keep: Iterable, ambient: PunctureSet | None = None) -> BraidWord:
    """Delete every strand not in `keep`. Keep items are labels if an ambient is given, else positions."""
    keep = list(keep)
    if not keep:
        raise FactorizationError("keep set is empty")
    if ambient is not None:
        kept = {ambient.position(x) for x in keep}
    else:
        kept = {int(x) for x in keep}
    for p in kept:
        if not 1 <= p <= w.n:
            raise FactorizationError(f"strand {p} out of range")
    # strand_at[q] = starting position of the strand now at position q
    strand_at = list(range(w.n + 1))
    out: list[int] = []
    for x in w.letters:
        k = abs(x)
        s1, s2 = strand_at[k], strand_at[k + 1]
        if s1 in kept and s2 in kept:
            idx = sum(1 for q in range(1, k + 1) if strand_at[q] in kept)
            out.append(idx if x > 0 else -idx)
        strand_at[k], strand_at[k + 1] = s2, s1
    return BraidWord(max(len(kept), 1), tuple(out))


# ---------------------------------------------------------------------------
# bounded Hurwitz orbit search


def state_key(f: Factorization):
    # Dynnikov keys are linear in word length; normal forms were the bottleneck
    return tuple((dynnikov_key(fac.word), fac.degree) for fac in f.factors)


@dataclass
class OrbitResult:
    representatives: dict
    complete: bool

    def __len__(self):
        return len(self.representatives)


def _neighbours(f: Factorization):
    for k in range(1, len(f.factors)):
        yield k, hurwitz_move(f, k, FORWARD)
        yield -k, hurwitz_move(f, k, INVERSE)


def orbit_search(f: Factorization, move_budget: int) -> OrbitResult:
    """BFS over Hurwitz moves; stops once `move_budget` states have been visited."""
    start = state_key(f)
    seen = {start: f}
    queue = deque([f])
    while queue:
        cur = queue.popleft()
        for _, nxt in _neighbours(cur):
            key = state_key(nxt)
            if key in seen:
                continue
            if len(seen) >= move_budget:
                return OrbitResult(seen, False)
            seen[key] = nxt
            queue.append(nxt)
    return OrbitResult(seen, True)


EQUIVALENT = "equivalent"
NOT_WITHIN_BUDGET = "not-within-budget"


@dataclass
class EquivalenceResult:
    status: str
    certificate: list[int] | None = None
    states: int = 0

    @property
    def equivalent(self):
        return self.status == EQUIVALENT


def equivalent(f1: Factorization, f2: Factorization, budget: int) -> EquivalenceResult:
    """Semi-decision: search for moves taking f1 to f2. Never claims inequivalence."""
    if f1.n != f2.n:
        raise FactorizationError("factorizations live in different braid groups")
    target = state_key(f2)
    start = state_key(f1)
    if start == target:
        return EquivalenceResult(EQUIVALENT, [], 1)
    if len(f1) != len(f2) or sorted(x.degree for x in f1.factors) != sorted(x.degree for x in f2.factors):
        # moves preserve the factor-degree multiset, so no search can succeed
        return EquivalenceResult(NOT_WITHIN_BUDGET, None, 0)
    parent = {start: None}
    queue = deque([(f1, start)])
    while queue:
        cur, ckey = queue.popleft()
        for move, nxt in _neighbours(cur):
            key = state_key(nxt)
            if key in parent:
                continue
            parent[key] = (ckey, move)
            if key == target:
                cert = []
                k = key
                while parent[k] is not None:
                    k, mv = parent[k]
                    cert.append(mv)
                return EquivalenceResult(EQUIVALENT, cert[::-1], len(parent))
            if len(parent) >= budget:
                return EquivalenceResult(NOT_WITHIN_BUDGET, None, len(parent))
            queue.append((nxt, key))
    return EquivalenceResult(NOT_WITHIN_BUDGET, None, len(parent))


INVARIANT = "invariant"
UNKNOWN = "unknown"


@dataclass
class InvarianceResult:
    status: str
    certificate: list[int] | None
    states: int


def invariance_check(f: Factorization, h: BraidWord, budget: int) -> InvarianceResult:
    """Is (t_1)_h ... (t_m)_h Hurwitz equivalent to t_1 ... t_m? Certificate takes the conjugate to f."""
    g = f.conjugated(h)
    res = equivalent(g, f, budget)
    if res.equivalent:
        return InvarianceResult(INVARIANT, res.certificate, res.states)
    return InvarianceResult(UNKNOWN, None, res.states)
