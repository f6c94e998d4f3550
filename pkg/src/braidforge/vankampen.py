"""From braid monodromy factorizations to finitely presented groups.

Free words are tuples of signed generator indices (``3`` is the third
generator, ``-3`` its inverse). Braids act on the free group F_n = <x_1..x_n>
from the right:

    sigma_k:    x_k -> x_k x_{k+1} x_k^-1,   x_{k+1} -> x_k
    sigma_k^-1: x_k -> x_{k+1},             x_{k+1} -> x_{k+1}^-1 x_k x_{k+1}

For a factor c^-1 H^nu c whose half-twist is W^-1 sigma_a W, the loops around
the two endpoints are A = (x_{a+1})Wc and B = (x_a)Wc. The geometric generators
Gamma_i are read from the x-words by reversing the letter order, so that the
half-twist of a path from 1 to 6 passing above 4 and below 2, 3, 5 gives
A = Gamma_4^-1 Gamma_6 Gamma_4 and B = Gamma_1.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .braid import BraidWord, BraidPermutation, permutation_of
from .disk import ABOVE, PathSpec, PunctureSet, sides_of, transport_word
from .factorization import Factor, Factorization

FreeWord = tuple  # tuple[int, ...]


class VanKampenError(ValueError):
    pass


# ---------------------------------------------------------------------------
# free words


def reduce_word(w: Iterable[int]) -> FreeWord:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Iterable[int]) -> FreeWord:
    w = list(reduce_word(w))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i : j + 1])


def inv(w: FreeWord) -> FreeWord:
    return tuple(-x for x in reversed(w))


def mul(*ws: FreeWord) -> FreeWord:
    return reduce_word(x for w in ws for x in w)


def commutator(a: FreeWord, b: FreeWord) -> FreeWord:
    return mul(a, b, inv(a), inv(b))


def braid_relator(a: FreeWord, b: FreeWord) -> FreeWord:
    """aba = bab as the relator aba b^-1 a^-1 b^-1."""
    return mul(a, b, a, inv(b), inv(a), inv(b))


def reverse_letters(w: FreeWord) -> FreeWord:
    """x-word to Gamma-word: same letters in reverse order."""
    return tuple(reversed(w))


def exponent_sum(w: FreeWord) -> int:
    return sum(1 if x > 0 else -1 for x in w)


def format_word(w: FreeWord, names: Sequence[str]) -> str:
    if not w:
        return "1"
    parts = []
    for x in w:
        g = names[abs(x) - 1]
        parts.append(g if x > 0 else f"{g}^-1")
    return "*".join(parts)


def parse_word(text: str, names: Sequence[str]) -> FreeWord:
    """Inverse of format_word: ``G1*G9^-1``; powers ``a^3`` and ``1`` are accepted."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    idx = {g: i for i, g in enumerate(names, 1)}
    out: list[int] = []
    for part in text.split("*"):
        name, _, e = part.strip().partition("^")
        if name not in idx:
            raise VanKampenError(f"unknown generator {name!r}")
        try:
            k = int(e) if e else 1
        except ValueError:
            raise VanKampenError(f"bad exponent in {part!r}") from None
        out.extend([idx[name] if k > 0 else -idx[name]] * abs(k))
    return reduce_word(out)


def parse_presentation(text: str) -> tuple["FPGroup", list[FreeWord]]:
    """Read the layout written by FPGroup.format, plus optional ``subgroup: w`` lines."""
    gens: tuple[str, ...] | None = None
    rels: list[str] = []
    subs: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("generators:"):
            gens = tuple(line.split(":", 1)[1].split())
        elif line.startswith("relators:"):
            continue
        elif line.startswith("subgroup:"):
            subs.append(line.split(":", 1)[1])
        else:
            rels.append(line)
    if gens is None:
        raise VanKampenError("presentation has no 'generators:' line")
    g = FPGroup(gens, tuple(parse_word(r, gens) for r in rels))
    return g, [parse_word(s, gens) for s in subs]


# ---------------------------------------------------------------------------
# Artin action


def _subst(w: FreeWord, images: dict[int, FreeWord]) -> FreeWord:
    out: list[int] = []
    for x in w:
        img = images.get(abs(x))
        piece = (x,) if img is None else (img if x > 0 else inv(img))
        for y in piece:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def _letter_images(s: int) -> dict[int, FreeWord]:
    k = abs(s)
    if s > 0:
        return {k: (k, k + 1, -k), k + 1: (k,)}
    return {k: (k + 1,), k + 1: (-(k + 1), k, k + 1)}


def artin_action(b: BraidWord, w: FreeWord, n: int | None = None) -> FreeWord:
    """The right action (w)b of B_n on F_n."""
    n = b.n if n is None else n
    if n != b.n:
        raise VanKampenError(f"free group of rank {n} does not match B_{b.n}")
    for x in w:
        if not 1 <= abs(x) <= n:
            raise VanKampenError(f"generator {x} outside F_{n}")
    cur = tuple(w)
    for s in b.letters:
        cur = _subst(cur, _letter_images(s))
    return cur


def action_images(b: BraidWord, gens: Iterable[int]) -> dict[int, FreeWord]:
    gens = list(gens)
    imgs = {g: (g,) for g in gens}
    for s in b.letters:
        rule = _letter_images(s)
        for g in gens:
            imgs[g] = _subst(imgs[g], rule)
    return imgs


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class FPGroup:
    generators: tuple[str, ...]
    relators: tuple[FreeWord, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.generators)
        rels = []
        for r in self.relators:
            r = cyclic_reduce(r)
            for x in r:
                if not 1 <= abs(x) <= n:
                    raise VanKampenError(f"relator letter {x} outside the {n} generators")
            if r:
                rels.append(r)
        object.__setattr__(self, "relators", tuple(rels))
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def format(self) -> str:
        lines = ["generators: " + " ".join(self.generators), f"relators: {len(self.relators)}"]
        lines += [format_word(r, self.generators) for r in self.relators]
        return "\n".join(lines) + "\n"

    def with_relators(self, extra: Iterable[FreeWord]) -> "FPGroup":
        return FPGroup(self.generators, self.relators + tuple(extra), self.notes)


def gamma_names(K: PunctureSet) -> tuple[str, ...]:
    return tuple(f"G{lab}" for lab in K.labels)


@dataclass(frozen=True)
class FactorRelation:
    index: int
    nu: int
    A: FreeWord | None
    B: FreeWord | None
    relators: tuple[FreeWord, ...]
    kind: str  # 'classified' or 'fallback'


def endpoint_loops(f: Factor) -> tuple[FreeWord, FreeWord]:
    """(A, B) as Gamma-words for a half-twist factor."""
    a, W = transport_word(f.path, f.ambient)
    T = W * f.conjugator
    imgs = action_images(T, (a, a + 1))
    return reverse_letters(imgs[a + 1]), reverse_letters(imgs[a])


def fallback_relators(f: Factor) -> tuple[FreeWord, ...]:
    """x_m^-1 (x_m)rho for every m, as Gamma-words; presents the same relations as the classified form."""
    n = f.ambient.size
    imgs = action_images(f.word, range(1, n + 1))
    out = []
    for m in range(1, n + 1):
        r = reverse_letters(mul((-m,), imgs[m]))
        r = cyclic_reduce(r)
        if r:
            out.append(r)
    return tuple(out)


def factor_relation(f: Factor, index: int = 0) -> FactorRelation:
    if f.support:
        return FactorRelation(index, f.degree, None, None, fallback_relators(f), "fallback")
    nu = f.exponent
    if nu == 4:
        raise VanKampenError(f"factor {index} has exponent 4; regenerate before extracting relations")
    A, B = endpoint_loops(f)
    if nu == 1:
        rel = mul(A, inv(B))
    elif nu == 2:
        rel = commutator(A, B)
    else:
        rel = braid_relator(A, B)
    return FactorRelation(index, nu, A, B, (rel,), "classified")


def projective_relator(n: int) -> FreeWord:
    """Gamma_n ... Gamma_1 (the reversal of x_1 ... x_n)."""
    return tuple(range(n, 0, -1))


def vk_relations(f: Factorization, projective: bool = False) -> FPGroup:
    rels: list[FreeWord] = []
    for idx, fac in enumerate(f.factors, 1):
        rels.extend(factor_relation(fac, idx).relators)
    if projective:
        rels.append(projective_relator(f.n))
    # keep the first occurrence of each relator
    seen, uniq = set(), []
    for r in rels:
        r = cyclic_reduce(r)
        if r and r not in seen:
            seen.add(r)
            uniq.append(r)
    return FPGroup(gamma_names(f.ambient), tuple(uniq))


def factor_relations(f: Factorization) -> list[FactorRelation]:
    return [factor_relation(fac, i) for i, fac in enumerate(f.factors, 1)]


# ---------------------------------------------------------------------------
# abelianization


@dataclass(frozen=True)
class Abelianization:
    free_rank: int
    torsion: tuple[int, ...]

    def __str__(self):
        parts = [f"Z_{t}" for t in self.torsion] + (["Z^%d" % self.free_rank] if self.free_rank > 1 else [])
        if self.free_rank == 1:
            parts.append("Z")
        return " + ".join(parts) if parts else "0"


def exponent_matrix(g: FPGroup) -> list[list[int]]:
    rows = set()
    n = g.rank
    for r in g.relators:
        v = [0] * n
        for x in r:
            v[abs(x) - 1] += 1 if x > 0 else -1
        if any(v):
            # a row and its negative generate the same subgroup
            first = next(c for c in v if c)
            if first < 0:
                v = [-c for c in v]
            rows.add(tuple(v))
    return [list(r) for r in sorted(rows)]


def abelianize(g: FPGroup) -> Abelianization:
    """Smith normal form of the exponent-sum matrix."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    n = g.rank
    rows = exponent_matrix(g)
    if not rows:
        return Abelianization(n, ())
    facs = [abs(int(x)) for x in invariant_factors(Matrix(rows), domain=ZZ)]
    nonzero = [x for x in facs if x != 0]
    torsion = tuple(sorted(x for x in nonzero if x != 1))
    return Abelianization(n - len(nonzero), torsion)


# ---------------------------------------------------------------------------
# permutation representations


@dataclass(frozen=True)
class PermutationRep:
    """Generator name -> permutation of the sheets, as a tuple of images of 1..m."""

    assignment: dict
    degree: int

    def __post_init__(self):
        for g, p in self.assignment.items():
            if sorted(p) != list(range(1, self.degree + 1)):
                raise VanKampenError(f"image of {g} is not a permutation")
            moved = [i for i, q in enumerate(p, 1) if q != i]
            if len(moved) != 2:
                raise VanKampenError(f"image of {g} is not a transposition")

    def evaluate(self, w: FreeWord, names: Sequence[str]) -> tuple[int, ...]:
        cur = list(range(1, self.degree + 1))
        for x in w:
            p = self.assignment[names[abs(x) - 1]]
            # transpositions are their own inverses
            cur = [p[c - 1] for c in cur]
        return tuple(cur)

    def generates_symmetric_group(self) -> bool:
        parent = list(range(self.degree + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for p in self.assignment.values():
            i, j = [k for k, q in enumerate(p, 1) if q != k]
            parent[find(i)] = find(j)
        return len({find(k) for k in range(1, self.degree + 1)}) == 1


def transposition(i: int, j: int, m: int) -> tuple[int, ...]:
    p = list(range(1, m + 1))
    p[i - 1], p[j - 1] = j, i
    return tuple(p)


@dataclass
class MonodromyReport:
    rep: PermutationRep
    relators_checked: int
    failures: list[tuple[int, str]] = field(default_factory=list)
    generates: bool = False

    @property
    def ok(self) -> bool:
        return not self.failures and self.generates


def theta(model) -> PermutationRep:
    """Gamma_j and Gamma_j' go to the transposition of the two planes along line j."""
    planes = sorted(model.planes)
    idx = {p: i for i, p in enumerate(planes, 1)}
    m = len(planes)
    assign = {}
    for l, (p, q) in model.adjacency.items():
        t = transposition(idx[p], idx[q], m)
        assign[f"G{l}"] = t
        assign[f"G{l}'"] = t
    return PermutationRep(assign, m)


def geometric_monodromy(f: Factorization | FPGroup, model, limit_failures: int = 20) -> MonodromyReport:
    g = f if isinstance(f, FPGroup) else vk_relations(f)
    rep = theta(model)
    for name in g.generators:
        if name not in rep.assignment:
            raise VanKampenError(f"generator {name} has no line in the model")
    ident = tuple(range(1, rep.degree + 1))
    report = MonodromyReport(rep, len(g.relators))
    for i, r in enumerate(g.relators, 1):
        if rep.evaluate(r, g.generators) != ident:
            if len(report.failures) < limit_failures:
                report.failures.append((i, format_word(r, g.generators)))
            else:
                report.failures.append((i, ""))
    report.generates = rep.generates_symmetric_group()
    return report


# ---------------------------------------------------------------------------
# Artin presentations and the quotient by a transversal commutator


def artin_presentation(n: int) -> FPGroup:
    gens = tuple(f"x{i}" for i in range(1, n))
    rels = []
    for i in range(1, n):
        for j in range(i + 1, n):
            if j == i + 1:
                rels.append(braid_relator((i,), (j,)))
            else:
                rels.append(commutator((i,), (j,)))
    return FPGroup(gens, tuple(rels))


def half_twist_free_word(p: PathSpec, K: PunctureSet) -> FreeWord:
    """The half-twist of an axis path as a word in the Artin generators x_i of the base presentation."""
    a, W = transport_word(p, K)
    return mul(inv(W.letters), (a,), W.letters)


def crossings_with_segment(p: PathSpec, seg: tuple[str, str], K: PunctureSet) -> int:
    """Crossings of an axis path with the straight segment between two adjacent punctures."""
    c, d = sorted(K.position(x) for x in seg)
    if d != c + 1:
        raise VanKampenError("segment must join adjacent punctures")
    a, b = sorted((K.position(p.start), K.position(p.end)))
    if {a, b} & {c, d}:
        return 0
    if not (a < c and d < b):
        return 0
    s = sides_of(p, K)
    return 1 if s[c] != s[d] else 0


def btilde_presentation(n: int, X: tuple[str, str] = ("2", "3"), Y: PathSpec | None = None,
                        base: FPGroup | None = None) -> FPGroup:
    """B_n plus one commutator [X, Y] of a transversal pair of half-twists.

    X is a segment between adjacent punctures; Y an axis path crossing it once
    with disjoint endpoints. The default pair is the segment <2,3> and the path
    from 1 to 4 passing above 2 and below 3.
    """
    K = PunctureSet.base(n)
    if Y is None:
        from .disk import path

        Y = path("1", "4", "below", [("2", "2", ABOVE)])
    base = artin_presentation(n) if base is None else base
    ends_x = {K.position(x) for x in X}
    ends_y = {K.position(Y.start), K.position(Y.end)}
    if ends_x & ends_y:
        raise VanKampenError("transversal half-twists need four distinct endpoints")
    if crossings_with_segment(Y, X, K) != 1:
        raise VanKampenError("the designated pair does not cross exactly once")
    from .disk import path

    wx = half_twist_free_word(path(*X), K)
    wy = half_twist_free_word(Y, K)
    return FPGroup(base.generators, base.relators + (commutator(wx, wy),),
                   base.notes + (f"[H<{X[0]},{X[1]}>, H({Y.start}->{Y.end})]",))


@dataclass(frozen=True)
class FrameData:
    """A presentation of B_m on half-twists T_i along chosen lines, plus definitions of the others."""

    generators: tuple[int, ...]
    group: FPGroup
    definitions: dict  # j -> (base T, conjugating word as signed T indices)


def frame_presentation(model, I: Sequence[int], extra: Sequence[tuple[int, tuple[int, ...]]] = (),
                       definitions: dict | None = None) -> FrameData:
    """Generators T_i for lines i in I, as edges between planes.

    Consecutive (sharing a plane) pairs braid, disjoint pairs commute; `extra`
    lists (i, w) with the relator [T_i, w].
    """
    I = tuple(I)
    adj = model.adjacency
    names = tuple(f"T{i}" for i in I)
    pos = {i: k for k, i in enumerate(I, 1)}
    rels = []
    for x in range(len(I)):
        for y in range(x + 1, len(I)):
            a, b = I[x], I[y]
            if set(adj[a]) & set(adj[b]):
                rels.append(braid_relator((pos[a],), (pos[b],)))
            else:
                rels.append(commutator((pos[a],), (pos[b],)))
    for i, w in extra:
        ww = tuple(pos[abs(t)] * (1 if t > 0 else -1) for t in w)
        rels.append(commutator((pos[i],), ww))
    return FrameData(I, FPGroup(names, tuple(rels)), dict(definitions or {}))


def frame_theta(model, frame: FrameData) -> PermutationRep:
    full = theta(model)
    return PermutationRep({f"T{i}": full.assignment[f"G{i}"] for i in frame.generators}, full.degree)


def expand_definition(frame: FrameData, j: int, rep: PermutationRep) -> tuple[int, ...]:
    """Permutation of T_j, evaluating (T)_W = W^-1 T W recursively (words read left to right)."""
    m = rep.degree
    if j in frame.generators:
        return rep.assignment[f"T{j}"]
    base, w = frame.definitions[j]
    pb = expand_definition(frame, base, rep)
    pw = list(range(1, m + 1))
    for t in w:
        q = expand_definition(frame, abs(t), rep)
        pw = [q[c - 1] for c in pw]
    winv = [0] * m
    for i, v in enumerate(pw, 1):
        winv[v - 1] = i
    # apply W^-1, then T, then W
    return tuple(pw[pb[winv[c - 1] - 1] - 1] for c in range(1, m + 1))


FRAME_LINES = (2, 4, 6, 7, 9, 10, 13, 14, 15, 18, 19, 20, 21, 23, 24)
FRAME_EXTRA = ((9, (24, 21, -24)),)
# the T17 conjugator is (T13 T22 T4); the alternative T22 T3^-1 T4 disagrees with the monodromy
FRAME_DEFINITIONS = {
    8: (10, (-7, -9, 24)),
    12: (6, (-8, -20, 2)),
    11: (14, (12, 13, -19)),
    22: (24, (20, 21, 23)),
    17: (2, (13, 22, 4)),
    16: (17, (-19, 15, 18)),
    3: (4, (-18, -23)),
    5: (6, (-10, -14)),
    1: (5, (-7, -11, -15)),
}


def magician_frame(model) -> FrameData:
    return frame_presentation(model, FRAME_LINES, FRAME_EXTRA, FRAME_DEFINITIONS)


# ---------------------------------------------------------------------------
# coset enumeration


@dataclass
class CosetResult:
    status: str  # 'index' or 'exceeded'
    index: int | None = None
    table: list[list[int]] | None = None
    verified: bool = False


def _to_sympy(g: FPGroup):
    from sympy.combinatorics.free_groups import free_group
    from sympy.combinatorics.fp_groups import FpGroup

    F = free_group(",".join(f"g{i}" for i in range(1, g.rank + 1)))[0]
    xs = list(F.generators)

    def conv(w: FreeWord):
        out = F.identity
        for x in w:
            out = out * (xs[abs(x) - 1] if x > 0 else xs[abs(x) - 1] ** -1)
        return out

    return F, FpGroup(F, [conv(r) for r in g.relators]), conv


def verify_coset_table(g: FPGroup, subgroup: Sequence[FreeWord], table: list[list[int]]) -> bool:
    """Columns are (g1, g1^-1, g2, g2^-1, ...). Checks closure, inverses, relators and subgroup."""
    k = len(table)
    n = g.rank
    if k == 0:
        return False
    for c, row in enumerate(table):
        if len(row) != 2 * n:
            return False
        for i in range(n):
            d = row[2 * i]
            if d is None or not 0 <= d < k or table[d][2 * i + 1] != c:
                return False

    def trace(c, w):
        for x in w:
            col = 2 * (abs(x) - 1) + (0 if x > 0 else 1)
            c = table[c][col]
        return c

    for c in range(k):
        for r in g.relators:
            if trace(c, r) != c:
                return False
    for h in subgroup:
        if trace(0, h) != 0:
            return False
    # the cosets must be reachable from coset 0
    seen, stack = {0}, [0]
    while stack:
        c = stack.pop()
        for d in table[c]:
            if d not in seen:
                seen.add(d)
                stack.append(d)
    return len(seen) == k


def todd_coxeter(g: FPGroup, subgroup_gens: Sequence[FreeWord] = (), limit: int = 4096) -> CosetResult:
    """HLT coset enumeration with a hard limit on the number of cosets defined."""
    from sympy.combinatorics.fp_groups import coset_enumeration_r

    if g.rank == 0:
        return CosetResult("index", 1, [[]], True)
    F, G, conv = _to_sympy(g)
    H = [conv(w) for w in subgroup_gens]
    try:
        C = coset_enumeration_r(G, H, max_cosets=limit)
    except ValueError:
        return CosetResult("exceeded")
    C.compress()
    C.standardize()
    table = [list(row) for row in C.table]
    ok = verify_coset_table(g, subgroup_gens, table)
    if not ok:
        # never report an unverified index
        return CosetResult("exceeded")
    return CosetResult("index", len(table), table, True)


# ---------------------------------------------------------------------------
# Tietze transformations


def _eliminable(r: FreeWord, budget: int):
    """A generator occurring exactly once in r, if len(r) <= budget: (gen, sign, position)."""
    if len(r) > budget:
        return None
    counts: dict[int, int] = {}
    for x in r:
        counts[abs(x)] = counts.get(abs(x), 0) + 1
    for i, x in enumerate(r):
        if counts[abs(x)] == 1:
            return abs(x), (1 if x > 0 else -1), i
    return None


def tietze_simplify(g: FPGroup, budget: int = 8, time_budget: float | None = 30.0) -> FPGroup:
    """Repeatedly eliminate a generator g defined by a short relator r = u g^e v (g not in u, v).

    The definition g = (v u)^-1 (or its inverse) is substituted into every other
    relator. Each step is a Tietze transformation, so the group is unchanged.
    """
    start = time.monotonic()
    names = list(g.generators)
    rels = [cyclic_reduce(r) for r in g.relators]
    alive = list(range(1, len(names) + 1))
    while True:
        if time_budget is not None and time.monotonic() - start > time_budget:
            break
        rels = sorted({r for r in (cyclic_reduce(r) for r in rels) if r}, key=lambda r: (len(r), r))
        pick = None
        for ri, r in enumerate(rels):
            e = _eliminable(r, budget)
            if e is not None:
                pick = (ri, e)
                break
        if pick is None:
            break
        ri, (gen, sign, i) = pick
        r = rels[ri]
        u, v = r[:i], r[i + 1 :]
        # u g^sign v = 1  =>  g^sign = u^-1 v^-1
        val = mul(inv(u), inv(v))
        if sign < 0:
            val = inv(val)
        new = []
        for k, s in enumerate(rels):
            if k == ri:
                continue
            out: list[int] = []
            for x in s:
                piece = (x,) if abs(x) != gen else (val if x > 0 else inv(val))
                for y in piece:
                    if out and out[-1] == -y:
                        out.pop()
                    else:
                        out.append(y)
            new.append(tuple(out))
        rels = new
        alive.remove(gen)
    # renumber the surviving generators
    ren = {old: k for k, old in enumerate(alive, 1)}
    out_rels = []
    for r in rels:
        out_rels.append(tuple(ren[abs(x)] * (1 if x > 0 else -1) for x in r))
    return FPGroup(tuple(names[a - 1] for a in alive), tuple(out_rels), g.notes)
