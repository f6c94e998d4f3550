"""Regeneration rules, the F_u / F_m / F_l constructors, local BMFs from singularity tables.

Conjugation conventions used throughout:

* superscript ``X^W`` (regeneration rule 3) is ``W^-1 X W``;
* subscript ``(X)_W`` (the F displays and the block formulas) is ``W X W^-1``,
  the image of the path of X under the motion W.

With these readings every forgetting degree of the F blocks vanishes, which is
what the regenerated 4-point requires.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .braid import BraidWord, product as word_product
from .disk import (
    ABOVE,
    BELOW,
    Detour,
    PathError,
    PathSpec,
    PunctureSet,
    base_of,
    compile_path,
    is_primed,
    label,
    lift_path,
    path,
    prime,
)
from .factorization import Factor, Factorization, FactorizationError

DOUBLED_24 = PunctureSet.doubled_range(24)


class RegenerationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# small helpers over a fixed ambient


def words_of(factors: Sequence[Factor], K: PunctureSet) -> BraidWord:
    return word_product([f.word for f in factors], K.size)


def sup(factors: Sequence[Factor], w: BraidWord) -> list[Factor]:
    """X^W = W^-1 X W, factor by factor."""
    return [f.conjugated(w) for f in factors]


def sub(factors: Sequence[Factor], w: BraidWord) -> list[Factor]:
    """(X)_W = W X W^-1, factor by factor."""
    winv = w.inverse()
    return [f.conjugated(winv) for f in factors]


def twist(a, b, e: int, K: PunctureSet, side=BELOW, detours=(), provenance="given") -> list[Factor]:
    return [Factor.make(path(a, b, side, detours, provenance), e, K)]


def _pair(x) -> tuple[str, ...]:
    """'3' -> ('3',); ('3', "3'") or "3 3'" -> both members."""
    if isinstance(x, (tuple, list)):
        return tuple(label(y) for y in x)
    s = str(x).split()
    return tuple(label(y) for y in s)


def node(i, j, K: PunctureSet, side=BELOW, detours=(), provenance="given") -> list[Factor]:
    """Z^2 with either endpoint possibly a doubled pair.

    Z^2_{ii',j} = Z^2_{i'j} Z^2_{ij};  Z^2_{i,jj'} = Z^2_{ij'} Z^2_{ij};
    Z^2_{ii',jj'} = Z^2_{i'j'} Z^2_{i'j} Z^2_{ij'} Z^2_{ij}.
    """
    I, J = _pair(i), _pair(j)
    out: list[Factor] = []
    for x in reversed(I):
        for y in reversed(J):
            out += twist(x, y, 2, K, side, detours, provenance)
    return out


def cusp_triple(single, pair, K: PunctureSet, side=BELOW, detours=(), provenance="given") -> list[Factor]:
    """Z^(3)_{i,jj'} = (Z^3_ij)^{Z_jj'} Z^3_ij (Z^3_ij)^{Z_jj'^-1}; the doubled pair may be written first."""
    i = label(single)
    j, jp = _pair(pair)
    zjj = compile_path(path(j, jp), K).word
    base = twist(i, j, 3, K, side, detours, provenance)
    return sup(base, zjj) + base + sup(base, zjj.inverse())


def cusp(i, j, K: PunctureSet, side=BELOW, detours=(), provenance="given") -> list[Factor]:
    """Z^3 where one endpoint may be a doubled pair, in which case the triple is produced."""
    I, J = _pair(i), _pair(j)
    if len(I) == 2 and len(J) == 2:
        raise RegenerationError("a cusp factor cannot have both endpoints doubled")
    if len(J) == 2:
        return cusp_triple(I[0], J, K, side, detours, provenance)
    if len(I) == 2:
        return cusp_triple(J[0], I, K, side, detours, provenance)
    return twist(I[0], J[0], 3, K, side, detours, provenance)


def W(factors: Sequence[Factor], K: PunctureSet) -> BraidWord:
    """The motion of a written product A_1 A_2 ... A_k: push by A_1 first, A_k last.

    A push by a braid D sends the half-twist X to D X D^-1, so the composite
    motion is the word A_k ... A_1.
    """
    return word_product([f.word for f in reversed(factors)], K.size)


# ---------------------------------------------------------------------------
# regeneration rules on single factors


def _doubled_ambient(f: Factor) -> PunctureSet:
    K = f.ambient
    if K.is_doubled:
        raise RegenerationError("factor already lives over a doubled set")
    from .disk import double

    return double(K)


def _check_plain(f: Factor, exponent: int):
    if not f.is_twist:
        raise RegenerationError("sub-disk twists are not regenerated by the rules")
    if f.exponent != exponent:
        raise RegenerationError(f"rule needs exponent {exponent}, factor has {f.exponent}")
    if len(f.conjugator):
        raise RegenerationError("rules apply to unconjugated factors")
    for x in (f.path.start, f.path.end):
        if is_primed(x):
            raise RegenerationError("rules apply to base labels only")


def regenerate_branch(f: Factor) -> list[Factor]:
    """Z_{i,j} -> Z_{i',j} . Z_{i,j'} (the second below, passing above j)."""
    _check_plain(f, 1)
    K2 = _doubled_ambient(f)
    i, j = sorted((f.path.start, f.path.end), key=f.ambient.position)
    lifted = lift_path(f.path)
    first = PathSpec(prime(i), j, lifted.side, lifted.detours, lifted.provenance)
    second = PathSpec(i, prime(j), BELOW, lifted.detours + (Detour(j, j, ABOVE),), lifted.provenance)
    return [Factor.make(first, 1, K2, group=f.group), Factor.make(second, 1, K2, group=f.group)]


def regenerate_node(f: Factor, mode: str = "both") -> list[Factor]:
    """Rule 2. mode is 'i-side', 'j-side' or 'both'; i is the left endpoint."""
    _check_plain(f, 2)
    K2 = _doubled_ambient(f)
    i, j = sorted((f.path.start, f.path.end), key=f.ambient.position)
    lifted = lift_path(f.path)
    I = (i, prime(i)) if mode in ("i-side", "both") else (i,)
    J = (j, prime(j)) if mode in ("j-side", "both") else (j,)
    if mode not in ("i-side", "j-side", "both"):
        raise RegenerationError(f"unknown mode {mode}")
    out = node(I, J, K2, lifted.side, lifted.detours, lifted.provenance)
    return [replace(x, group=f.group) for x in out]


def regenerate_tangent(f: Factor) -> list[Factor]:
    """Rule 3: Z^4_{i,j} -> Z^(3)_{i,jj'}."""
    _check_plain(f, 4)
    K2 = _doubled_ambient(f)
    i, j = f.path.start, f.path.end
    lifted = lift_path(f.path)
    out = cusp_triple(i, (j, prime(j)), K2, lifted.side, lifted.detours, lifted.provenance)
    return [replace(x, group=f.group) for x in out]


# ---------------------------------------------------------------------------
# the F constructors


def _ints(*xs):
    return [int(base_of(label(x))) for x in xs]


def _theta(a, d, K) -> BraidWord:
    # Z_{a,a'}^-1 Z_{d,d'}^-1
    za = compile_path(path(a, prime(a)), K).word
    zd = compile_path(path(d, prime(d)), K).word
    return za.inverse() * zd.inverse()


def _close(half: list[Factor], a, d, K) -> list[Factor]:
    """F(a,b,c,d) = F . (F)_{Z_aa'^-1 Z_dd'^-1}."""
    return half + sub(half, _theta(a, d, K))


def F_u_half(a, b, c, d, K: PunctureSet = DOUBLED_24) -> list[Factor]:
    a, b, c, d = (label(x) for x in (a, b, c, d))
    ap, bp, cp, dp = (prime(x) for x in (a, b, c, d))
    Z2 = lambda x, y: twist(x, y, 2, K)
    Z2_bb_a = node((b, bp), a, K)
    out = cusp_triple(a, (b, bp), K)
    out += Z2(ap, d)
    out += sub(Z2(a, d), W(Z2_bb_a, K))
    out += sub(cusp_triple(d, (b, bp), K), W(Z2_bb_a, K))
    # pushes around d and a swap order when d < a
    first, second = (d, a) if _ints(a, d)[0] < _ints(a, d)[1] else (a, d)
    out += sub(twist(c, bp, 1, K), W(Z2(bp, first) + Z2(bp, second), K))
    out += sub(twist(cp, b, 1, K), W(Z2(b, first) + Z2(b, second) + Z2(b, bp), K))
    return out


def F_u(a, b, c, d, K: PunctureSet = DOUBLED_24) -> list[Factor]:
    """Requires {b,c} < {a,d} and c < b."""
    ia, ib, ic, id_ = _ints(a, b, c, d)
    if not (max(ib, ic) < min(ia, id_) and ic < ib):
        raise RegenerationError(f"F_u({a},{b},{c},{d}) needs {{b,c}} < {{a,d}} and c < b")
    return _close(F_u_half(a, b, c, d, K), label(a), label(d), K)


def F_m_half(a, b, c, d, K: PunctureSet = DOUBLED_24) -> list[Factor]:
    a, b, c, d = (label(x) for x in (a, b, c, d))
    ap, bp, cp, dp = (prime(x) for x in (a, b, c, d))
    Z2 = lambda x, y: twist(x, y, 2, K)
    zt_cb = sub(twist(c, bp, 1, K), W(Z2(bp, d) + Z2(c, cp) + Z2(ap, c), K))
    zt_bc = sub(twist(bp, c, 1, K), W(Z2(bp, d) + Z2(ap, cp), K))
    out = cusp_triple(ap, (c, cp), K)
    out += cusp_triple(d, (b, bp), K)
    out += zt_cb + zt_bc
    out += sub(Z2(ap, d), W(node(ap, (c, cp), K), K))
    out += Z2(a, d)
    return out


def F_m(a, b, c, d, K: PunctureSet = DOUBLED_24) -> list[Factor]:
    """Requires a < {b,c} < d."""
    ia, ib, ic, id_ = _ints(a, b, c, d)
    if not (ia < min(ib, ic) and max(ib, ic) < id_):
        raise RegenerationError(f"F_m({a},{b},{c},{d}) needs a < {{b,c}} < d")
    return _close(F_m_half(a, b, c, d, K), label(a), label(d), K)


def F_l_half(a, b, c, d, K: PunctureSet = DOUBLED_24) -> list[Factor]:
    a, b, c, d = (label(x) for x in (a, b, c, d))
    ap, bp, cp, dp = (prime(x) for x in (a, b, c, d))
    Z2 = lambda x, y: twist(x, y, 2, K)
    # the barred branch path c -> b' goes above when b < c; when c < b both
    # branch paths are taken on the same side
    bar_side = ABOVE if int(b) < int(c) else BELOW
    # pushes around a' and d' swap order when d < a
    x, y = (dp, ap) if _ints(a, d)[0] < _ints(a, d)[1] else (ap, dp)
    out = Z2(ap, d)
    out += cusp_triple(dp, (c, cp), K)
    out += sub(Z2(ap, dp), W(node(dp, (c, cp), K) + Z2(ap, d), K))
    out += sub(cusp_triple(ap, (c, cp), K), W(Z2(ap, d), K))
    out += sub(twist(c, bp, 1, K, side=bar_side), W(Z2(x, c) + Z2(y, c) + Z2(ap, d), K))
    out += sub(twist(cp, b, 1, K), W(Z2(c, cp) + Z2(x, cp) + Z2(y, cp) + Z2(ap, d), K))
    return out


def F_l(a, b, c, d, K: PunctureSet = DOUBLED_24) -> list[Factor]:
    """Requires {b,c} > {a,d}."""
    ia, ib, ic, id_ = _ints(a, b, c, d)
    if not min(ib, ic) > max(ia, id_):
        raise RegenerationError(f"F_l({a},{b},{c},{d}) needs {{b,c}} > {{a,d}}")
    return _close(F_l_half(a, b, c, d, K), label(a), label(d), K)


def build_F(kind: str, a, b, c, d, K: PunctureSet = DOUBLED_24) -> Factorization:
    fn = {"u": F_u, "m": F_m, "l": F_l, "ℓ": F_l}.get(kind)
    if fn is None:
        raise RegenerationError(f"unknown F kind {kind}")
    return Factorization(K, tuple(fn(a, b, c, d, K)))


# ---------------------------------------------------------------------------
# local BMF from a singularity table


@dataclass(frozen=True)
class TableRow:
    """skeleton: labels of the segment (two adjacent punctures, or more for a sub-disk).

    diffeo is one of 'half' (Delta<a,b>), 'full' (Delta^2<a,b>), 'ir-half'
    (Delta^{1/2}_IR, modelled as the half-twist on the skeleton) or 'none'.
    """

    skeleton: tuple[str, ...]
    epsilon: int
    diffeo: str


@dataclass(frozen=True)
class SingularityTable:
    ambient: PunctureSet
    rows: tuple[TableRow, ...]


def _row_diffeo(row: TableRow, K: PunctureSet) -> BraidWord:
    if row.diffeo == "none":
        return BraidWord.identity(K.size)
    if len(row.skeleton) != 2:
        raise RegenerationError("local diffeomorphisms are only defined on segments")
    h = compile_path(path(*row.skeleton), K).word
    if row.diffeo in ("half", "ir-half"):
        return h
    if row.diffeo == "full":
        return h * h
    raise RegenerationError(f"unknown diffeomorphism {row.diffeo}")


def local_bmf(table: SingularityTable) -> Factorization:
    """phi(delta_j) = Delta<xi_j>^eps_j, xi_j = lambda_j pushed through delta_{j-1}, ..., delta_1."""
    K = table.ambient
    out: list[Factor] = []
    motions: list[BraidWord] = []
    for idx, row in enumerate(table.rows, 1):
        for x in row.skeleton:
            K.position(x)
        # pushing a path by D turns its half-twist X into D X D^-1; delta_{j-1}
        # acts first, so the total motion is D_1 D_2 ... D_{j-1}
        D = word_product(motions, K.size) if motions else BraidWord.identity(K.size)
        conj = D.inverse()
        if len(row.skeleton) == 2:
            a, b = sorted(row.skeleton, key=K.position)
            if K.position(b) - K.position(a) != 1:
                raise RegenerationError(f"row {idx}: skeleton must join adjacent punctures")
            if row.epsilon == 1:
                e = 1
            elif row.epsilon in (2, 4):
                e = row.epsilon
            else:
                raise RegenerationError(f"row {idx}: epsilon must be 1, 2 or 4")
            out.append(Factor(path(a, b), e, conj, K, f"row{idx}"))
        else:
            if row.epsilon != 2:
                raise RegenerationError(f"row {idx}: a sub-disk skeleton carries the full twist (epsilon 2)")
            out.append(Factor(None, 2, conj, K, f"row{idx}", tuple(row.skeleton)))
        motions.append(_row_diffeo(row, K))
    return Factorization(K, tuple(out))


def prop_table() -> SingularityTable:
    """The 8-row table of the 5-point v_{2,3} in local numbering (punctures 1,2,3,3',4,5)."""
    K = PunctureSet(("1", "2", "3", "3'", "4", "5"))
    rows = (
        TableRow(("2", "3"), 2, "half"),
        TableRow(("3'", "4"), 2, "half"),
        TableRow(("1", "2"), 4, "full"),
        TableRow(("4", "5"), 4, "full"),
        TableRow(("3'", "4"), 2, "half"),
        TableRow(("2", "3"), 2, "half"),
        TableRow(("3", "3'"), 1, "ir-half"),
        TableRow(("1", "2", "4", "5"), 2, "none"),
    )
    return SingularityTable(K, rows)


# ---------------------------------------------------------------------------
# extra branch points


def forgetting_degrees(f: Factorization, lines: Sequence[int]) -> dict[int, int]:
    """deg f_i over the pair {i, i'} for each line i."""
    from .factorization import forget_strands
    from .braid import degree

    w = word_product([x.word for x in f.factors], f.n)
    return {i: degree(forget_strands(w, [str(i), f"{i}'"], f.ambient)) for i in lines}


def extra_branch_factors(audit: dict[int, int], K: PunctureSet = DOUBLED_24) -> list[Factor]:
    """(2 - k) copies of Z_{i,i'} for each line whose forgetting degree k is below 2.

    The lines with a deficit are numbered in order; their factors form the groups b1, b2, ...
    """
    out: list[Factor] = []
    n = 0
    for i in sorted(audit):
        k = audit[i]
        if k > 2:
            raise RegenerationError(f"forgetting degree {k} > 2 at line {i}: corrupted factorization")
        if k == 2:
            continue
        n += 1
        for _ in range(2 - k):
            out.append(Factor.make(path(str(i), f"{i}'"), 1, K, group=f"b{n}"))
    return out


def pre_branch(dataset) -> Factorization:
    """C_j phi_j for j from the last vertex down to 1."""
    fs: list[Factor] = []
    for j in sorted(dataset.model.vertices, reverse=True):
        fs += dataset.C(j).factors
        fs += dataset.phi(j).factors
    return Factorization(dataset.K, tuple(fs))


def assemble(dataset) -> Factorization:
    """The pre-branch product followed by the extra branch points b_1, b_2, ..."""
    pre = pre_branch(dataset)
    audit = forgetting_degrees(pre, dataset.model.line_labels)
    return Factorization(pre.ambient, pre.factors + tuple(extra_branch_factors(audit, pre.ambient)))


def assemble_phi2(dataset) -> Factorization:
    return assemble(dataset)


def assemble_phi1(dataset) -> Factorization:
    # the local blocks of the first surface already carry both branch points of every line
    return assemble(dataset)
