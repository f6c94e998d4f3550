"""Incidence models of degenerated surfaces and the parasitic-intersection factors.

Dataset files (``*.inc``) are INI style:

    [meta]        name, provenance notes
    [vertices]    list = 1 2 ... 10
    [lines]       <label> = <a> <b>          endpoints, a < b
    [planes]      <name> = <l1> <l2> <l3>    a plane as its three boundary lines
    [parasitic]   <t> = <DSL over base 24>    the block D_t as given
    [groups]      <j> = <t> <t> ...           lines whose D blocks form C~_j
    [blocks]      file = <name>.bmf           local blocks phi[j] in the DSL

Line labels must agree with the numeration rule: with endpoints a < b and
c < d, L < M iff b < d, or b = d and a < c.
"""

from __future__ import annotations

import configparser
import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Iterable

from .disk import ABOVE, BELOW, Detour, PunctureSet
from .factorization import Factor, Factorization
from . import regeneration as regen

DATA_ENV = "BRAIDFORGE_DATA"
DATASETS = ("pillow", "magician")


class IncidenceError(ValueError):
    pass


@dataclass(frozen=True)
class VertexClass:
    vertex: int
    k: int
    lines_through: tuple[int, ...]


@dataclass
class IncidenceModel:
    name: str
    vertices: tuple[int, ...]
    lines: dict[int, tuple[int, int]]
    planes: dict[str, frozenset[int]]
    parasitic: dict[int, str] = field(default_factory=dict)
    groups: dict[int, tuple[int, ...]] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)
    blocks_text: str = ""

    def __post_init__(self):
        vs = set(self.vertices)
        for lab, (a, b) in self.lines.items():
            if a not in vs or b not in vs:
                raise IncidenceError(f"line {lab} uses an unknown vertex")
            if a == b:
                raise IncidenceError(f"line {lab} has equal endpoints")
        for name, ls in self.planes.items():
            for l in ls:
                if l not in self.lines:
                    raise IncidenceError(f"plane {name} uses unknown line {l}")

    @property
    def line_labels(self) -> list[int]:
        return sorted(self.lines)

    @cached_property
    def adjacency(self) -> dict[int, tuple[str, str]]:
        """line -> the two planes it bounds."""
        adj: dict[int, list[str]] = {l: [] for l in self.lines}
        for name, ls in self.planes.items():
            for l in ls:
                adj[l].append(name)
        for l, ps in adj.items():
            if len(ps) != 2:
                raise IncidenceError(f"line {l} bounds {len(ps)} planes, expected 2")
        return {l: (ps[0], ps[1]) for l, ps in adj.items()}

    def plane_vertices(self, name: str) -> frozenset[int]:
        return frozenset(v for l in self.planes[name] for v in self.lines[l])

    def meets(self, p: int, t: int) -> bool:
        return bool(set(self.lines[p]) & set(self.lines[t]))

    @property
    def base_ambient(self) -> PunctureSet:
        return PunctureSet.base(len(self.lines))

    @property
    def doubled_ambient(self) -> PunctureSet:
        return PunctureSet.doubled_range(len(self.lines))


# ---------------------------------------------------------------------------
# numeration and classification


def line_key(endpoints: tuple[int, int]) -> tuple[int, int]:
    a, b = sorted(endpoints)
    return (b, a)


def order_lines(m: IncidenceModel | Iterable[tuple[int, int]]) -> dict[int, tuple[int, int]]:
    """Number lines 1..N by (larger endpoint, smaller endpoint)."""
    pairs = list(m.lines.values()) if isinstance(m, IncidenceModel) else [tuple(p) for p in m]
    norm = [tuple(sorted(p)) for p in pairs]
    if len(set(norm)) != len(norm):
        raise IncidenceError("duplicate line endpoints")
    for a, b in norm:
        if a == b:
            raise IncidenceError("a line needs two distinct endpoints")
    return {i: p for i, p in enumerate(sorted(norm, key=line_key), 1)}


def check_numeration(m: IncidenceModel) -> None:
    expected = order_lines(m)
    got = {l: tuple(sorted(p)) for l, p in m.lines.items()}
    if expected != got:
        bad = sorted(l for l in got if expected.get(l) != got[l])
        raise IncidenceError(f"{m.name}: line labels break the numeration rule at {bad}")


def classify_vertices(m: IncidenceModel) -> list[VertexClass]:
    out = []
    for v in m.vertices:
        k = sum(1 for name in m.planes if v in m.plane_vertices(name))
        through = tuple(l for l in m.line_labels if v in m.lines[l])
        out.append(VertexClass(v, k, through))
    return out


def disjoint_sets(m: IncidenceModel) -> dict[int, list[int]]:
    """t -> the earlier lines p < t that do not meet L_t."""
    return {t: [p for p in m.line_labels if p < t and not m.meets(p, t)] for t in m.line_labels}


def parasitic_pair_count(m: IncidenceModel) -> int:
    return sum(len(v) for v in disjoint_sets(m).values())


def grouping_by_smaller_endpoint(m: IncidenceModel) -> dict[int, tuple[int, ...]]:
    return {v: tuple(l for l in m.line_labels if min(m.lines[l]) == v) for v in m.vertices}


# ---------------------------------------------------------------------------
# the D blocks


def _resolver_free(text: str, K: PunctureSet, group: str) -> Factorization:
    from .dsl import parse_dsl

    return parse_dsl(text, None, K, group)


def d_block_base(m: IncidenceModel, t: int) -> Factorization:
    """The shipped D_t over the base punctures (one Z^2 per disjoint earlier line)."""
    K = m.base_ambient
    text = m.parasitic.get(t, "")
    return _resolver_free(text, K, f"D{t}")


def generated_detours(m: IncidenceModel, p: int, t: int, side: str) -> tuple[Detour, ...]:
    """Detour around the lines strictly between p and t that pass through the larger endpoint of L_t.

    The detour is taken on the side opposite to the path's own side.
    """
    v = max(m.lines[t])
    qs = [q for q in range(p + 1, t) if v in m.lines[q]]
    other = ABOVE if side == BELOW else BELOW
    runs: list[list[int]] = []
    for q in qs:
        if runs and runs[-1][1] == q - 1:
            runs[-1][1] = q
        else:
            runs.append([q, q])
    return tuple(Detour(str(lo), str(hi), other) for lo, hi in runs)


def _normalized(dets) -> tuple:
    return tuple(sorted((int(d.lo), int(d.hi), d.side) for d in dets))


@dataclass(frozen=True)
class Discrepancy:
    t: int
    p: int
    kind: str
    table: str
    generated: str


def check_d_table(m: IncidenceModel) -> list[Discrepancy]:
    """Compare the shipped table with the incidence data and with the detour rule."""
    out: list[Discrepancy] = []
    dis = disjoint_sets(m)
    for t in m.line_labels:
        blk = d_block_base(m, t)
        ps = []
        for f in blk.factors:
            a, b = sorted((int(f.path.start), int(f.path.end)))
            if b != t or f.exponent != 2:
                out.append(Discrepancy(t, a, "shape", f"{a},{b}^{f.exponent}", f"{a},{t}^2"))
                continue
            ps.append(a)
            gen = generated_detours(m, a, t, f.path.side)
            if _normalized(gen) != _normalized(f.path.detours):
                out.append(Discrepancy(t, a, "detour", repr(_normalized(f.path.detours)), repr(_normalized(gen))))
        if sorted(ps) != dis[t]:
            out.append(Discrepancy(t, 0, "index-set", repr(sorted(ps)), repr(dis[t])))
    return out


def parasitic_factors(m: IncidenceModel, j: int, regenerate: bool = True) -> Factorization:
    """The block C~_j (or, regenerated, C_j): the D_t blocks of the lines assigned to vertex j."""
    if j not in m.groups:
        raise IncidenceError(f"{m.name}: no parasitic group for vertex {j}")
    dis = disjoint_sets(m)
    factors: list[Factor] = []
    for t in m.groups[j]:
        blk = d_block_base(m, t)
        got = sorted(min(int(f.path.start), int(f.path.end)) for f in blk.factors)
        if got != dis[t]:
            raise IncidenceError(f"{m.name}: D_{t} covers {got}, the incidence data gives {dis[t]}")
        for f in blk.factors:
            if regenerate:
                factors.extend(x.with_group(f"C{j}") for x in regen.regenerate_node(f, "both"))
            else:
                factors.append(f.with_group(f"C{j}"))
    K = m.doubled_ambient if regenerate else m.base_ambient
    return Factorization(K, tuple(factors))


# ---------------------------------------------------------------------------
# loading


def data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("braidforge") / "data"))


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split())


def parse_inc(text: str, base_dir: Path | None = None) -> IncidenceModel:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",), inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise IncidenceError(f"bad incidence file: {exc}") from None
    for sec in ("meta", "vertices", "lines", "planes"):
        if not cp.has_section(sec):
            raise IncidenceError(f"missing section [{sec}]")
    meta = dict(cp["meta"])
    vertices = _ints(cp["vertices"]["list"])
    lines = {int(k): tuple(sorted(_ints(v))) for k, v in cp["lines"].items()}
    planes = {k: frozenset(_ints(v)) for k, v in cp["planes"].items()}
    parasitic = {int(k): v.strip() for k, v in cp["parasitic"].items()} if cp.has_section("parasitic") else {}
    groups = {int(k): _ints(v) for k, v in cp["groups"].items()} if cp.has_section("groups") else {}
    blocks = ""
    if cp.has_section("blocks") and base_dir is not None:
        blocks = (base_dir / cp["blocks"]["file"]).read_text(encoding="utf-8")
    m = IncidenceModel(meta.get("name", "?"), vertices, lines, planes, parasitic, groups, meta, blocks)
    for l, ps in m.planes.items():
        if len(ps) != 3:
            raise IncidenceError(f"plane {l} must list three lines")
    check_numeration(m)
    return m


def load_dataset(name: str) -> IncidenceModel:
    if name not in DATASETS and not name.endswith(".inc"):
        raise IncidenceError(f"unknown dataset {name}; choose from {', '.join(DATASETS)}")
    p = Path(name) if name.endswith(".inc") else data_dir() / f"{name}.inc"
    if not p.exists():
        raise IncidenceError(f"dataset file {p} not found")
    return parse_inc(p.read_text(encoding="utf-8"), p.parent)


# ---------------------------------------------------------------------------
# local blocks


_BLOCK_HEADER = re.compile(r"^\[(\w+)\s+(\d+)\]\s*$", re.M)


def split_blocks(text: str) -> dict[tuple[str, int], str]:
    """Split a block file on headers ``[phi 3]`` into DSL chunks."""
    out = {}
    heads = list(_BLOCK_HEADER.finditer(text))
    prelude = text[: heads[0].start()] if heads else text
    for i, h in enumerate(heads):
        end = heads[i + 1].start() if i + 1 < len(heads) else len(text)
        out[(h.group(1), int(h.group(2)))] = prelude + text[h.end():end]
    return out


class Dataset:
    """An incidence model together with its block data and the resolver for C[j], phi[j], b[n]."""

    def __init__(self, model: IncidenceModel):
        self.model = model
        self._blocks = split_blocks(model.blocks_text) if model.blocks_text else {}
        self._cache: dict = {}

    @classmethod
    def load(cls, name: str) -> "Dataset":
        return cls(load_dataset(name))

    @property
    def K(self) -> PunctureSet:
        return self.model.doubled_ambient

    def C(self, j: int) -> Factorization:
        key = ("C", j)
        if key not in self._cache:
            self._cache[key] = parasitic_factors(self.model, j)
        return self._cache[key]

    def phi(self, j: int) -> Factorization:
        from .dsl import parse_dsl

        key = ("phi", j)
        if key not in self._cache:
            if key not in self._blocks:
                raise IncidenceError(f"{self.model.name}: no block phi[{j}]")
            self._cache[key] = parse_dsl(self._blocks[key], self.resolve, self.K, f"phi{j}")
        return self._cache[key]

    def resolve(self, name: str, j: int):
        if name == "C":
            return self.C(j).factors
        if name == "phi":
            return self.phi(j).factors
        if name == "b":
            fs = [f for f in self.assembled().factors if f.group == f"b{j}"]
            if not fs:
                raise KeyError(f"b{j}")
            return fs
        raise IncidenceError(f"unknown reference {name}")

    def assembled(self) -> Factorization:
        if "assembled" not in self._cache:
            self._cache["assembled"] = regen.assemble(self)
        return self._cache["assembled"]

    @property
    def block_indices(self) -> list[int]:
        return sorted(j for (kind, j) in self._blocks if kind == "phi")


def tetrahedron() -> IncidenceModel:
    """Toy model: the boundary of a tetrahedron, four planes and four 3-points."""
    vs = (1, 2, 3, 4)
    lines = order_lines(combinations(vs, 2))
    idx = {p: l for l, p in lines.items()}
    planes = {}
    for n, tri in enumerate(combinations(vs, 3), 1):
        planes[f"P{n}"] = frozenset(idx[tuple(sorted(e))] for e in combinations(tri, 2))
    return IncidenceModel("tetrahedron", vs, lines, planes)
