"""Command-line front end. Every command prints a key: value report."""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import regeneration as regen
from . import vankampen as vk
from .braid import BraidWord, product as word_product
from .degeneration import DATASETS, Dataset, IncidenceError, parasitic_pair_count
from .disk import PathError, PunctureSet
from .dsl import DSLError, parse_dsl, print_factorization
from .factorization import (
    Factorization,
    FactorizationError,
    degree_audit,
    invariance_check,
    orbit_search,
    verify_bmf,
)


class UsageError(Exception):
    pass


@dataclass
class Manifest:
    dataset: str | None = None
    file: Path | None = None
    budget: int | None = None
    projective: bool = False
    report: Path | None = None
    options: dict = field(default_factory=dict)

    def check(self):
        if self.file is not None and not self.file.exists():
            raise UsageError(f"file {self.file} not found")
        if self.dataset is not None and self.dataset not in DATASETS:
            raise UsageError(f"unknown dataset {self.dataset}")

    def factorization(self) -> tuple[Factorization, Dataset | None]:
        if self.file is not None:
            return parse_dsl(self.file.read_text(encoding="utf-8")), None
        if self.dataset is not None:
            ds = Dataset.load(self.dataset)
            return ds.assembled(), ds
        raise UsageError("give --dataset or --file")


def _yn(x) -> str:
    if x is None:
        return "unavailable"
    return "yes" if x else "no"


class Report:
    def __init__(self):
        self.lines: list[str] = []

    def __call__(self, key: str, value=""):
        self.lines.append(f"{key}: {value}" if value != "" else key)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


# ---------------------------------------------------------------------------
# commands; each returns True when every requested check passed


def cmd_verify(m: Manifest, out: Report, args) -> bool:
    f, _ = m.factorization()
    r = verify_bmf(f, budget_seconds=m.budget or 30, method=args.method)
    out("strands", f.n)
    out("factors", len(f))
    out("degree", r.degree)
    out("expected_degree", r.expected_degree)
    out("degree_ok", _yn(r.degree_ok))
    out("permutation_ok", _yn(r.permutation_ok))
    out("delta_squared_ok", _yn(r.delta_squared_ok))
    out("method", args.method)
    if r.note:
        out("note", r.note)
    return r.all_ok


def cmd_audit(m: Manifest, out: Report, args) -> bool:
    f, ds = m.factorization()
    if ds is None:
        for group, d in degree_audit(f).items():
            out(group or "ungrouped", d)
        return f.degree == f.n * (f.n - 1)
    model = ds.model
    out("dataset", model.name)
    out("disjoint_pairs", parasitic_pair_count(model))
    parasitic = local = 0
    for j in sorted(model.vertices, reverse=True):
        c, p = ds.C(j).degree, ds.phi(j).degree
        parasitic += c
        local += p
        out(f"C{j}", c)
        out(f"phi{j}", p)
    pre = regen.pre_branch(ds)
    audit = regen.forgetting_degrees(pre, model.line_labels)
    for i in model.line_labels:
        out(f"f{i}", f"{audit[i]} deficit {2 - audit[i]}")
    branch = regen.extra_branch_factors(audit, pre.ambient)
    lines_by_group: dict[str, str] = {}
    for b in branch:
        lines_by_group.setdefault(b.group, b.path.start)
    for g, line in lines_by_group.items():
        out(g, f"Z[{line},{line}'] x{sum(1 for b in branch if b.group == g)}")
    out("parasitic", parasitic)
    out("local", local)
    out("pre_branch", pre.degree)
    out("branch", sum(b.degree for b in branch))
    total = pre.degree + sum(b.degree for b in branch)
    out("total", total)
    return total == pre.n * (pre.n - 1)


def cmd_regenerate(m: Manifest, out: Report, args) -> bool:
    if m.file is None:
        raise UsageError("regenerate needs --file with a factorization over base punctures")
    f = parse_dsl(m.file.read_text(encoding="utf-8"))
    rules = {1: regen.regenerate_branch, 2: lambda x: regen.regenerate_node(x, args.mode), 4: regen.regenerate_tangent}
    fs = []
    for x in f.factors:
        if x.exponent not in rules:
            raise UsageError(f"no regeneration rule for exponent {x.exponent}")
        fs += rules[x.exponent](x)
    g = Factorization(fs[0].ambient if fs else f.ambient, tuple(fs))
    out("degree_before", f.degree)
    out("degree_after", g.degree)
    out.lines.append(print_factorization(g).rstrip("\n"))
    return True


def cmd_orbit(m: Manifest, out: Report, args) -> bool:
    f, _ = m.factorization()
    res = orbit_search(f, m.budget or 1000)
    out("states", len(res))
    out("complete", _yn(res.complete))
    return True


def _conjugator(text: str, K: PunctureSet, power: int) -> BraidWord:
    """A braid given as DSL factors (``Z[2,2']``) or as ``sigma(1,-2)``."""
    text = text.strip()
    if text.startswith("sigma(") and text.endswith(")"):
        w = BraidWord(K.size, tuple(int(x) for x in text[6:-1].split(",") if x.strip()))
    else:
        fs = parse_dsl(text, ambient=K).factors
        w = word_product([x.word for x in fs], K.size)
    return w ** power


def cmd_invariance(m: Manifest, out: Report, args) -> bool:
    f, _ = m.factorization()
    if not args.by:
        raise UsageError("invariance needs --by")
    h = _conjugator(args.by, f.ambient, args.power)
    res = invariance_check(f, h, m.budget or 100000)
    out("status", res.status)
    out("states", res.states)
    if res.certificate is not None:
        out("certificate", " ".join(map(str, res.certificate)) or "empty")
    return res.status == "invariant"


def _group(m: Manifest) -> tuple[vk.FPGroup, Dataset | None]:
    f, ds = m.factorization()
    return vk.vk_relations(f, projective=m.projective), ds


def cmd_vankampen(m: Manifest, out: Report, args) -> bool:
    g, _ = _group(m)
    if args.simplify:
        g = vk.tietze_simplify(g, time_budget=m.budget or 30)
    out.lines.append(g.format().rstrip("\n"))
    return True


def cmd_abelianize(m: Manifest, out: Report, args) -> bool:
    if m.file is not None and m.file.suffix == ".pres":
        g, _ = vk.parse_presentation(m.file.read_text(encoding="utf-8"))
    else:
        g, _ = _group(m)
    t = time.perf_counter()
    ab = vk.abelianize(g)
    out("generators", g.rank)
    out("relators", len(g.relators))
    out("free_rank", ab.free_rank)
    out("torsion", " ".join(map(str, ab.torsion)) or "none")
    out("abelianization", ab)
    if args.timing:
        out("seconds", f"{time.perf_counter() - t:.3f}")
    return True


def cmd_monodromy(m: Manifest, out: Report, args) -> bool:
    if m.dataset is None:
        raise UsageError("monodromy needs --dataset")
    g, ds = _group(m)
    rep = vk.geometric_monodromy(g, ds.model)
    k = rep.rep.degree
    out("relators_checked", rep.relators_checked)
    out("relators_failing", len(rep.failures))
    for i, w in rep.failures[:20]:
        out(f"failing_relator_{i}", w)
    out(f"image generates S{k}", _yn(rep.generates))
    return rep.ok


def cmd_enumerate(m: Manifest, out: Report, args) -> bool:
    if m.file is None:
        raise UsageError("enumerate needs --file with a presentation")
    g, subs = vk.parse_presentation(m.file.read_text(encoding="utf-8"))
    res = vk.todd_coxeter(g, subs, limit=m.budget or 4096)
    out("status", res.status)
    if res.status == "index":
        out("index", res.index)
        out("verified", _yn(res.verified))
    return res.status == "index" and res.verified


COMMANDS = {
    "verify": cmd_verify,
    "audit": cmd_audit,
    "regenerate": cmd_regenerate,
    "orbit": cmd_orbit,
    "invariance": cmd_invariance,
    "vankampen": cmd_vankampen,
    "abelianize": cmd_abelianize,
    "monodromy": cmd_monodromy,
    "enumerate": cmd_enumerate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="braidforge", description="Braid monodromy factorizations and their groups.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dataset", choices=DATASETS)
    common.add_argument("--file", type=Path)
    common.add_argument("--budget", type=int)
    common.add_argument("--projective", action="store_true")
    common.add_argument("--report", type=Path)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "verify":
            sp.add_argument("--method", choices=("dynnikov", "garside"), default="dynnikov")
        if name == "regenerate":
            sp.add_argument("--mode", choices=("i-side", "j-side", "both"), default="both")
        if name == "invariance":
            sp.add_argument("--by", help="conjugating braid, as DSL factors or sigma(i,...)")
            sp.add_argument("--power", type=int, default=1)
        if name == "vankampen":
            sp.add_argument("--simplify", action="store_true")
        if name == "abelianize":
            sp.add_argument("--timing", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    m = Manifest(args.dataset, args.file, args.budget, args.projective, args.report)
    out = Report()
    out("command", args.command)
    try:
        m.check()
        ok = COMMANDS[args.command](m, out, args)
    except (UsageError, DSLError, IncidenceError, PathError, FactorizationError,
            regen.RegenerationError, vk.VanKampenError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out("result", "pass" if ok else "fail")
    text = out.text()
    if m.report is not None:
        m.report.write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
