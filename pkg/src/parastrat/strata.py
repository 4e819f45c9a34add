"""Stratifications: one term per Weyl-orbit class, the closed-form enumeration, and their comparison."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from math import factorial, prod

from .levi import LeviShape, levi_shape, closed_form_levi_shape
from .motive import IrrAtom, VirtualClass, sym, wreath_quotient
from .partitions import (
    Partition,
    StratumLabel,
    class_label,
    labels_for_family,
    subset_from_label,
)
from .rootdata import GroupFamily, Kind, weyl_order
from .weyl import Subset, check_bound, stabilizer_quotient_order, subset_orbits

FORMULA_MARKER = "formula-derived, unvalidated at this rank"


@dataclass(frozen=True)
class WeylDescriptor:
    sym_part: tuple[tuple[int, int], ...]  # (block size j, multiplicity k_j)
    sign_kind: str = "none"  # none | full | even
    sign_rank: int = 0

    @property
    def order(self) -> int:
        base = prod(factorial(k) for _, k in self.sym_part)
        if self.sign_kind == "full":
            return base * 2**self.sign_rank
        if self.sign_kind == "even":
            return base * 2 ** max(self.sign_rank - 1, 0)
        return base

    def render(self) -> str:
        perms = " x ".join(f"S_{k}" for _, k in self.sym_part if k > 1)
        if self.sign_kind == "none":
            return perms or "1"
        signs = f"Z_2^{self.sign_rank}" if self.sign_kind == "full" else f"H_{self.sign_rank}"
        return f"{signs} x| ({perms})" if perms else signs

    def latex(self) -> str:
        perms = " \\times ".join(f"S_{{{k}}}" for _, k in self.sym_part if k > 1)
        if self.sign_kind == "none":
            return perms or "1"
        signs = f"\\mathbb{{Z}}_2^{{{self.sign_rank}}}" if self.sign_kind == "full" else f"H_{{{self.sign_rank}}}"
        return f"{signs} \\rtimes ({perms})" if perms else signs

    def sign_json(self):
        if self.sign_kind == "none":
            return None
        return {"kind": self.sign_kind, "rank": self.sign_rank}


def _descriptor(sign_kind: str, blocks) -> WeylDescriptor:
    sym_part = Partition(tuple(blocks)).multiplicities
    rank = len(blocks)
    if rank == 0:
        sign_kind = "none"
    return WeylDescriptor(sym_part, sign_kind, rank if sign_kind != "none" else 0)


def bruteforce_descriptor(family: GroupFamily, levi: LeviShape) -> WeylDescriptor:
    """Descriptor read off the root-datum Levi: block permutations, plus sign changes on blocks.

    In the even orthogonal family a block can be negated on its own when its size is even or
    when a tail can absorb the sign; otherwise only an even number of odd blocks can flip.
    """
    if family.is_type_a:
        return _descriptor("none", levi.gl_blocks)
    if family.kind in (Kind.SP, Kind.SO_ODD):
        return _descriptor("full", levi.gl_blocks)
    if levi.tail is not None or all(b % 2 == 0 for b in levi.gl_blocks):
        return _descriptor("full", levi.gl_blocks)
    return _descriptor("even", levi.gl_blocks)


def formula_descriptor(label: StratumLabel) -> WeylDescriptor:
    family = label.family
    if family.is_type_a:
        kind = "none"
    elif family.kind is Kind.SO_EVEN:
        kind = "even"
    else:
        kind = "full"
    return _descriptor(kind, label.partition.parts)


def make_atom(family: GroupFamily, levi: LeviShape, weyl: WeylDescriptor, gamma: str) -> VirtualClass:
    """[X*_L(Gamma) // W] as atoms: Sym powers for block permutations, wreath quotients for signs."""
    gl = [(IrrAtom("GL", j, gamma=gamma), k) for j, k in Partition(levi.gl_blocks).multiplicities]
    if family.kind in (Kind.SL, Kind.PGL):
        return VirtualClass.of(IrrAtom(family.kind.value, family.n, levi.decoration, gamma, levi.gl_blocks))
    if family.kind is Kind.GL:
        out = VirtualClass.one()
        for atom, k in gl:
            out = out * sym(k, atom)
        return out
    out = wreath_quotient(weyl.sign_kind, gl) if weyl.sign_kind != "none" else VirtualClass.one()
    if levi.tail is not None:
        out = out * VirtualClass.of(IrrAtom(levi.tail.kind.value, levi.tail.m, gamma=gamma))
    return out


@dataclass(frozen=True)
class StratumTerm:
    label: StratumLabel
    representative: Subset
    orbit_size: int | None
    levi: LeviShape
    weyl: WeylDescriptor
    weyl_order_bruteforce: int | None
    atom: VirtualClass
    normalizer_splits: bool = True
    members: tuple[Subset, ...] = ()

    def to_json(self) -> dict:
        return {
            "label": self.label.to_json(),
            "representative": list(self.representative),
            "orbit_size": self.orbit_size,
            "levi": self.levi.to_json(),
            "weyl": {
                "sym_part": [list(p) for p in self.weyl.sym_part],
                "sign_part": self.weyl.sign_json(),
                "order": self.weyl.order,
                "order_bruteforce": self.weyl_order_bruteforce,
            },
            "normalizer_splits": self.normalizer_splits,
            "atom": self.atom.render(),
        }


@dataclass
class Stratification:
    family: GroupFamily
    terms: list[StratumTerm]
    diagnostics: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    formula_derived: bool = False

    def to_json(self) -> dict:
        out = {
            "family": self.family.kind.value,
            "n": self.family.n,
            "strata": [t.to_json() for t in self.terms],
            "diagnostics": self.diagnostics,
            "notes": self.notes,
        }
        if self.formula_derived:
            out["status"] = FORMULA_MARKER
        return out


def _boundary_notes(family: GroupFamily) -> list[str]:
    if family.is_type_a:
        return []
    return ["m = 0 boundary labels are included; the usual closed-form sums start at m = 1"]


def stratify(family: GroupFamily, gamma: str = "Gamma", max_rank: int | None = None, jobs: int = 1) -> Stratification:
    """The brute-force stratification, with every disagreement against the closed forms in diagnostics."""
    check_bound(family, max_rank)
    terms = []
    for orbit in subset_orbits(family, max_rank, jobs):
        label = class_label(family, orbit.members)
        if label.sector == "unmatched":
            rep = orbit.representative
        else:
            rep = subset_from_label(label)
        levi = levi_shape(family, rep)
        weyl = bruteforce_descriptor(family, levi)
        terms.append(
            StratumTerm(
                label=label,
                representative=rep,
                orbit_size=orbit.size,
                levi=levi,
                weyl=weyl,
                weyl_order_bruteforce=stabilizer_quotient_order(family, rep, max_rank),
                atom=make_atom(family, levi, weyl, gamma),
                members=orbit.members,
            )
        )
    terms.sort(key=lambda t: t.label.sort_key())
    strat = Stratification(family, terms)
    report = cross_validate(strat, stratify_by_formula(family, gamma))
    strat.diagnostics = report.discrepancies
    strat.notes = report.notes
    return strat


def stratify_by_formula(family: GroupFamily, gamma: str = "Gamma") -> list[StratumTerm]:
    terms = []
    for label in labels_for_family(family):
        levi = closed_form_levi_shape(family, label.sector, label.partition)
        weyl = formula_descriptor(label)
        terms.append(
            StratumTerm(
                label=label,
                representative=subset_from_label(label),
                orbit_size=None,
                levi=levi,
                weyl=weyl,
                weyl_order_bruteforce=None,
                atom=make_atom(family, levi, weyl, gamma),
            )
        )
    return terms


def formula_stratification(family: GroupFamily, gamma: str = "Gamma") -> Stratification:
    """Closed-form output for ranks beyond exhaustive enumeration."""
    return Stratification(
        family, stratify_by_formula(family, gamma), notes=_boundary_notes(family), formula_derived=True
    )


def subset_sector(family: GroupFamily, subset: Subset) -> str | None:
    n = family.n
    if family.kind in (Kind.SP, Kind.SO_ODD):
        return "tail" if n in subset else "plain"
    if family.kind is Kind.SO_EVEN:
        if n in subset:
            return "d1"
        return "d2" if n - 1 in subset else "d3"
    return None


_KIND_ORDER = (
    "count",
    "descriptor_order",
    "unmatched_class",
    "merged_label",
    "levi",
    "weyl_order",
    "sector_crossing",
)


@dataclass
class CrossValidationReport:
    family: GroupFamily
    discrepancies: list[dict]
    notes: list[str]

    @property
    def empty(self) -> bool:
        return not self.discrepancies

    def to_json(self) -> dict:
        return {
            "family": self.family.kind.value,
            "n": self.family.n,
            "discrepancies": self.discrepancies,
            "notes": self.notes,
        }


def cross_validate(a: Stratification, b: list[StratumTerm]) -> CrossValidationReport:
    family = a.family
    if any(t.label.family != family for t in b):
        raise ValueError("cross-validation needs terms of the same family")
    records: list[tuple[tuple, dict]] = []

    def add(kind: str, label: StratumLabel | None, record: dict):
        key = (_KIND_ORDER.index(kind), label.sort_key() if label else (), json.dumps(record, sort_keys=True))
        records.append((key, {"kind": kind, **record}))

    if len(a.terms) != len(b):
        add("count", None, {"bruteforce": len(a.terms), "formula": len(b)})

    by_label = {t.label: t for t in a.terms}
    owner = {m: t for t in a.terms for m in t.members}
    for t in a.terms:
        if t.weyl_order_bruteforce is not None and t.weyl.order != t.weyl_order_bruteforce:
            add("descriptor_order", t.label, {"label": t.label.to_json(), "descriptor": t.weyl.order,
                                              "bruteforce": t.weyl_order_bruteforce})
        if t.label.sector == "unmatched":
            add("unmatched_class", t.label, {"label": t.label.to_json(), "representative": list(t.representative),
                                             "levi": t.levi.render()})
        sectors: dict[str, list[list[int]]] = {}
        for m in t.members:
            s = subset_sector(family, m)
            if s is not None:
                sectors.setdefault(s, []).append(list(m))
        if len(sectors) > 1:
            add("sector_crossing", t.label, {"label": t.label.to_json(), "sectors": dict(sorted(sectors.items()))})

    for f in b:
        mine = by_label.get(f.label)
        if mine is None:
            holder = owner.get(f.representative)
            add("merged_label", f.label, {
                "label": f.label.to_json(),
                "subset": list(f.representative),
                "stratum": None if holder is None else holder.label.to_json(),
            })
            continue
        if mine.levi.block_key() != f.levi.block_key():
            add("levi", f.label, {"label": f.label.to_json(), "bruteforce": mine.levi.render(),
                                  "formula": f.levi.render()})
        if mine.weyl_order_bruteforce is not None and mine.weyl_order_bruteforce != f.weyl.order:
            add("weyl_order", f.label, {"label": f.label.to_json(), "bruteforce": mine.weyl_order_bruteforce,
                                        "formula": f.weyl.order, "formula_descriptor": f.weyl.render()})

    records.sort(key=lambda r: r[0])
    return CrossValidationReport(family, [r for _, r in records], _boundary_notes(family))


_PAIRS = {(Kind.SP, Kind.SO_ODD), (Kind.SO_ODD, Kind.SP), (Kind.SL, Kind.PGL), (Kind.PGL, Kind.SL)}
_SWAP_DECORATION = {"det_one": "mod_scalar", "mod_scalar": "det_one", "none": "none"}


@dataclass
class PairingReport:
    pairs: list[tuple[StratumLabel, StratumLabel]]
    unmatched: list[dict]
    mismatches: list[dict]

    @property
    def total(self) -> bool:
        return not self.unmatched and not self.mismatches


def langlands_pairing(a: Stratification, b: Stratification) -> PairingReport:
    if (a.family.kind, b.family.kind) not in _PAIRS or a.family.n != b.family.n:
        raise ValueError(f"no Langlands pairing between {a.family.describe()} and {b.family.describe()}")
    index_b = {(t.label.sector, t.label.partition): t for t in b.terms}
    seen = set()
    pairs, unmatched, mismatches = [], [], []
    for ta in a.terms:
        key = (ta.label.sector, ta.label.partition)
        tb = index_b.get(key)
        if tb is None:
            unmatched.append({"side": "a", "label": ta.label.to_json()})
            continue
        seen.add(key)
        pairs.append((ta.label, tb.label))
        problems = []
        if ta.levi.gl_blocks != tb.levi.gl_blocks:
            problems.append("gl_blocks")
        if (ta.levi.tail is None) != (tb.levi.tail is None) or (
            ta.levi.tail is not None
            and (ta.levi.tail.m != tb.levi.tail.m or (ta.levi.tail.kind, tb.levi.tail.kind) not in _PAIRS)
        ):
            problems.append("tail")
        if _SWAP_DECORATION[ta.levi.decoration] != tb.levi.decoration:
            problems.append("decoration")
        if ta.weyl != tb.weyl or ta.weyl_order_bruteforce != tb.weyl_order_bruteforce:
            problems.append("weyl")
        if ta.orbit_size != tb.orbit_size:
            problems.append("orbit_size")
        if problems:
            mismatches.append({"label": ta.label.to_json(), "fields": problems})
    for tb in b.terms:
        if (tb.label.sector, tb.label.partition) not in seen:
            unmatched.append({"side": "b", "label": tb.label.to_json()})
    return PairingReport(pairs, unmatched, mismatches)


# Rendering ---------------------------------------------------------------------------------------

_FLAT_LIST = re.compile(r"\[\s*(-?\d+(?:,\s*-?\d+)*)\s*\]")


def dumps(obj) -> str:
    """Indented JSON with integer arrays kept on one line."""
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    return _FLAT_LIST.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]", text) + "\n"


def _header(s: Stratification) -> str:
    f = s.family
    return f"{f.describe()}: {len(s.terms)} strata, |W| = {weyl_order(f)}, 2^|Delta| = {2 ** f.delta_size} subsets"


def _text(s: Stratification) -> str:
    rows = [("label", "rep", "size", "Levi", "Weyl", "order", "order(bf)")]
    for t in s.terms:
        rows.append((
            t.label.render(),
            "{" + ",".join(map(str, t.representative)) + "}",
            "-" if t.orbit_size is None else str(t.orbit_size),
            t.levi.render(),
            t.weyl.render(),
            str(t.weyl.order),
            "-" if t.weyl_order_bruteforce is None else str(t.weyl_order_bruteforce),
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = [_header(s)]
    if s.formula_derived:
        lines.append(f"status: {FORMULA_MARKER}")
    lines.extend("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)
    for note in s.notes:
        lines.append(f"note: {note}")
    if not s.formula_derived:
        lines.append(f"diagnostics: {len(s.diagnostics)}")
        lines.extend("  " + json.dumps(d, sort_keys=True) for d in s.diagnostics)
    return "\n".join(lines) + "\n"


def _group_latex(f: GroupFamily) -> str:
    name = f.name.split("_")[0]
    return f"\\operatorname{{{name}}}_{{{f.matrix_size}}}"


def _latex(s: Stratification) -> str:
    lines = [f"% {_header(s)}"]
    if s.formula_derived:
        lines.append(f"% {FORMULA_MARKER}")
    lines.append("\\begin{aligned}")
    for i, t in enumerate(s.terms):
        weyl = t.weyl.latex()
        quotient = "" if weyl == "1" else f" /\\!\\!/ \\left({weyl}\\right)"
        body = f"\\left[\\mathcal{{X}}^*_{{{t.levi.latex()}}}(\\Gamma){quotient}\\right]"
        lead = f"\\left[\\mathcal{{X}}_{{{_group_latex(s.family)}}}(\\Gamma)\\right] &= " if i == 0 else "&\\quad + "
        end = " \\\\" if i < len(s.terms) - 1 else ""
        lines.append(f"{lead}{body} && {t.label.latex()}{end}")
    lines.append("\\end{aligned}")
    return "\n".join(lines) + "\n"


def emit(s: Stratification, fmt: str = "text") -> str:
    if fmt == "text":
        return _text(s)
    if fmt == "latex":
        return _latex(s)
    if fmt == "json":
        return dumps(s.to_json())
    raise ValueError(f"unknown format {fmt!r}")
