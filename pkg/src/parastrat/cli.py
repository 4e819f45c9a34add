"""Command-line entry point: rootdatum, orbits, strata, evaluate, check."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from .errors import EnumerationBoundError, RankOutOfRangeError, UnsupportedError
from .evaluation import compare_with_reference, evaluate_stratification
from .levi import cocharacter_of_subset, levi_shape
from .motive import AtomTable
from .partitions import canonical_subsets, enumerate_partitions, label_from_subset, subset_from_label
from .rootdata import TOKENS, GroupFamily, Kind, build_root_datum, dual_root_datum, pairing, reflect, weyl_order
from .strata import FORMULA_MARKER, cross_validate, dumps, emit, formula_stratification, langlands_pairing, stratify, stratify_by_formula
from .weyl import all_subsets, check_bound, enumeration_bound, generate_group, simple_reflections, subset_orbits, weyl_table

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _family(args) -> GroupFamily:
    try:
        return GroupFamily.from_token(args.family, args.n)
    except RankOutOfRangeError as exc:
        raise UsageError(str(exc)) from None


def _fmt(args) -> str:
    return "json" if getattr(args, "json", False) else args.format


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def cmd_rootdatum(args, out) -> int:
    family = _family(args)
    datum = build_root_datum(family)
    fmt = _fmt(args)
    if fmt == "json":
        out.write(dumps(datum.to_json()))
        return EXIT_OK
    if fmt == "latex":
        simple = ", ".join(f"\\alpha_{{{i + 1}}} = {_vec(a)}" for i, a in enumerate(datum.simple_roots))
        out.write(f"% {family.describe()}\n\\Delta = \\{{{simple}\\}},\\quad |W| = {weyl_order(family)}\n")
        return EXIT_OK
    lines = [
        f"{family.describe()}: {len(datum.roots)} roots, |Delta| = {len(datum.simple_roots)}, |W| = {weyl_order(family)}",
        f"characters: {datum.char_lattice.kind}, cocharacters: {datum.cochar_lattice.kind}",
        "simple roots:",
    ]
    lines += [f"  {i + 1}: {_vec(a)}  coroot {_vec(datum.coroot(a))}" for i, a in enumerate(datum.simple_roots)]
    lines.append("roots and coroots:")
    lines += [f"  {_vec(r)}  {_vec(c)}" for r, c in zip(datum.roots, datum.coroots)]
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_orbits(args, out) -> int:
    family = _family(args)
    classes = subset_orbits(family, args.max_weyl, args.jobs)
    if _fmt(args) == "json":
        out.write(dumps({"family": family.kind.value, "n": family.n, "classes": [c.to_json() for c in classes]}))
        return EXIT_OK
    lines = [f"{family.describe()}: {len(classes)} orbit classes of {2 ** family.delta_size} subsets"]
    for c in classes:
        members = " ".join("{" + ",".join(map(str, m)) + "}" for m in c.members)
        lines.append(f"  {{{','.join(map(str, c.representative))}}}  size {c.size}: {members}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_strata(args, out) -> int:
    family = _family(args)
    if args.formula:
        out.write(emit(formula_stratification(family), _fmt(args)))
        return EXIT_OK
    out.write(emit(stratify(family, max_rank=args.max_weyl, jobs=args.jobs), _fmt(args)))
    return EXIT_OK


def _load_table(args):
    if args.atoms is None:
        if args.gamma is None:
            raise UsageError("evaluate needs --gamma or --atoms")
        return None
    try:
        return AtomTable.load(args.atoms)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read atom table {args.atoms}: {exc}") from None


def cmd_evaluate(args, out) -> int:
    family = _family(args)
    table = _load_table(args)
    try:
        result = evaluate_stratification(family, args.gamma, table, max_rank=args.max_weyl, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    verdict = compare_with_reference(result, args.max_weyl) if args.check else None
    fmt = _fmt(args)
    if fmt == "json":
        doc = result.to_json()
        if verdict is not None:
            doc["check"] = {"match": verdict.match, "reference": verdict.reference.to_json()}
        out.write(dumps(doc))
    elif fmt == "latex":
        out.write(f"% {family.describe()}, Gamma = {result.gamma}\n")
        out.write(f"e\\left(\\mathcal{{X}}_{{{family.name}}}(\\mathrm{{{result.gamma}}})\\right) = {result.value.latex()}\n")
    else:
        rows = [(c.label.render(), c.value.render(), c.method, "none" if c.residual.is_zero() else c.residual.render())
                for c in result.per_stratum]
        w0 = max(len("label"), *(len(r[0]) for r in rows))
        w1 = max(len("value"), *(len(r[1]) for r in rows))
        w2 = max(len("method"), *(len(r[2]) for r in rows))
        lines = [
            f"{family.describe()}, Gamma = {result.gamma}",
            f"value: {result.value.render()}",
            f"residual: {'none' if result.residual.is_zero() else result.residual.render()}",
            f"{'label'.ljust(w0)}  {'value'.ljust(w1)}  {'method'.ljust(w2)}  residual",
        ]
        lines += [f"{a.ljust(w0)}  {b.ljust(w1)}  {c.ljust(w2)}  {d}" for a, b, c, d in rows]
        if verdict is not None:
            lines.append(f"reference T/W: {verdict.reference.render()}")
            lines.append(f"verdict: {verdict.render()}")
        out.write("\n".join(lines) + "\n")
    if verdict is not None and not verdict.match:
        return EXIT_VALIDATION
    return EXIT_OK


# check -------------------------------------------------------------------------------------------

def _partition_count(m: int) -> int:
    return len(enumerate_partitions(m))


def _root_datum_checks(family: GroupFamily) -> list[tuple[str, bool, str]]:
    datum = build_root_datum(family)
    out = []
    bad = [r for r, c in zip(datum.roots, datum.coroots) if pairing(r, c) != 2]
    out.append(("rootdatum.pairing", not bad, f"{len(bad)} roots pair != 2 with their coroot"))
    closed = all(reflect(datum, a, r) in datum.root_index for a in datum.simple_roots for r in datum.roots)
    out.append(("rootdatum.reflection_closure", closed, "roots closed under simple reflections"))
    neg = all(datum.coroot(tuple(-x for x in r)) == tuple(-x for x in c) for r, c in zip(datum.roots, datum.coroots))
    out.append(("rootdatum.negation", neg, "roots and matched coroots closed under negation"))
    dual = dual_root_datum(datum)
    out.append(("rootdatum.dual_involution", dual_root_datum(dual) == datum, f"dual is {dual.family.describe()}"))
    if family.kind in (Kind.SP, Kind.SO_ODD, Kind.SL, Kind.PGL):
        other = build_root_datum(dual.family)
        out.append(("rootdatum.dual_family", dual.matched_pairs == other.matched_pairs,
                    f"dual matches {other.family.describe()}"))
    return out


def _weyl_checks(family: GroupFamily) -> list[tuple[str, bool, str]]:
    table = weyl_table(family)
    datum = table.datum
    expected = weyl_order(family)
    out = [("weyl.order", table.size == expected, f"|W| = {table.size}, closed form {expected}")]
    permutes = table.permutes_roots()
    out.append(("weyl.permutes_roots", permutes, "every element maps roots to roots"))
    if expected <= 50000:
        generated = len(generate_group(simple_reflections(family), family.n))
        out.append(("weyl.generated", generated == expected, f"simple reflections generate {generated} elements"))
    return out


def _orbit_checks(family: GroupFamily, args) -> list[tuple[str, bool, str]]:
    classes = subset_orbits(family, args.max_weyl, args.jobs)
    seen = [m for c in classes for m in c.members]
    total = 2 ** family.delta_size
    out = [("orbits.partition", len(seen) == total and len(set(seen)) == total,
            f"{len(classes)} classes covering {len(set(seen))} of {total} subsets")]
    n = family.n
    if family.is_type_a:
        want = _partition_count(n)
        out.append(("orbits.count", len(classes) == want, f"{len(classes)} classes, p({n}) = {want}"))
    elif family.kind in (Kind.SP, Kind.SO_ODD):
        want = _partition_count(n) + sum(_partition_count(m) for m in range(n))
        out.append(("orbits.count", len(classes) == want, f"{len(classes)} classes, p(n) + sum p(m<n) = {want}"))
    return out


def _levi_checks(family: GroupFamily, args) -> list[tuple[str, bool, str]]:
    datum = build_root_datum(family)
    drop = 1 if family.kind in (Kind.SL, Kind.PGL) else 0
    rank_ok = blocks_ok = cochar_ok = True
    for subset in all_subsets(family.delta_size):
        shape = levi_shape(family, subset)
        rank_ok &= shape.central_rank + sum(c.rank for c in shape.components) == family.n - drop
        blocks_ok &= sum(shape.gl_blocks) + (shape.tail.m if shape.tail else 0) == family.n
        lam = cocharacter_of_subset(family, subset)
        for i, alpha in enumerate(datum.simple_roots, start=1):
            p = pairing(alpha, lam)
            cochar_ok &= p == 0 if i in subset else p > 0
    invariant = all(
        len({tuple(sorted((c.type, c.rank) for c in levi_shape(family, m).components)) for m in c.members}) == 1
        for c in subset_orbits(family, args.max_weyl, args.jobs)
    )
    return [
        ("levi.rank", rank_ok, "central rank plus component ranks equals n"),
        ("levi.blocks", blocks_ok, "block sizes plus tail half-rank equal n"),
        ("levi.cocharacter", cochar_ok, "cocharacter vanishes on I and is positive off I"),
        ("levi.class_invariant", invariant, "component types constant on orbit classes"),
    ]


def _label_checks(family: GroupFamily) -> list[tuple[str, bool, str]]:
    canon = canonical_subsets(family)
    ok = all(subset_from_label(label_from_subset(family, s)) == s for s in canon)
    return [("labels.round_trip", ok, f"{len(canon)} canonical subsets")]


def _strata_checks(family: GroupFamily, args, strat) -> tuple[list[tuple[str, bool, str]], list[dict]]:
    out = []
    total = sum(t.orbit_size for t in strat.terms)
    out.append(("strata.exhaustive", total == 2 ** family.delta_size, f"orbit sizes sum to {total}"))
    labels = [t.label for t in strat.terms]
    out.append(("strata.unique_labels", len(set(labels)) == len(labels), f"{len(labels)} strata"))
    orders = all(t.weyl.order == t.weyl_order_bruteforce for t in strat.terms)
    out.append(("strata.weyl_orders", orders, "descriptor orders equal brute-force stabilizer quotients"))
    report = cross_validate(strat, stratify_by_formula(family))
    return out, report.discrepancies


def _pairing_checks(family: GroupFamily, args, strat) -> list[tuple[str, bool, str]]:
    partner = {Kind.SP: Kind.SO_ODD, Kind.SO_ODD: Kind.SP, Kind.SL: Kind.PGL, Kind.PGL: Kind.SL}.get(family.kind)
    if partner is None:
        return []
    other = stratify(GroupFamily(partner, family.n), max_rank=args.max_weyl, jobs=args.jobs)
    report = langlands_pairing(strat, other)
    return [("langlands.pairing", report.total,
             f"{len(report.pairs)} pairs with {GroupFamily(partner, family.n).describe()}, "
             f"{len(report.unmatched)} unmatched, {len(report.mismatches)} mismatched")]


def _gamma_checks(family: GroupFamily, args, strat) -> list[tuple[str, bool, str]]:
    if family.kind in (Kind.SL, Kind.PGL):
        return []
    result = evaluate_stratification(family, "Z", strat=stratify(family, gamma="Z", max_rank=args.max_weyl,
                                                                  jobs=args.jobs), max_rank=args.max_weyl)
    verdict = compare_with_reference(result, args.max_weyl)
    support = all(c.value.is_zero() for c, t in zip(result.per_stratum, strat.terms) if not t.levi.is_torus())
    return [
        ("gamma_z.reference", verdict.match, verdict.render()),
        ("gamma_z.torus_support", support, "only torus-type strata contribute"),
    ]


def cmd_check(args, out) -> int:
    family = _family(args)
    check_bound(family, args.max_weyl)
    strat = stratify(family, max_rank=args.max_weyl, jobs=args.jobs)
    checks = []
    checks += _root_datum_checks(family)
    checks += _weyl_checks(family)
    checks += _orbit_checks(family, args)
    checks += _levi_checks(family, args)
    checks += _label_checks(family)
    strata_checks, discrepancies = _strata_checks(family, args, strat)
    checks += strata_checks
    checks += _pairing_checks(family, args, strat)
    checks += _gamma_checks(family, args, strat)

    allowed = family.kind is Kind.SO_EVEN and args.allow_diagnostics
    cross_ok = not discrepancies
    failed = [c for c in checks if not c[1]] or ([] if cross_ok or allowed else ["cross_validate"])

    if _fmt(args) == "json":
        out.write(dumps({
            "family": family.kind.value,
            "n": family.n,
            "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in checks],
            "cross_validation": {"discrepancies": discrepancies, "allowed": allowed},
            "ok": not failed,
        }))
    else:
        lines = [f"check {family.describe()}"]
        lines += [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in checks]
        status = "PASS" if cross_ok else ("ALLOWED" if allowed else "FAIL")
        lines.append(f"{status} cross_validate: {len(discrepancies)} discrepancies")
        lines += ["  " + json.dumps(d, sort_keys=True) for d in discrepancies]
        lines.append("result: " + ("ok" if not failed else "FAILED"))
        out.write("\n".join(lines) + "\n")
    return EXIT_VALIDATION if failed else EXIT_OK


COMMANDS: dict[str, Callable] = {
    "rootdatum": cmd_rootdatum,
    "orbits": cmd_orbits,
    "strata": cmd_strata,
    "evaluate": cmd_evaluate,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("family", choices=list(TOKENS), help="group family token")
    common.add_argument("n", type=int, help="Dynkin rank parameter (sp 3 = Sp_6, so-even 4 = SO_8)")
    common.add_argument("--format", choices=("text", "latex", "json"), default="text")
    common.add_argument("--json", action="store_true", help="shorthand for --format json")
    common.add_argument("--max-weyl", type=int, default=None, metavar="N",
                        help="largest rank n enumerated exhaustively (default 8, or $PARASTRAT_MAX_WEYL)")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for orbit enumeration")

    parser = argparse.ArgumentParser(prog="parastrat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rootdatum", parents=[common], help="root datum of a family")
    sub.add_parser("orbits", parents=[common], help="Weyl-orbit classes of subsets of simple roots")
    p = sub.add_parser("strata", parents=[common], help="parabolic stratification")
    p.add_argument("--formula", action="store_true", help=f"closed-form enumeration only ({FORMULA_MARKER})")
    p = sub.add_parser("evaluate", parents=[common], help="E-polynomial of the stratification")
    p.add_argument("--gamma", default=None, help="Gamma name (built-in: Z)")
    p.add_argument("--atoms", default=None, metavar="PATH", help="JSON atom table")
    p.add_argument("--check", action="store_true", help="compare with the T/W reference")
    p = sub.add_parser("check", parents=[common], help="run every validation for one family and rank")
    p.add_argument("--allow-diagnostics", action="store_true",
                   help="accept cross-validation findings for so-even")
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        err.write("parastrat: --jobs must be at least 1\n")
        return EXIT_USAGE
    try:
        args.max_weyl = enumeration_bound(args.max_weyl)
    except ValueError:
        err.write("parastrat: PARASTRAT_MAX_WEYL must be an integer\n")
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, UnsupportedError) as exc:
        err.write(f"parastrat: {exc}\n")
        return EXIT_USAGE
    except EnumerationBoundError as exc:
        err.write(f"parastrat: {exc}\n")
        return EXIT_BOUND


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
