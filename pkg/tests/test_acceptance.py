"""One test per acceptance criterion; each prints an ACCEPTANCE line and the summary lists them all."""

import io
import random
import subprocess
import sys
import time

import oracles
from parastrat.cli import run
from parastrat.evaluation import compare_with_reference, evaluate_stratification
from parastrat.levi import levi_shape, torus_description
from parastrat.motive import EPolynomial, adams, molien_torus_quotient, sym_epoly
from parastrat.rootdata import MIN_RANK, GroupFamily, Kind, build_root_datum, dual_root_datum, pairing, reflect
from parastrat.strata import cross_validate, emit, langlands_pairing, stratify, stratify_by_formula
from parastrat.weyl import WeylElement, all_subsets, stabilizer_quotient_order, subset_orbits

UV = EPolynomial.uv()


def report(number: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_criterion_1_root_datum_suite(criterion):
    criterion("1 root-datum suite")
    start = time.perf_counter()
    failures = []
    for kind in Kind:
        for n in range(MIN_RANK[kind], 9):
            d = build_root_datum(GroupFamily(kind, n))
            if any(pairing(r, c) != 2 for r, c in zip(d.roots, d.coroots)):
                failures.append(f"{d.family.name} pairing")
            if any(reflect(d, a, r) not in d.root_index for a in d.simple_roots for r in d.roots):
                failures.append(f"{d.family.name} closure")
            if dual_root_datum(dual_root_datum(d)) != d:
                failures.append(f"{d.family.name} involution")
            if kind is Kind.SP and dual_root_datum(d).matched_pairs != build_root_datum(GroupFamily(Kind.SO_ODD, n)).matched_pairs:
                failures.append(f"{d.family.name} dual")
    elapsed = time.perf_counter() - start
    report(1, not failures and elapsed < 5, f"{failures or 'all exact'}, {elapsed:.2f}s")


def test_criterion_2_orbit_counts(criterion):
    criterion("2 orbit-count suite")
    start = time.perf_counter()
    failures = []
    for kind in Kind:
        if kind is Kind.SO_EVEN:
            continue
        for n in range(MIN_RANK[kind], 7):
            got = len(subset_orbits(GroupFamily(kind, n)))
            want = oracles.partition_count(n)
            if kind in (Kind.SP, Kind.SO_ODD):
                want += sum(oracles.partition_count(m) for m in range(n))
            if got != want:
                failures.append(f"{kind.value} {n}: {got} != {want}")
    a_counts = [len(subset_orbits(GroupFamily(Kind.GL, n))) for n in range(1, 7)]
    sp_small = [len(subset_orbits(GroupFamily(Kind.SP, n))) for n in (2, 3)]
    ok = not failures and a_counts == [1, 2, 3, 5, 7, 11] and sp_small == [4, 7]
    elapsed = time.perf_counter() - start
    report(2, ok and elapsed < 60, f"A-type {a_counts}, sp {sp_small}, {failures or 'no mismatches'}, {elapsed:.2f}s")


def test_criterion_3_worked_examples(criterion):
    criterion("3 worked-example suite")
    gl5 = GroupFamily.from_token("gl", 5)
    sp5 = GroupFamily.from_token("sp", 5)
    checks = {
        "GL_5 torus": torus_description(gl5, (2, 4)).render() == "diag(a, b, b, c, c)",
        "GL_5 Levi": levi_shape(gl5, (2, 4)).render() == "GL_1 x GL_2^2",
        "GL_5 W_I": stabilizer_quotient_order(gl5, (2, 4)) == 2,
        "Sp_10 {1,4}": sorted(levi_shape(sp5, (1, 4)).gl_blocks) == [1, 2, 2] and levi_shape(sp5, (1, 4)).tail is None,
        "Sp_10 {1,4,5}": levi_shape(sp5, (1, 4, 5)).render() == "GL_1 x GL_2 x Sp_4",
    }
    report(3, all(checks.values()), ", ".join(f"{k} {'ok' if v else 'WRONG'}" for k, v in checks.items()))


def test_criterion_4_integers_end_to_end(criterion):
    criterion("4 Gamma = Z end-to-end")
    start = time.perf_counter()
    failures = []
    cases = [("gl", n, UV**n - UV ** (n - 1)) for n in range(1, 9)]
    cases += [(token, n, UV**n) for token in ("sp", "so-odd") for n in range(1, 7)]
    for token, n, expected in cases:
        result = evaluate_stratification(GroupFamily.from_token(token, n), "Z")
        verdict = compare_with_reference(result)
        if result.value != expected or not verdict.match:
            failures.append(f"{token} {n}: {verdict.render()}")
    elapsed = time.perf_counter() - start
    report(4, not failures and elapsed < 60, f"{len(cases)} cases, {failures or 'all match T/W'}, {elapsed:.2f}s")


def test_criterion_5_symmetric_products(criterion):
    criterion("5 symmetric-product oracle")
    rng = random.Random(20261015)
    failures = 0
    for _ in range(20):
        e = EPolynomial({(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(-5, 5) for _ in range(rng.randint(1, 4))})
        p2, p3 = adams(e, 2), adams(e, 3)
        # Newton: 2 h2 = p1^2 + p2, 6 h3 = p1^3 + 3 p1 p2 + 2 p3.
        failures += sym_epoly(e, 2) * 2 != e * e + p2
        failures += sym_epoly(e, 3) * 6 != e**3 + e * p2 * 3 + p3 * 2
    from itertools import permutations

    perm_ok = all(
        molien_torus_quotient(k, [WeylElement(p, (1,) * k) for p in permutations(range(k))]) == sym_epoly(UV - 1, k)
        for k in range(1, 6)
    )
    report(5, failures == 0 and perm_ok, f"{failures} Newton mismatches over 20 polynomials, S_k Molien {'ok' if perm_ok else 'WRONG'}")


def test_criterion_6_langlands_pairing(criterion):
    criterion("6 Langlands pairing")
    failures = []
    for n in range(1, 7):
        pairs = [("sp", "so-odd")] + ([("sl", "pgl")] if n >= 2 else [])
        for a, b in pairs:
            r = langlands_pairing(stratify(GroupFamily.from_token(a, n)), stratify(GroupFamily.from_token(b, n)))
            if not r.total:
                failures.append(f"{a}/{b} {n}: {r.unmatched} {r.mismatches}")
    report(6, not failures, failures or "total label-preserving bijections for n <= 6")


def test_criterion_7_even_orthogonal_integrity(criterion):
    criterion("7 SOeven integrity")
    start = time.perf_counter()
    problems = []
    summary = []
    for n in (4, 5):
        f = GroupFamily(Kind.SO_EVEN, n)
        s = stratify(f)
        members = sorted(m for t in s.terms for m in t.members)
        if members != sorted(all_subsets(n)):
            problems.append(f"n={n} classes do not partition 2^n")
        for t in s.terms:
            if t.orbit_size != len(t.members) or t.weyl_order_bruteforce is None:
                problems.append(f"n={n} {t.label.render()} unverified")
            elif t.weyl.order != t.weyl_order_bruteforce:
                problems.append(f"n={n} {t.label.render()} order")
        again = cross_validate(stratify(f, jobs=3), stratify_by_formula(f))
        if again.discrepancies != s.diagnostics:
            problems.append(f"n={n} diagnostics not deterministic")
        labels = {t.label for t in s.terms}
        for d in s.diagnostics:
            if d["kind"] in ("levi", "weyl_order") and not any(t.label.to_json() == d["label"] for t in s.terms):
                problems.append(f"n={n} diagnostic names a missing stratum")
        summary.append(f"n={n}: {len(s.terms)} strata, {len(s.diagnostics)} diagnostics")
        assert len(labels) == len(s.terms)
    elapsed = time.perf_counter() - start
    report(7, not problems and elapsed < 120, f"{'; '.join(summary)}, {problems or 'consistent'}, {elapsed:.2f}s")


def _check_output(*argv) -> bytes:
    out = io.StringIO()
    run(list(argv), out, io.StringIO())
    return out.getvalue().encode()


def test_criterion_8_determinism(criterion):
    criterion("8 determinism")
    mismatches = []
    for argv in (["check", "so-even", "5", "--allow-diagnostics"], ["check", "sp", "4"], ["check", "gl", "5", "--json"]):
        baseline = _check_output(*argv)
        for jobs in ("1", "4", "1", "4"):
            if _check_output(*argv, "--jobs", jobs) != baseline:
                mismatches.append(f"{' '.join(argv)} --jobs {jobs}")
    fresh = subprocess.run([sys.executable, "-m", "parastrat", "check", "so-even", "5", "--allow-diagnostics",
                            "--jobs", "4"], capture_output=True).stdout
    if fresh != _check_output("check", "so-even", "5", "--allow-diagnostics"):
        mismatches.append("fresh process differs")
    report(8, not mismatches, mismatches or "byte-identical across runs, processes and thread counts")
