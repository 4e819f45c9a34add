import json

import pytest

import oracles
from parastrat.errors import EnumerationBoundError
from parastrat.partitions import Partition, labels_for_family
from parastrat.rootdata import MIN_RANK, GroupFamily, Kind
from parastrat.strata import (
    FORMULA_MARKER,
    cross_validate,
    emit,
    formula_stratification,
    langlands_pairing,
    stratify,
    stratify_by_formula,
)
from parastrat.weyl import all_subsets


def fam(token, n):
    return GroupFamily.from_token(token, n)


def test_gl3_strata():
    s = stratify(fam("gl", 3))
    assert [t.label.render() for t in s.terms] == ["[1^3]", "[1^1 2^1]", "[3^1]"]
    assert [t.levi.render() for t in s.terms] == ["GL_1^3", "GL_1 x GL_2", "GL_3"]
    assert [t.weyl.order for t in s.terms] == [6, 1, 1]
    assert [t.orbit_size for t in s.terms] == [1, 2, 1]
    assert s.diagnostics == []


def test_gl5_worked_stratum():
    s = stratify(fam("gl", 5))
    (t,) = [t for t in s.terms if t.label.partition == Partition((1, 2, 2))]
    assert t.representative == (2, 4)
    assert t.weyl.order == t.weyl_order_bruteforce == 2
    assert "Sym^2" in t.atom.render()


def test_sp2_strata():
    s = stratify(fam("sp", 2))
    assert len(s.terms) == 4
    assert [(t.label.sector, t.label.m) for t in s.terms] == [("plain", 2), ("plain", 2), ("tail", 0), ("tail", 1)]
    assert s.diagnostics == []
    assert s.notes


def test_formula_counts():
    assert len(stratify_by_formula(fam("sp", 3))) == 7
    assert len(stratify_by_formula(fam("so-odd", 2))) == 4
    assert len(stratify_by_formula(fam("gl", 4))) == 5


@pytest.mark.parametrize("kind", [Kind.GL, Kind.SL, Kind.PGL, Kind.SP, Kind.SO_ODD])
def test_brute_force_agrees_with_closed_forms(kind):
    for n in range(MIN_RANK[kind], 7):
        f = GroupFamily(kind, n)
        s = stratify(f)
        assert cross_validate(s, stratify_by_formula(f)).empty
        assert all(t.weyl.order == t.weyl_order_bruteforce for t in s.terms)


def test_even_orthogonal_reports_discrepancies():
    s = stratify(fam("so-even", 4))
    kinds = {d["kind"] for d in s.diagnostics}
    assert "sector_crossing" in kinds and "unmatched_class" in kinds
    assert len(s.diagnostics) == 23
    # The descriptor used for the strata still matches brute-force orders.
    for n in range(2, 7):
        assert all(t.weyl.order == t.weyl_order_bruteforce for t in stratify(fam("so-even", n)).terms)


def test_weyl_orders_match_oracle():
    for token, n in [("gl", 4), ("sp", 3), ("so-odd", 3), ("so-even", 3), ("so-even", 4)]:
        for t in stratify(fam(token, n)).terms:
            kind = GroupFamily.from_token(token, n).kind.value
            assert t.weyl_order_bruteforce == oracles.residual_weyl_order(kind, n, t.representative)


def test_strata_are_exhaustive_and_distinct():
    for kind in Kind:
        for n in range(MIN_RANK[kind], 7):
            f = GroupFamily(kind, n)
            s = stratify(f)
            members = [m for t in s.terms for m in t.members]
            assert sorted(members) == sorted(all_subsets(f.delta_size))
            assert len({t.label for t in s.terms}) == len(s.terms)
            assert sum(t.orbit_size for t in s.terms) == 2 ** f.delta_size
            assert all(t.representative in t.members for t in s.terms)


def test_a_type_count_is_partition_number():
    for n in range(1, 8):
        assert len(stratify(fam("gl", n)).terms) == oracles.partition_count(n)


def test_pairings():
    report = langlands_pairing(stratify(fam("sp", 3)), stratify(fam("so-odd", 3)))
    assert report.total and len(report.pairs) == 7
    report = langlands_pairing(stratify(fam("sl", 3)), stratify(fam("pgl", 3)))
    assert report.total and len(report.pairs) == 3
    sl = stratify(fam("sl", 3)).terms[0].levi.decoration
    pgl = stratify(fam("pgl", 3)).terms[0].levi.decoration
    assert (sl, pgl) == ("det_one", "mod_scalar")
    assert len(langlands_pairing(stratify(fam("sp", 1)), stratify(fam("so-odd", 1))).pairs) == 2
    with pytest.raises(ValueError):
        langlands_pairing(stratify(fam("sp", 3)), stratify(fam("gl", 3)))


def test_pairing_totality_for_small_ranks():
    for n in range(1, 6):
        assert langlands_pairing(stratify(fam("sp", n)), stratify(fam("so-odd", n))).total
    for n in range(2, 6):
        assert langlands_pairing(stratify(fam("sl", n)), stratify(fam("pgl", n))).total


def test_emit_formats():
    gl2 = stratify(fam("gl", 2))
    latex = emit(gl2, "latex")
    assert latex.count("\\mathcal{X}^*") == 2 and "\\begin{aligned}" in latex
    text = emit(stratify(fam("sp", 2)), "text").splitlines()
    assert text[0] == "Sp_4 (sp 2): 4 strata, |W| = 8, 2^|Delta| = 4 subsets"
    rows = text[2:6]
    assert [r.split("  ")[0].strip() for r in rows] == ["[1^2]", "[2^1]", "tail m=0 []", "tail m=1 [1^1]"]
    assert text[-1] == "diagnostics: 0"
    data = json.loads(emit(gl2, "json"))
    assert set(data) >= {"family", "n", "strata", "diagnostics"}
    stratum = data["strata"][0]
    assert set(stratum) >= {"label", "representative", "orbit_size", "levi", "weyl", "normalizer_splits", "atom"}
    assert set(stratum["weyl"]) == {"sym_part", "sign_part", "order", "order_bruteforce"}
    with pytest.raises(ValueError):
        emit(gl2, "yaml")


def test_emit_is_deterministic():
    for fmt in ("text", "latex", "json"):
        assert emit(stratify(fam("so-even", 4)), fmt) == emit(stratify(fam("so-even", 4), jobs=3), fmt)


def test_formula_mode_beyond_bound():
    f = fam("gl", 9)
    with pytest.raises(EnumerationBoundError):
        stratify(f)
    s = formula_stratification(f)
    assert len(s.terms) == oracles.partition_count(9)
    assert FORMULA_MARKER in emit(s, "text")
    assert json.loads(emit(s, "json"))["status"] == FORMULA_MARKER
    assert [t.label for t in s.terms] == labels_for_family(f)
