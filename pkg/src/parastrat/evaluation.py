"""Numeric specialization of stratifications, the built-in Gamma = Z table and the T/W reference."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedError
from .motive import (
    AtomTable,
    EPolynomial,
    IrrAtom,
    VirtualClass,
    molien_torus_quotient,
    specialize,
)
from .rootdata import GroupFamily, Kind
from .strata import Stratification, StratumLabel, stratify
from .weyl import enumerate_weyl

BUILTIN_GAMMAS = ("Z",)


def _integers_rule(atom: IrrAtom, inversion: bool) -> EPolynomial | None:
    # A single matrix always has an eigenline, isotropic in the classical cases, so only the
    # rank-one torus has irreducible representations.
    if atom.gamma != "Z" or atom.decoration != "none" or atom.blocks:
        return None
    if atom.group == "GL" and atom.size == 1:
        return EPolynomial.uv() if inversion else EPolynomial.uv() - 1
    if inversion:
        return None
    if atom.group == "GL" and atom.size >= 2:
        return EPolynomial()
    if atom.group in ("Sp", "SOodd") and atom.size >= 1:
        return EPolynomial()
    if atom.group == "SOeven" and atom.size >= 2:
        return EPolynomial()
    return None


def builtin_table(gamma: str) -> AtomTable:
    if gamma != "Z":
        raise UnsupportedError(f"no built-in atom table for Gamma = {gamma!r}; built-ins: {', '.join(BUILTIN_GAMMAS)}")
    return AtomTable(rule=_integers_rule)


@dataclass(frozen=True)
class StratumContribution:
    label: StratumLabel
    value: EPolynomial
    residual: VirtualClass
    method: str  # table | molien | symbolic


@dataclass(frozen=True)
class Evaluation:
    family: GroupFamily
    gamma: str
    value: EPolynomial
    residual: VirtualClass
    per_stratum: tuple[StratumContribution, ...]

    def to_json(self) -> dict:
        return {
            "family": self.family.kind.value,
            "n": self.family.n,
            "gamma": self.gamma,
            "value": self.value.to_json(),
            "residual": None if self.residual.is_zero() else self.residual.render(),
            "per_stratum": [
                {
                    "label": c.label.to_json(),
                    "value": c.value.to_json(),
                    "residual": None if c.residual.is_zero() else c.residual.render(),
                    "method": c.method,
                }
                for c in self.per_stratum
            ],
        }


def _resolve_gamma(gamma: str | None, table: AtomTable | None) -> tuple[str, AtomTable]:
    if table is None:
        if gamma is None:
            raise ValueError("either a Gamma name or an atom table is required")
        return gamma, builtin_table(gamma)
    names = table.gammas()
    reserved = names & set(BUILTIN_GAMMAS)
    if reserved:
        raise ValueError(f"Gamma names {sorted(reserved)} are reserved for built-in tables")
    if gamma is None:
        if len(names) != 1:
            raise ValueError(f"the atom table covers Gamma names {sorted(names)}; choose one with --gamma")
        gamma = next(iter(names))
    return gamma, table


def _torus_is_literal(table: AtomTable, gamma: str) -> bool:
    """True when the rank-one locus is a single punctured line, so a torus-type stratum is T_I itself."""
    return table.lookup(IrrAtom("GL", 1, gamma=gamma)) == EPolynomial.uv() - 1


def evaluate_stratification(
    family: GroupFamily,
    gamma: str | None = None,
    table: AtomTable | None = None,
    strat: Stratification | None = None,
    max_rank: int | None = None,
    jobs: int = 1,
) -> Evaluation:
    gamma, table = _resolve_gamma(gamma, table)
    if strat is None:
        strat = stratify(family, gamma=gamma, max_rank=max_rank, jobs=jobs)
    contributions = []
    for term in strat.terms:
        spec = specialize(term.atom, table)
        value, residual, method = spec.value, spec.residual, "table"
        if not residual.is_zero():
            method = "symbolic"
            torus_type = term.levi.is_torus() and not term.representative and term.levi.decoration == "none"
            if torus_type and _torus_is_literal(table, gamma):
                # T itself modulo the whole Weyl group.
                value = value + molien_torus_quotient(family.n, enumerate_weyl(family, max_rank))
                residual, method = VirtualClass(), "molien"
        contributions.append(StratumContribution(term.label, value, residual, method))
    total, rest = EPolynomial(), VirtualClass()
    for c in contributions:
        total, rest = total + c.value, rest + c.residual
    return Evaluation(family, gamma, total, rest, tuple(contributions))


def tw_reference(family: GroupFamily, gamma: str = "Z", max_rank: int | None = None) -> EPolynomial:
    """E-polynomial of T/W, the character variety of Z, averaged over the whole Weyl group."""
    if gamma != "Z":
        raise UnsupportedError("the T/W reference exists for Gamma = Z only")
    if family.kind in (Kind.SL, Kind.PGL):
        raise UnsupportedError("the T/W reference is reported for GL only")
    return molien_torus_quotient(family.n, enumerate_weyl(family, max_rank))


@dataclass(frozen=True)
class ReferenceVerdict:
    match: bool
    value: EPolynomial
    reference: EPolynomial
    residual: VirtualClass

    def render(self) -> str:
        if self.match:
            return f"MATCH: {self.value.render()}"
        difference = self.value - self.reference
        return (
            f"MISMATCH: strata sum {self.value.render()} vs reference {self.reference.render()} "
            f"(difference {difference.render()}; residual {self.residual.render()})"
        )


def compare_with_reference(evaluation: Evaluation, max_rank: int | None = None) -> ReferenceVerdict:
    ref = tw_reference(evaluation.family, evaluation.gamma, max_rank)
    ok = evaluation.value == ref and evaluation.residual.is_zero()
    return ReferenceVerdict(ok, evaluation.value, ref, evaluation.residual)
