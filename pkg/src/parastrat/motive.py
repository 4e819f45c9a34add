"""Virtual classes of strata and their E-polynomial specialization."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import IntegralityError
from .weyl import WeylElement

Exponent = tuple[int, int]


class EPolynomial:
    """Laurent polynomial in u, v with integer coefficients; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponent, int] | Iterable[tuple[int, int, int]] = ()):
        acc: dict[Exponent, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else (((p, q), c) for p, q, c in terms)
        for (p, q), c in items:
            if int(c) != c:
                raise IntegralityError(f"non-integral coefficient {c} at u^{p} v^{q}")
            acc[(int(p), int(q))] = acc.get((int(p), int(q)), 0) + int(c)
        self._terms = {k: c for k, c in acc.items() if c}

    @classmethod
    def constant(cls, c: int) -> EPolynomial:
        return cls({(0, 0): c})

    @classmethod
    def uv(cls, k: int = 1) -> EPolynomial:
        return cls({(k, k): 1})

    @classmethod
    def in_q(cls, coeffs: Mapping[int, int]) -> EPolynomial:
        """Polynomial in q = uv from a degree -> coefficient map."""
        return cls({(d, d): c for d, c in coeffs.items()})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = EPolynomial.constant(other)
        return isinstance(other, EPolynomial) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: EPolynomial | int) -> EPolynomial:
        if isinstance(other, int):
            other = EPolynomial.constant(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return EPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> EPolynomial:
        return EPolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: EPolynomial | int) -> EPolynomial:
        return self + (-other)

    def __rsub__(self, other: int) -> EPolynomial:
        return EPolynomial.constant(other) - self

    def __mul__(self, other: EPolynomial | int) -> EPolynomial:
        if isinstance(other, int):
            return EPolynomial({k: c * other for k, c in self._terms.items()})
        out: dict[Exponent, int] = {}
        for (p1, q1), c1 in self._terms.items():
            for (p2, q2), c2 in other._terms.items():
                key = (p1 + p2, q1 + q2)
                out[key] = out.get(key, 0) + c1 * c2
        return EPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> EPolynomial:
        out = EPolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def to_json(self) -> list[list[int]]:
        return [[p, q, c] for (p, q), c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Iterable[Iterable[int]]) -> EPolynomial:
        return cls([tuple(t) for t in data])

    def _ordered(self):
        return sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def _render(self, monomial: Callable[[int, int], str]) -> str:
        if not self._terms:
            return "0"
        out = []
        for (p, q), c in self._ordered():
            mono = monomial(p, q)
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            if not out:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(out)

    def render(self) -> str:
        def mono(p, q):
            if p == q:
                return "" if p == 0 else ("uv" if p == 1 else f"(uv)^{p}")
            parts = [f"{s}^{e}" if e != 1 else s for s, e in (("u", p), ("v", q)) if e]
            return " ".join(parts)

        return self._render(mono)

    def latex(self) -> str:
        def mono(p, q):
            if p == q:
                return "" if p == 0 else ("uv" if p == 1 else f"(uv)^{{{p}}}")
            return "".join(f"{s}^{{{e}}}" if e != 1 else s for s, e in (("u", p), ("v", q)) if e)

        return self._render(mono)

    def __repr__(self) -> str:
        return f"EPolynomial({self.render()})"


def epoly_add(a: EPolynomial, b: EPolynomial) -> EPolynomial:
    return a + b


def epoly_mul(a: EPolynomial, b: EPolynomial) -> EPolynomial:
    return a * b


def adams(e: EPolynomial, k: int) -> EPolynomial:
    if k < 1:
        raise ValueError(f"Adams operations need k >= 1, got {k}")
    return EPolynomial({(k * p, k * q): c for (p, q), c in e.terms.items()})


def _frac_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (p1, q1), c1 in a.items():
        for (p2, q2), c2 in b.items():
            key = (p1 + p2, q1 + q2)
            out[key] = out.get(key, 0) + c1 * c2
    return out


def sym_epoly(e: EPolynomial, k: int) -> EPolynomial:
    """Coefficient of t^k in exp(sum_j adams(e, j) t^j / j), via h_k = (1/k) sum_j p_j h_{k-j}."""
    if k < 0:
        raise ValueError(f"symmetric power needs k >= 0, got {k}")
    powers = [None] + [{key: Fraction(c) for key, c in adams(e, j).terms.items()} for j in range(1, k + 1)]
    h = [{(0, 0): Fraction(1)}]
    for i in range(1, k + 1):
        acc: dict = {}
        for j in range(1, i + 1):
            for key, c in _frac_mul(powers[j], h[i - j]).items():
                acc[key] = acc.get(key, 0) + c
        h.append({key: c / i for key, c in acc.items() if c})
    result = h[k]
    bad = {key: c for key, c in result.items() if c.denominator != 1}
    if bad:
        raise IntegralityError(f"Sym^{k} produced non-integral coefficients {bad}")
    return EPolynomial({key: int(c) for key, c in result.items()})


def _is_group(elements: list[WeylElement]) -> bool:
    """Closure check: grow generators greedily; the set is a group iff every subgroup they span stays inside it."""
    from .weyl import generate_group

    if not elements:
        return False
    n = len(elements[0].perm)
    members = set(elements)
    if WeylElement.identity(n) not in members:
        return False
    gens: list[WeylElement] = []
    span: set[WeylElement] = {WeylElement.identity(n)}
    for g in elements:
        if g in span:
            continue
        gens.append(g)
        span = generate_group(gens, n, limit=len(members))
        if not span <= members:
            return False
    return len(span) == len(members)


def molien_torus_quotient(rank: int, group: Iterable[WeylElement]) -> EPolynomial:
    """(1/|G|) sum_w det(q - M_w) in q = uv, for a finite signed-permutation group acting on a rank-``rank`` torus.

    For a signed permutation the characteristic polynomial factors over cycles as
    prod (q^L - product of the cycle's signs).
    """
    elements = list(dict.fromkeys(group))
    if any(len(w.perm) != rank for w in elements):
        raise ValueError(f"every element must act on {rank} coordinates")
    if not _is_group(elements):
        raise ValueError("the given elements are not closed under composition")
    cycle_types = Counter(tuple(w.signed_cycles()) for w in elements)
    total: dict[int, int] = {}
    for cycles, count in cycle_types.items():
        poly = {0: 1}
        for length, sign in cycles:
            step: dict[int, int] = {}
            for d, c in poly.items():
                step[d + length] = step.get(d + length, 0) + c
                step[d] = step.get(d, 0) - sign * c
            poly = step
        for d, c in poly.items():
            total[d] = total.get(d, 0) + count * c
    order = len(elements)
    bad = {d: c for d, c in total.items() if c % order}
    if bad:
        raise IntegralityError(f"Molien average is not integral: {bad} over {order}")
    return EPolynomial.in_q({d: c // order for d, c in total.items()})


# Atoms -------------------------------------------------------------------------------------------

_GROUP_NAMES = {"GL": "GL", "SL": "SL", "PGL": "PGL", "Sp": "Sp", "SOodd": "SO", "SOeven": "SO"}


def group_label(group: str, size: int) -> str:
    if group == "Sp":
        return f"Sp_{2 * size}"
    if group == "SOodd":
        return f"SO_{2 * size + 1}"
    if group == "SOeven":
        return f"SO_{2 * size}"
    return f"{group}_{size}"


def _group_latex(group: str, size: int) -> str:
    matrix = {"Sp": 2 * size, "SOodd": 2 * size + 1, "SOeven": 2 * size}.get(group, size)
    return f"\\operatorname{{{_GROUP_NAMES[group]}}}_{{{matrix}}}"


def _gamma_latex(gamma: str) -> str:
    return "\\Gamma" if gamma == "Gamma" else f"\\mathrm{{{gamma}}}"


@dataclass(frozen=True)
class IrrAtom:
    """Irreducible locus of the character variety of ``group`` (GL_j, Sp_2m, ...) for the group Gamma.

    ``size`` is j for A-type groups and the half-rank m otherwise. A non-empty ``blocks``
    marks the whole decorated stratum of an SL/PGL Levi with those GL block sizes, already
    quotiented by its Weyl group; such atoms are never resolved numerically.
    """

    group: str
    size: int
    decoration: str = "none"
    gamma: str = "Gamma"
    blocks: tuple[int, ...] = ()

    def sort_key(self) -> tuple:
        return (0, self.group, self.size, self.decoration, self.gamma, self.blocks)

    def table_key(self) -> tuple:
        return (self.group, self.size, self.decoration, self.gamma)

    def render(self) -> str:
        if self.blocks:
            from .partitions import Partition

            return f"Irr({group_label(self.group, self.size)} | L{Partition(self.blocks)}; {self.gamma})//W"
        return f"Irr({group_label(self.group, self.size)}; {self.gamma})"

    def latex(self) -> str:
        if self.blocks:
            from .partitions import Partition

            return (
                f"\\mathcal{{X}}^*_{{L^{{{_group_latex(self.group, self.size)}}}_{{{Partition(self.blocks).latex()}}}}}"
                f"({_gamma_latex(self.gamma)}) /\\!\\!/ W"
            )
        return f"\\mathcal{{X}}^*_{{{_group_latex(self.group, self.size)}}}({_gamma_latex(self.gamma)})"


@dataclass(frozen=True)
class SymAtom:
    k: int
    atom: IrrAtom

    def sort_key(self) -> tuple:
        return (1, self.k, self.atom.sort_key())

    def render(self) -> str:
        return f"Sym^{self.k}({self.atom.render()})"

    def latex(self) -> str:
        return f"\\operatorname{{Sym}}^{{{self.k}}}\\left({self.atom.latex()}\\right)"


@dataclass(frozen=True)
class InvQuotAtom:
    """Quotient by the inversion of every coordinate (the Z_2 sign action)."""

    atom: IrrAtom

    def sort_key(self) -> tuple:
        return (2, self.atom.sort_key())

    def render(self) -> str:
        return f"{self.atom.render()}/Z_2"

    def latex(self) -> str:
        return f"{self.atom.latex()} / \\mathbb{{Z}}_2"


@dataclass(frozen=True)
class WreathQuotAtom:
    """Product of atom^k_j over the blocks, divided by (signs of kind ``sign_kind``) x| (block permutations)."""

    sign_kind: str  # full | even
    blocks: tuple[tuple[IrrAtom, int], ...]

    @property
    def length(self) -> int:
        return sum(k for _, k in self.blocks)

    def sort_key(self) -> tuple:
        return (3, self.sign_kind, tuple((a.sort_key(), k) for a, k in self.blocks))

    def render(self) -> str:
        body = " x ".join(f"{a.render()}^{k}" for a, k in self.blocks)
        signs = "Z_2" if self.sign_kind == "full" else "H"
        perms = " x ".join(f"S_{k}" for _, k in self.blocks)
        return f"[{body} // {signs}_{self.length} x| ({perms})]"

    def latex(self) -> str:
        body = " \\times ".join(f"\\left({a.latex()}\\right)^{{{k}}}" for a, k in self.blocks)
        signs = "\\mathbb{Z}_2^{" + str(self.length) + "}" if self.sign_kind == "full" else f"H_{{{self.length}}}"
        perms = " \\times ".join(f"S_{{{k}}}" for _, k in self.blocks)
        return f"\\left[{body} /\\!\\!/ \\left({signs} \\rtimes ({perms})\\right)\\right]"


@dataclass(frozen=True)
class LefschetzClass:
    def sort_key(self) -> tuple:
        return (4,)

    def render(self) -> str:
        return "L"

    def latex(self) -> str:
        return "\\mathbb{L}"


Atom = IrrAtom | SymAtom | InvQuotAtom | WreathQuotAtom | LefschetzClass
Monomial = tuple[tuple[Atom, int], ...]


def _normalize_monomial(factors: Iterable[tuple[Atom, int]]) -> Monomial:
    acc: dict = {}
    for atom, e in factors:
        acc[atom] = acc.get(atom, 0) + e
    return tuple(sorted(((a, e) for a, e in acc.items() if e), key=lambda ae: ae[0].sort_key()))


class VirtualClass:
    """Formal integer combination of atom monomials."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        acc: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            key = _normalize_monomial(mono)
            acc[key] = acc.get(key, 0) + c
        self._terms = {k: c for k, c in acc.items() if c}

    @classmethod
    def one(cls) -> VirtualClass:
        return cls({(): 1})

    @classmethod
    def of(cls, atom: Atom) -> VirtualClass:
        return cls({((atom, 1),): 1})

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        return isinstance(other, VirtualClass) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: VirtualClass) -> VirtualClass:
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return VirtualClass(out)

    def __neg__(self) -> VirtualClass:
        return VirtualClass({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: VirtualClass) -> VirtualClass:
        return self + (-other)

    def __mul__(self, other: VirtualClass | int) -> VirtualClass:
        if isinstance(other, int):
            return VirtualClass({k: c * other for k, c in self._terms.items()})
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = _normalize_monomial(m1 + m2)
                out[key] = out.get(key, 0) + c1 * c2
        return VirtualClass(out)

    __rmul__ = __mul__

    def _ordered(self):
        return sorted(self._terms.items(), key=lambda kv: tuple((a.sort_key(), e) for a, e in kv[0]))

    def _render(self, atom_text, join: str, one: str) -> str:
        if not self._terms:
            return "0"
        out = []
        for mono, c in self._ordered():
            body = join.join(atom_text(a) + (f"^{e}" if e != 1 else "") for a, e in mono) or one
            if mono and abs(c) != 1:
                body = f"{abs(c)}{join}{body}"
            elif not mono:
                body = str(abs(c))
            sign = "-" if c < 0 else "+"
            out.append(body if not out and c > 0 else (f"-{body}" if not out else f"{sign} {body}"))
        return " ".join(out)

    def render(self) -> str:
        return self._render(lambda a: a.render(), " * ", "1")

    def latex(self) -> str:
        return self._render(lambda a: a.latex(), " \\cdot ", "1")

    def __repr__(self) -> str:
        return f"VirtualClass({self.render()})"


def sym(k: int, atom: IrrAtom) -> VirtualClass:
    if k == 0:
        return VirtualClass.one()
    return VirtualClass.of(atom if k == 1 else SymAtom(k, atom))


def wreath_quotient(sign_kind: str, blocks: Iterable[tuple[IrrAtom, int]]) -> VirtualClass:
    """Quotient of prod atom^k by signs x| block permutations, normalized.

    With independent signs the quotient splits block by block, and a single copy is the
    inversion quotient.
    """
    blocks = tuple((a, k) for a, k in blocks if k)
    if not blocks:
        return VirtualClass.one()
    if sign_kind == "full":
        out = VirtualClass.one()
        for atom, k in blocks:
            out = out * VirtualClass.of(InvQuotAtom(atom) if k == 1 else WreathQuotAtom("full", ((atom, k),)))
        return out
    if sign_kind != "even":
        raise ValueError(f"unknown sign kind {sign_kind!r}")
    return VirtualClass.of(WreathQuotAtom("even", blocks))


# Tables and specialization ----------------------------------------------------------------------

TableKey = tuple[str, int, str, str]


@dataclass
class AtomTable:
    """Known E-polynomials of irreducible loci and of their inversion quotients.

    ``rule`` may answer lookups the explicit entries do not cover: it receives the atom and a
    flag telling whether the inversion quotient is requested, and returns None when unknown.
    """

    entries: dict[TableKey, EPolynomial] = field(default_factory=dict)
    inversion: dict[TableKey, EPolynomial] = field(default_factory=dict)
    rule: Callable[[IrrAtom, bool], EPolynomial | None] | None = None

    def lookup(self, atom: IrrAtom) -> EPolynomial | None:
        if atom.blocks:
            return None
        found = self.entries.get(atom.table_key())
        if found is None and self.rule is not None:
            found = self.rule(atom, False)
        return found

    def lookup_inversion(self, atom: IrrAtom) -> EPolynomial | None:
        if atom.blocks:
            return None
        found = self.inversion.get(atom.table_key())
        if found is None and self.rule is not None:
            found = self.rule(atom, True)
        return found

    @classmethod
    def from_json(cls, data: dict) -> AtomTable:
        from .rootdata import TOKENS

        def key(item: dict) -> TableKey:
            group = item["group"]
            group = TOKENS[group].value if group in TOKENS else group
            if group not in _GROUP_NAMES:
                raise ValueError(f"unknown group {item['group']!r} in atom table")
            size = int(item["size"])
            if size < 1:
                raise ValueError(f"atom size must be positive, got {size}")
            return (group, size, item.get("decoration", "none"), str(item["gamma"]))

        return cls(
            entries={key(i): EPolynomial.from_json(i["epoly"]) for i in data.get("atoms", [])},
            inversion={key(i): EPolynomial.from_json(i["epoly"]) for i in data.get("inversion_quotients", [])},
        )

    @classmethod
    def load(cls, path) -> AtomTable:
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def gammas(self) -> set[str]:
        return {k[3] for k in (*self.entries, *self.inversion)}


@dataclass(frozen=True)
class Specialization:
    value: EPolynomial
    residual: VirtualClass


_ZERO = EPolynomial()


def _atom_value(atom: Atom, table: AtomTable) -> EPolynomial | None:
    if isinstance(atom, IrrAtom):
        return table.lookup(atom)
    if isinstance(atom, LefschetzClass):
        return EPolynomial.uv()
    if isinstance(atom, SymAtom):
        inner = table.lookup(atom.atom)
        return None if inner is None else sym_epoly(inner, atom.k)
    if isinstance(atom, InvQuotAtom):
        if table.lookup(atom.atom) == _ZERO:
            return _ZERO
        return table.lookup_inversion(atom.atom)
    if isinstance(atom, WreathQuotAtom):
        # The quotient of an empty product is empty, whatever the acting group.
        if any(table.lookup(a) == _ZERO for a, _ in atom.blocks):
            return _ZERO
        if atom.sign_kind == "full" and len(atom.blocks) == 1:
            a, k = atom.blocks[0]
            inv = table.lookup_inversion(a)
            return None if inv is None else sym_epoly(inv, k)
        return None
    raise TypeError(f"not an atom: {atom!r}")


def specialize(expr: VirtualClass, table: AtomTable) -> Specialization:
    value = EPolynomial()
    residual: dict[Monomial, int] = {}
    for mono, c in expr.terms.items():
        product = EPolynomial.constant(c)
        unresolved = False
        for atom, e in mono:
            v = _atom_value(atom, table)
            if v is not None and v.is_zero():
                product = None
                break
            if v is None:
                unresolved = True
            elif not unresolved:
                product = product * v**e
        if product is None:
            continue
        if unresolved:
            residual[mono] = residual.get(mono, 0) + c
        else:
            value = value + product
    return Specialization(value, VirtualClass(residual))
