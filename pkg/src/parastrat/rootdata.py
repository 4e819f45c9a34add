"""Root data of the classical families in the common ambient lattice Z^n."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from math import factorial

from .errors import DimensionError, NotARootError, RankOutOfRangeError

Vector = tuple[int, ...]


class Kind(str, Enum):
    GL = "GL"
    SL = "SL"
    PGL = "PGL"
    SP = "Sp"
    SO_ODD = "SOodd"
    SO_EVEN = "SOeven"


MIN_RANK = {Kind.GL: 1, Kind.SL: 2, Kind.PGL: 2, Kind.SP: 1, Kind.SO_ODD: 1, Kind.SO_EVEN: 2}

TOKENS = {
    "gl": Kind.GL,
    "sl": Kind.SL,
    "pgl": Kind.PGL,
    "sp": Kind.SP,
    "so-odd": Kind.SO_ODD,
    "so-even": Kind.SO_EVEN,
}

A_TYPE = (Kind.GL, Kind.SL, Kind.PGL)


@dataclass(frozen=True, order=True)
class GroupFamily:
    kind: Kind
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not isinstance(self.n, int) or self.n < MIN_RANK[self.kind]:
            raise RankOutOfRangeError(self.kind.value, self.n, MIN_RANK[self.kind])

    @classmethod
    def from_token(cls, token: str, n: int) -> GroupFamily:
        try:
            kind = TOKENS[token]
        except KeyError:
            raise ValueError(f"unknown family token {token!r}; expected one of {', '.join(TOKENS)}") from None
        return cls(kind, n)

    @property
    def is_type_a(self) -> bool:
        return self.kind in A_TYPE

    @property
    def delta_size(self) -> int:
        return self.n - 1 if self.is_type_a else self.n

    @property
    def token(self) -> str:
        return next(t for t, k in TOKENS.items() if k is self.kind)

    @property
    def matrix_size(self) -> int:
        if self.is_type_a:
            return self.n
        return 2 * self.n + 1 if self.kind is Kind.SO_ODD else 2 * self.n

    @property
    def name(self) -> str:
        """Matrix-group notation, e.g. Sp_6 for the rank parameter 3."""
        prefix = {Kind.SP: "Sp", Kind.SO_ODD: "SO", Kind.SO_EVEN: "SO"}.get(self.kind, self.kind.value)
        return f"{prefix}_{self.matrix_size}"

    def describe(self) -> str:
        return f"{self.name} ({self.token} {self.n})"

    def __str__(self) -> str:
        return self.describe()


@dataclass(frozen=True)
class LatticeDescriptor:
    ambient_rank: int
    kind: str  # full | sum_zero_sublattice | quotient_by_diagonal


def pairing(x: Vector, y: Vector) -> int:
    if len(x) != len(y):
        raise DimensionError(f"cannot pair vectors of lengths {len(x)} and {len(y)}")
    return sum(a * b for a, b in zip(x, y))


def _vec(n: int, *terms: tuple[int, int]) -> Vector:
    v = [0] * n
    for i, c in terms:
        v[i] += c
    return tuple(v)


def _coroot_of(alpha: Vector) -> Vector:
    norm = pairing(alpha, alpha)
    return tuple(2 * a // norm for a in alpha)


def _root_system(family: GroupFamily) -> tuple[list[Vector], list[Vector]]:
    """All roots and the simple roots, in the fixed node order."""
    n, kind = family.n, family.kind
    roots: set[Vector] = set()
    if family.is_type_a:
        for i in range(n):
            for j in range(n):
                if i != j:
                    roots.add(_vec(n, (i, 1), (j, -1)))
        simple = [_vec(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        return sorted(roots), simple
    for i in range(n):
        for j in range(i + 1, n):
            for a in (1, -1):
                for b in (1, -1):
                    roots.add(_vec(n, (i, a), (j, b)))
    simple = [_vec(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
    if kind is Kind.SP:
        roots.update(_vec(n, (i, s)) for i in range(n) for s in (2, -2))
        simple.append(_vec(n, (n - 1, 2)))
    elif kind is Kind.SO_ODD:
        roots.update(_vec(n, (i, s)) for i in range(n) for s in (1, -1))
        simple.append(_vec(n, (n - 1, 1)))
    else:
        simple.append(_vec(n, (n - 2, 1), (n - 1, 1)))
    return sorted(roots), simple


_LATTICES = {
    Kind.SL: ("quotient_by_diagonal", "sum_zero_sublattice"),
    Kind.PGL: ("sum_zero_sublattice", "quotient_by_diagonal"),
}

_DUAL_KIND = {
    Kind.GL: Kind.GL,
    Kind.SL: Kind.PGL,
    Kind.PGL: Kind.SL,
    Kind.SP: Kind.SO_ODD,
    Kind.SO_ODD: Kind.SP,
    Kind.SO_EVEN: Kind.SO_EVEN,
}


@dataclass(frozen=True)
class RootDatum:
    """Roots are kept sorted; ``coroots[i]`` is the coroot matched to ``roots[i]``."""

    family: GroupFamily
    char_lattice: LatticeDescriptor
    cochar_lattice: LatticeDescriptor
    roots: tuple[Vector, ...]
    coroots: tuple[Vector, ...]
    simple_roots: tuple[Vector, ...]

    @cached_property
    def root_index(self) -> dict[Vector, int]:
        return {r: i for i, r in enumerate(self.roots)}

    @cached_property
    def simple_index(self) -> dict[Vector, int]:
        """Simple root -> 1-based node index."""
        return {r: i + 1 for i, r in enumerate(self.simple_roots)}

    def is_root(self, v: Vector) -> bool:
        return tuple(v) in self.root_index

    def coroot(self, alpha: Vector) -> Vector:
        try:
            return self.coroots[self.root_index[tuple(alpha)]]
        except KeyError:
            raise NotARootError(f"{tuple(alpha)} is not a root of {self.family.describe()}") from None

    @property
    def matched_pairs(self) -> frozenset[tuple[Vector, Vector]]:
        return frozenset(zip(self.roots, self.coroots))

    def to_json(self) -> dict:
        return {
            "family": self.family.kind.value,
            "n": self.family.n,
            "roots": [list(r) for r in self.roots],
            "coroots": [list(c) for c in self.coroots],
            "simple_roots": [list(r) for r in self.simple_roots],
            "weyl_order": weyl_order(self.family),
        }


@lru_cache(maxsize=None)
def build_root_datum(family: GroupFamily) -> RootDatum:
    roots, simple = _root_system(family)
    char_kind, cochar_kind = _LATTICES.get(family.kind, ("full", "full"))
    n = family.n
    return RootDatum(
        family=family,
        char_lattice=LatticeDescriptor(n, char_kind),
        cochar_lattice=LatticeDescriptor(n, cochar_kind),
        roots=tuple(roots),
        coroots=tuple(_coroot_of(r) for r in roots),
        simple_roots=tuple(simple),
    )


def dual_root_datum(datum: RootDatum) -> RootDatum:
    order = sorted(range(len(datum.roots)), key=lambda i: datum.coroots[i])
    family = GroupFamily(_DUAL_KIND[datum.family.kind], datum.family.n)
    return RootDatum(
        family=family,
        char_lattice=datum.cochar_lattice,
        cochar_lattice=datum.char_lattice,
        roots=tuple(datum.coroots[i] for i in order),
        coroots=tuple(datum.roots[i] for i in order),
        simple_roots=tuple(datum.coroot(a) for a in datum.simple_roots),
    )


def weyl_order(family: GroupFamily) -> int:
    n = family.n
    if family.is_type_a:
        return factorial(n)
    if family.kind is Kind.SO_EVEN:
        return 2 ** (n - 1) * factorial(n)
    return 2**n * factorial(n)


def reflect(datum: RootDatum, alpha: Vector, x: Vector) -> Vector:
    """s_alpha(x) = x - (x, alpha_check) alpha."""
    check = datum.coroot(alpha)
    c = pairing(x, check)
    return tuple(xi - c * ai for xi, ai in zip(x, alpha))
