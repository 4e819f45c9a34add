"""Levi data attached to a subset I of simple roots: torus T_I, cocharacter, Levi shape, flag."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable

from .partitions import Partition
from .rootdata import GroupFamily, Kind, build_root_datum
from .weyl import Subset

DECORATIONS = {Kind.SL: "det_one", Kind.PGL: "mod_scalar"}


def _support(v) -> list[int]:
    return [i for i, c in enumerate(v) if c]


def dynkin_edges(family: GroupFamily) -> set[tuple[int, int]]:
    d, n = family.delta_size, family.n
    if family.kind is Kind.SO_EVEN:
        edges = {(i, i + 1) for i in range(1, n - 1)}
        if n >= 3:
            edges.add((n - 2, n))
        return edges
    return {(i, i + 1) for i in range(1, d)}


@dataclass(frozen=True, order=True)
class Component:
    type: str
    rank: int
    nodes: tuple[int, ...]

    def to_json(self) -> dict:
        return {"type": self.type, "rank": self.rank, "nodes": list(self.nodes)}


def _connected_components(family: GroupFamily, subset: Subset) -> list[tuple[int, ...]]:
    edges = dynkin_edges(family)
    remaining = set(subset)
    out = []
    while remaining:
        start = min(remaining)
        stack, comp = [start], {start}
        remaining.discard(start)
        while stack:
            a = stack.pop()
            for b in list(remaining):
                if (min(a, b), max(a, b)) in edges:
                    remaining.discard(b)
                    comp.add(b)
                    stack.append(b)
        out.append(tuple(sorted(comp)))
    return sorted(out)


def _component_type(family: GroupFamily, nodes: tuple[int, ...]) -> str:
    n = family.n
    if family.kind in (Kind.SP, Kind.SO_ODD) and n in nodes and len(nodes) >= 2:
        return "C" if family.kind is Kind.SP else "B"
    if family.kind is Kind.SO_EVEN and {n - 2, n - 1, n} <= set(nodes):
        return "D"
    return "A"


def components(family: GroupFamily, subset: Iterable[int]) -> list[Component]:
    subset = tuple(sorted(subset))
    return [Component(_component_type(family, c), len(c), c) for c in _connected_components(family, subset)]


@dataclass(frozen=True)
class Tail:
    kind: Kind  # Sp, SOodd or SOeven
    m: int

    def render(self) -> str:
        if self.kind is Kind.SP:
            return f"Sp_{2 * self.m}"
        if self.kind is Kind.SO_ODD:
            return f"SO_{2 * self.m + 1}"
        return f"SO_{2 * self.m}"

    def latex(self) -> str:
        name = "Sp" if self.kind is Kind.SP else "SO"
        size = 2 * self.m + 1 if self.kind is Kind.SO_ODD else 2 * self.m
        return f"\\operatorname{{{name}}}_{{{size}}}"

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "m": self.m}


@dataclass(frozen=True)
class LeviShape:
    central_rank: int
    components: tuple[Component, ...]
    gl_blocks: tuple[int, ...]  # increasing
    tail: Tail | None
    decoration: str = "none"
    so2_normalized: bool = False

    def block_key(self) -> tuple:
        return (self.gl_blocks, self.tail)

    def is_torus(self) -> bool:
        return self.tail is None and all(b == 1 for b in self.gl_blocks)

    def _gl_factors(self) -> list[tuple[int, int]]:
        return sorted(Partition(self.gl_blocks).multiplicities)

    def render(self) -> str:
        parts = [f"GL_{j}" + (f"^{k}" if k > 1 else "") for j, k in self._gl_factors()]
        if self.tail is not None:
            parts.append(self.tail.render())
        text = " x ".join(parts) if parts else "1"
        if self.so2_normalized:
            text += " (SO_2 as GL_1)"
        if self.decoration != "none":
            text += f" [{self.decoration}]"
        return text

    def latex(self) -> str:
        parts = [f"\\operatorname{{GL}}_{{{j}}}" + (f"^{{{k}}}" if k > 1 else "") for j, k in self._gl_factors()]
        if self.tail is not None:
            parts.append(self.tail.latex())
        return " \\times ".join(parts) if parts else "1"

    def to_json(self) -> dict:
        return {
            "central_rank": self.central_rank,
            "components": [c.to_json() for c in self.components],
            "blocks": {
                "gl": list(self.gl_blocks),
                "tail": None if self.tail is None else self.tail.to_json(),
            },
            "decoration": self.decoration,
        }


def _rank_drop(family: GroupFamily) -> int:
    return 1 if family.kind in (Kind.SL, Kind.PGL) else 0


@lru_cache(maxsize=4096)
def levi_shape(family: GroupFamily, subset: Iterable[int]) -> LeviShape:
    subset = tuple(sorted(subset))
    datum = build_root_datum(family)
    n = family.n
    comps = components(family, subset)

    def coords(c: Component) -> set[int]:
        return {k for i in c.nodes for k in _support(datum.simple_roots[i - 1])}

    tail = None
    tail_comps: list[Component] = []
    if family.kind in (Kind.SP, Kind.SO_ODD):
        tail_comps = [c for c in comps if n in c.nodes]
        if tail_comps:
            tail = Tail(family.kind, tail_comps[0].rank)
    elif family.kind is Kind.SO_EVEN and {n - 1, n} <= set(subset):
        tail_comps = [c for c in comps if {n - 1, n} & set(c.nodes)]
        tail = Tail(Kind.SO_EVEN, len(set().union(*(coords(c) for c in tail_comps))))

    covered: set[int] = set()
    blocks = []
    for c in comps:
        cs = coords(c)
        covered |= cs
        if c not in tail_comps:
            blocks.append(len(cs))
    blocks.extend(1 for _ in range(n - len(covered)))
    return LeviShape(
        central_rank=n - sum(c.rank for c in comps) - _rank_drop(family),
        components=tuple(comps),
        gl_blocks=tuple(sorted(blocks)),
        tail=tail,
        decoration=DECORATIONS.get(family.kind, "none"),
    )


def closed_form_levi_shape(family: GroupFamily, sector: str, partition: Partition) -> LeviShape:
    """The closed-form Levi attached to a label; carries block data only (no node-level components)."""
    n, m = family.n, partition.size
    blocks = list(partition.parts)
    tail = None
    normalized = False
    if sector == "plain":
        if family.kind is Kind.SO_EVEN or m != n:
            raise ValueError(f"plain sector needs a partition of {n} and a non-D family")
    elif sector == "tail":
        if family.kind not in (Kind.SP, Kind.SO_ODD) or not 0 <= m < n:
            raise ValueError(f"tail sector is not valid for {family.describe()} with m = {m}")
        tail = Tail(family.kind, n - m)
    elif sector in ("d1", "d2", "d3"):
        top = n - 1 if sector == "d3" else n
        if family.kind is not Kind.SO_EVEN or not 0 <= m < top:
            raise ValueError(f"sector {sector} is not valid for {family.describe()} with m = {m}")
        if sector == "d1":
            if n - m == 1:
                blocks.append(1)
                normalized = True
            else:
                tail = Tail(Kind.SO_EVEN, n - m)
        else:
            blocks.append(n - m)
    elif sector == "unmatched":
        if family.kind is not Kind.SO_EVEN or m != n:
            raise ValueError("unmatched sector needs an even orthogonal family and a partition of n")
    else:
        raise ValueError(f"unknown sector {sector!r}")
    return LeviShape(
        central_rank=len(blocks) - _rank_drop(family),
        components=(),
        gl_blocks=tuple(sorted(blocks)),
        tail=tail,
        decoration=DECORATIONS.get(family.kind, "none"),
        so2_normalized=normalized,
    )


@dataclass(frozen=True)
class TorusDescription:
    """Coordinates of diag(a_1..a_n) tied together by the kernel equations of I.

    ``groups`` lists free coordinate groups in order of their first coordinate; each entry is
    (coordinate, exponent) with exponent -1 meaning the inverse of the group's variable.
    ``fixed`` lists coordinates forced to 1 on the identity component.
    """

    n: int
    groups: tuple[tuple[tuple[int, int], ...], ...]
    fixed: tuple[int, ...]
    constraint: str = "none"

    @property
    def rank(self) -> int:
        return len(self.groups) - (1 if self.constraint != "none" else 0)

    def render(self) -> str:
        names = "abcdefghijklmnopqrstuvwxyz"
        entries = ["1"] * self.n
        for g, group in enumerate(self.groups):
            name = names[g] if g < len(names) else f"t{g + 1}"
            for coord, exp in group:
                entries[coord - 1] = name if exp == 1 else f"{name}^-1"
        text = f"diag({', '.join(entries)})"
        if self.constraint == "det_one":
            text += " with det = 1"
        elif self.constraint == "mod_scalar":
            text += " modulo scalars"
        return text


def _simple_terms(family: GroupFamily, subset: Subset) -> list[list[tuple[int, int]]]:
    datum = build_root_datum(family)
    return [[(k, datum.simple_roots[i - 1][k]) for k in _support(datum.simple_roots[i - 1])] for i in subset]


def torus_description(family: GroupFamily, subset: Iterable[int]) -> TorusDescription:
    subset = tuple(sorted(subset))
    n = family.n
    parent = list(range(n))
    parity = [1] * n  # a_i = a_parent ** parity
    fixed = [False] * n

    def find(i):
        if parent[i] == i:
            return i, 1
        root, p = find(parent[i])
        parent[i], parity[i] = root, parity[i] * p
        return root, parity[i]

    for terms in _simple_terms(family, subset):
        if len(terms) == 1:
            fixed[find(terms[0][0])[0]] = True
            continue
        (i, ci), (j, cj) = terms
        # a_i^ci * a_j^cj = 1  =>  a_i = a_j^(-ci*cj)
        rel = -ci * cj
        ri, pi = find(i)
        rj, pj = find(j)
        if ri == rj:
            if pi != rel * pj:
                fixed[ri] = True
            continue
        lo, hi = min(ri, rj), max(ri, rj)
        parent[hi] = lo
        parity[hi] = pi * rel * pj
        fixed[lo] = fixed[lo] or fixed[hi]

    groups: dict[int, list[tuple[int, int]]] = {}
    fixed_coords = []
    for k in range(n):
        root, p = find(k)
        if fixed[root]:
            fixed_coords.append(k + 1)
        else:
            groups.setdefault(root, []).append((k + 1, p))
    ordered = tuple(tuple(groups[r]) for r in sorted(groups))
    return TorusDescription(n, ordered, tuple(fixed_coords), DECORATIONS.get(family.kind, "none"))


def cocharacter_of_subset(family: GroupFamily, subset: Iterable[int]) -> tuple[int, ...]:
    """Weights s, s-1, ..., 1 on the free coordinate groups in order, 0 on fixed coordinates."""
    torus = torus_description(family, subset)
    weights = [0] * family.n
    s = len(torus.groups)
    for g, group in enumerate(torus.groups):
        for coord, exp in group:
            weights[coord - 1] = (s - g) * exp
    if family.kind is Kind.SL:
        # Land in the sum-zero cocharacter lattice with the smallest integer rescaling.
        n, total = family.n, sum(weights)
        c = n // gcd(n, total)
        weights = [c * w - c * total // n for w in weights]
    return tuple(weights)


@dataclass(frozen=True)
class FlagData:
    """Dimensions of the standard flag attached to I.

    ``dims`` is the whole chain; ``isotropic_dims`` the isotropic steps (empty for A-type);
    ``orthogonal_pairs`` pairs each isotropic step with its orthogonal complement.
    For the even orthogonal family ``sector`` is 1, 2 or 3; in sector 3 the step of
    dimension n-1 is removed and the top isotropic step is the alternative completion V'.
    """

    ambient_dim: int
    dims: tuple[int, ...]
    isotropic_dims: tuple[int, ...] = ()
    orthogonal_pairs: tuple[tuple[int, int], ...] = ()
    sector: int | None = None
    completion: str | None = None
    removed_dims: tuple[int, ...] = field(default=())


def flag_description(family: GroupFamily, subset: Iterable[int]) -> FlagData:
    subset = set(subset)
    big = family.matrix_size
    cuts = sorted(set(range(1, family.delta_size + 1)) - subset)
    if family.is_type_a:
        return FlagData(big, tuple(cuts))
    n = family.n
    sector = completion = None
    removed: tuple[int, ...] = ()
    iso = cuts
    if family.kind is Kind.SO_EVEN:
        if n in subset:
            sector = 1
        elif n - 1 in subset:
            sector = 2
        else:
            sector = 3
            iso = [d for d in cuts if d != n - 1]
            completion, removed = "V'", (n - 1,)
    pairs = tuple((d, big - d) for d in iso)
    dims = tuple(sorted(set(iso) | {big - d for d in iso}))
    return FlagData(big, dims, tuple(iso), pairs, sector, completion, removed)
