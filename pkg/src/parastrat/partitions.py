"""Integer partitions and stratum labels, with the label <-> subset bijections."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .rootdata import GroupFamily, Kind
from .weyl import Subset, orbit_class_of

SECTORS = ("plain", "tail", "d1", "d2", "d3", "unmatched")
_SECTOR_RANK = {s: i for i, s in enumerate(SECTORS)}


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]  # increasing

    def __post_init__(self):
        parts = tuple(sorted(int(p) for p in self.parts))
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_multiplicities(cls, mult: dict[int, int]) -> Partition:
        return cls(tuple(j for j, k in sorted(mult.items()) for _ in range(k)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def multiplicities(self) -> tuple[tuple[int, int], ...]:
        """Pairs (j, k_j) with k_j > 0, sorted by j."""
        return tuple(sorted(Counter(self.parts).items()))

    def cumulative_sums(self) -> list[int]:
        out, total = [], 0
        for p in self.parts:
            total += p
            out.append(total)
        return out

    def render(self) -> str:
        return "[" + " ".join(f"{j}^{k}" for j, k in self.multiplicities) + "]"

    def latex(self) -> str:
        if not self.parts:
            return "[\\,]"
        return "[" + "\\,".join(f"{j}^{{{k}}}" for j, k in self.multiplicities) + "]"

    def __str__(self) -> str:
        return self.render()


def enumerate_partitions(m: int) -> list[Partition]:
    """All partitions of m, ordered lexicographically on their increasing part tuples."""
    if m < 0:
        raise ValueError(f"cannot partition a negative number: {m}")
    return [Partition(p) for p in _increasing_parts(m, 1)]


@lru_cache(maxsize=None)
def _increasing_parts(m: int, smallest: int) -> tuple[tuple[int, ...], ...]:
    if m == 0:
        return ((),)
    out = []
    for first in range(smallest, m + 1):
        rest = m - first
        if rest == 0:
            out.append((first,))
        elif rest >= first:
            out.extend((first,) + tail for tail in _increasing_parts(rest, first))
    return tuple(out)


def enumerate_compositions(m: int) -> list[tuple[int, ...]]:
    """Ordered partitions of m (the empty one for m = 0)."""
    if m < 0:
        raise ValueError(f"cannot split a negative number: {m}")
    if m == 0:
        return [()]
    return [(first,) + rest for first in range(1, m + 1) for rest in enumerate_compositions(m - first)]


def _sector_range(family: GroupFamily, sector: str) -> range:
    n = family.n
    if sector == "plain" and family.kind not in (Kind.SO_EVEN,):
        return range(n, n + 1)
    if sector == "tail" and family.kind in (Kind.SP, Kind.SO_ODD):
        return range(0, n)
    if family.kind is Kind.SO_EVEN:
        if sector in ("d1", "d2"):
            return range(0, n)
        if sector == "d3":
            return range(0, n - 1)
        if sector == "unmatched":
            return range(n, n + 1)
    raise ValueError(f"sector {sector!r} is not admissible for {family.describe()}")


def family_sectors(family: GroupFamily) -> tuple[str, ...]:
    if family.is_type_a:
        return ("plain",)
    if family.kind is Kind.SO_EVEN:
        return ("d1", "d2", "d3")
    return ("plain", "tail")


@dataclass(frozen=True)
class StratumLabel:
    """Sector plus a partition of m.

    The ``unmatched`` sector only arises for even orthogonal classes that contain no subset
    produced by the d1/d2/d3 rules; its partition lists the class's GL block sizes.
    """

    family: GroupFamily
    sector: str
    partition: Partition

    def __post_init__(self):
        if not isinstance(self.partition, Partition):
            object.__setattr__(self, "partition", Partition(tuple(self.partition)))
        if self.partition.size not in _sector_range(self.family, self.sector):
            raise ValueError(
                f"partition {self.partition} of {self.partition.size} is out of range for "
                f"sector {self.sector} of {self.family.describe()}"
            )

    @property
    def m(self) -> int:
        return self.partition.size

    def sort_key(self) -> tuple:
        return (_SECTOR_RANK[self.sector], self.m, self.partition.parts)

    def render(self) -> str:
        if self.sector == "plain":
            return self.partition.render()
        return f"{self.sector} m={self.m} {self.partition.render()}"

    def latex(self) -> str:
        if self.sector == "plain":
            return self.partition.latex()
        sub = {"tail": "n", "d1": "(1)", "d2": "(2)", "d3": "(3)", "unmatched": "\\ast"}[self.sector]
        return f"{sub},{self.partition.latex()}"

    def to_json(self) -> dict:
        return {"sector": self.sector, "m": self.m, "partition": list(self.partition.parts)}

    def __str__(self) -> str:
        return self.render()


def labels_for_family(family: GroupFamily) -> list[StratumLabel]:
    """Every label of the closed-form enumeration, in label order (sector, m, partition)."""
    out = []
    for sector in family_sectors(family):
        for m in _sector_range(family, sector):
            out.extend(StratumLabel(family, sector, p) for p in enumerate_partitions(m))
    return out


def subset_from_label(label: StratumLabel) -> Subset:
    family = label.family
    if label.sector == "unmatched":
        raise ValueError("unmatched labels have no canonical subset")
    delta = set(range(1, family.delta_size + 1))
    cuts = set(label.partition.cumulative_sums())
    n = family.n
    if label.sector == "d2":
        subset = (delta - cuts - {n}) | {n - 1}
    elif label.sector == "d3":
        subset = delta - cuts - {n - 1, n}
    else:
        subset = delta - cuts
    return tuple(sorted(subset))


@lru_cache(maxsize=64)
def canonical_subsets(family: GroupFamily) -> dict[Subset, tuple[StratumLabel, ...]]:
    """Subset produced by each closed-form label (several labels may produce the same subset)."""
    out: dict[Subset, list[StratumLabel]] = {}
    for label in labels_for_family(family):
        out.setdefault(subset_from_label(label), []).append(label)
    return {s: tuple(ls) for s, ls in out.items()}


def preferred_label(family: GroupFamily, candidates: Iterable[StratumLabel], subset: Subset) -> StratumLabel:
    """Among labels naming the same class, prefer one whose closed-form Levi blocks match the root datum."""
    from .levi import levi_shape, closed_form_levi_shape

    actual = levi_shape(family, subset).block_key()

    def key(label):
        closed = closed_form_levi_shape(family, label.sector, label.partition).block_key()
        return (closed != actual, label.sort_key())

    return min(candidates, key=key)


def class_label(family: GroupFamily, members: Iterable[Subset], max_rank: int | None = None) -> StratumLabel:
    """The label of a whole orbit class."""
    from .levi import levi_shape

    members = sorted(members)
    canon = canonical_subsets(family)
    candidates = [label for m in members for label in canon.get(m, ())]
    if candidates:
        return preferred_label(family, candidates, members[0])
    blocks = levi_shape(family, members[0]).gl_blocks
    return StratumLabel(family, "unmatched", Partition(blocks))


def label_from_subset(family: GroupFamily, subset: Iterable[int], max_rank: int | None = None) -> StratumLabel:
    subset = tuple(sorted(subset))
    canon = canonical_subsets(family)
    if subset in canon:
        return preferred_label(family, canon[subset], subset)
    return class_label(family, orbit_class_of(family, subset, max_rank).members, max_rank)
