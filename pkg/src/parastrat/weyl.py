"""Signed-permutation Weyl groups, their action on subsets of simple roots, and orbit classes.

Exhaustive enumeration here is the ground truth every closed form is checked against.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator

import numpy as np

from .errors import EnumerationBoundError
from .rootdata import GroupFamily, Kind, RootDatum, Vector, build_root_datum, reflect, weyl_order

DEFAULT_BOUND = 8
BOUND_ENV = "PARASTRAT_MAX_WEYL"

Subset = tuple[int, ...]  # sorted 1-based indices into the simple roots


class NotSimple:
    """Marker returned when a Weyl element sends some root of a subset outside the simple roots."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NOT_SIMPLE"


NOT_SIMPLE = NotSimple()


def enumeration_bound(override: int | None = None) -> int:
    if override is not None:
        return override
    env = os.environ.get(BOUND_ENV)
    return int(env) if env else DEFAULT_BOUND


def check_bound(family: GroupFamily, max_rank: int | None = None) -> None:
    bound = enumeration_bound(max_rank)
    if family.n > bound:
        raise EnumerationBoundError(family, bound, weyl_order(family))


@dataclass(frozen=True)
class WeylElement:
    """Coordinate j goes to position ``perm[j]`` (0-based); ``signs[i]`` multiplies output position i.

    So (w.v)_i = signs_i * v_{perm^-1(i)}.
    """

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> WeylElement:
        return cls(tuple(range(n)), (1,) * n)

    def act(self, v: Vector) -> Vector:
        out = [0] * len(v)
        for j, i in enumerate(self.perm):
            out[i] = self.signs[i] * v[j]
        return tuple(out)

    def compose(self, other: WeylElement) -> WeylElement:
        """self after other."""
        perm = tuple(self.perm[p] for p in other.perm)
        inv_self = self.inverse_perm()
        signs = tuple(self.signs[i] * other.signs[inv_self[i]] for i in range(len(perm)))
        return WeylElement(perm, signs)

    def inverse_perm(self) -> tuple[int, ...]:
        inv = [0] * len(self.perm)
        for j, i in enumerate(self.perm):
            inv[i] = j
        return tuple(inv)

    def inverse(self) -> WeylElement:
        return WeylElement(self.inverse_perm(), tuple(self.signs[i] for i in self.perm))

    def matrix(self) -> list[list[int]]:
        n = len(self.perm)
        m = [[0] * n for _ in range(n)]
        for j, i in enumerate(self.perm):
            m[i][j] = self.signs[i]
        return m

    def signed_cycles(self) -> list[tuple[int, int]]:
        """(length, product of signs) for every cycle of the underlying permutation."""
        seen = [False] * len(self.perm)
        out = []
        for start in range(len(self.perm)):
            if seen[start]:
                continue
            length, sign, j = 0, 1, start
            while not seen[j]:
                seen[j] = True
                j = self.perm[j]
                sign *= self.signs[j]
                length += 1
            out.append((length, sign))
        return sorted(out)


def _sign_patterns(family: GroupFamily) -> list[tuple[int, ...]]:
    n = family.n
    if family.is_type_a:
        return [(1,) * n]
    patterns = list(product((1, -1), repeat=n))
    if family.kind is Kind.SO_EVEN:
        patterns = [s for s in patterns if s.count(-1) % 2 == 0]
    return patterns


def enumerate_weyl(family: GroupFamily, max_rank: int | None = None) -> Iterator[WeylElement]:
    """Every element exactly once: permutations in lexicographic order, sign patterns inside."""
    check_bound(family, max_rank)
    patterns = _sign_patterns(family)
    return (WeylElement(p, s) for p in permutations(range(family.n)) for s in patterns)


def simple_reflections(family: GroupFamily) -> list[WeylElement]:
    datum = build_root_datum(family)
    n = family.n
    basis = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    gens = []
    for alpha in datum.simple_roots:
        images = [reflect(datum, alpha, e) for e in basis]
        perm = tuple(next(i for i, c in enumerate(img) if c) for img in images)
        signs = [0] * n
        for j, img in enumerate(images):
            signs[perm[j]] = img[perm[j]]
        gens.append(WeylElement(perm, tuple(signs)))
    return gens


def generate_group(generators: Iterable[WeylElement], n: int, limit: int | None = None) -> set[WeylElement]:
    """Closure of the generators under composition, by breadth-first search.

    Stops early and returns the partial closure once it exceeds ``limit`` elements.
    """
    gens = list(generators)
    ident = WeylElement.identity(n)
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = s.compose(g)
            if h not in seen:
                seen.add(h)
                if limit is not None and len(seen) > limit:
                    return seen
                queue.append(h)
    return seen


def act_on_subset(w: WeylElement, subset: Iterable[int], datum: RootDatum) -> Subset | NotSimple:
    images = []
    for i in subset:
        image = w.act(datum.simple_roots[i - 1])
        j = datum.simple_index.get(image)
        if j is None:
            return NOT_SIMPLE
        images.append(j)
    return tuple(sorted(images))


def subset_to_mask(subset: Iterable[int]) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << (i - 1)
    return mask


def mask_to_subset(mask: int) -> Subset:
    out, i = [], 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def all_subsets(size: int) -> list[Subset]:
    """All subsets of {1..size} in lexicographic order of their sorted index tuples."""
    return sorted(mask_to_subset(m) for m in range(1 << size))


class WeylTable:
    """The whole Weyl group as numpy arrays, with the images of the simple roots precomputed."""

    def __init__(self, family: GroupFamily):
        self.family = family
        self.datum = build_root_datum(family)
        n = family.n
        perms = np.array(list(permutations(range(n))), dtype=np.int8).reshape(-1, n)
        patterns = np.array(_sign_patterns(family), dtype=np.int8)
        # Permutation-major order, matching enumerate_weyl.
        self.perms = np.repeat(perms, len(patterns), axis=0)
        self.signs = np.tile(patterns, (len(perms), 1))
        self.size = len(self.perms)

        self._powers = 5 ** np.arange(n, dtype=np.int64)
        keys = np.array([self._key(r) for r in self.datum.roots], dtype=np.int64)
        self._key_order = np.argsort(keys)
        self._sorted_keys = keys[self._key_order]

        simple_pos = np.full(len(self.datum.roots), -1, dtype=np.int16)
        for k, alpha in enumerate(self.datum.simple_roots):
            simple_pos[self.datum.root_index[alpha]] = k
        self.simple_pos = simple_pos
        # images[w, k] = index (into datum.roots) of w applied to the k-th simple root
        d = len(self.datum.simple_roots)
        self.images = np.zeros((self.size, d), dtype=np.int16)
        for k, alpha in enumerate(self.datum.simple_roots):
            self.images[:, k] = self.root_images(alpha)

    def _key(self, v) -> int:
        return int(np.dot(np.asarray(v, dtype=np.int64) + 2, self._powers))

    def apply(self, v: Vector) -> np.ndarray:
        """w.v for every element w, as a (|W|, n) array."""
        v = np.asarray(v, dtype=np.int8)
        rows = np.arange(self.size)[:, None]
        out = np.zeros((self.size, self.family.n), dtype=np.int8)
        out[rows, self.perms] = self.signs[rows, self.perms] * v[None, :]
        return out

    def root_images(self, v: Vector) -> np.ndarray:
        keys = (self.apply(v).astype(np.int64) + 2) @ self._powers
        pos = np.searchsorted(self._sorted_keys, keys)
        return self._key_order[pos].astype(np.int16)

    def permutes_roots(self) -> bool:
        """Every element sends every root to a root."""
        for r in self.datum.roots:
            keys = (self.apply(r).astype(np.int64) + 2) @ self._powers
            pos = np.searchsorted(self._sorted_keys, keys).clip(0, len(self._sorted_keys) - 1)
            if not (self._sorted_keys[pos] == keys).all():
                return False
        return True

    def element(self, index: int) -> WeylElement:
        return WeylElement(tuple(int(x) for x in self.perms[index]), tuple(int(x) for x in self.signs[index]))


@lru_cache(maxsize=16)
def weyl_table(family: GroupFamily) -> WeylTable:
    return WeylTable(family)


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class OrbitClass:
    representative: Subset
    members: tuple[Subset, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    def to_json(self) -> dict:
        return {
            "representative": list(self.representative),
            "size": self.size,
            "members": [list(m) for m in self.members],
        }


def _subset_images(patterns: np.ndarray, masks: list[int], d: int) -> list[tuple[int, np.ndarray]]:
    out = []
    for mask in masks:
        idx = [k for k in range(d) if mask >> k & 1]
        if not idx:
            out.append((mask, np.zeros(1, dtype=np.int64)))
            continue
        sub = patterns[:, idx].astype(np.int64)
        ok = (sub >= 0).all(axis=1)
        images = (np.int64(1) << sub[ok]).sum(axis=1)
        out.append((mask, np.unique(images)))
    return out


@lru_cache(maxsize=32)
def _orbits(family: GroupFamily) -> tuple[OrbitClass, ...]:
    return tuple(_compute_orbits(family, jobs=1))


def _compute_orbits(family: GroupFamily, jobs: int) -> list[OrbitClass]:
    table = weyl_table(family)
    d = family.delta_size
    # Only which simple root lands on which simple node matters; collapse duplicate rows.
    patterns = np.unique(table.simple_pos[table.images], axis=0)
    masks = list(range(1 << d))
    if jobs > 1:
        chunks = [masks[i::jobs] for i in range(jobs)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda c: _subset_images(patterns, c, d), chunks))
        results = sorted((r for part in parts for r in part), key=lambda r: r[0])
    else:
        results = _subset_images(patterns, masks, d)

    uf = UnionFind(1 << d)
    for mask, images in results:
        for image in images.tolist():
            uf.union(mask, image)
    groups: dict[int, list[Subset]] = {}
    for mask in masks:
        groups.setdefault(uf.find(mask), []).append(mask_to_subset(mask))
    classes = [OrbitClass(min(ms), tuple(sorted(ms))) for ms in groups.values()]
    return sorted(classes, key=lambda c: c.representative)


def subset_orbits(family: GroupFamily, max_rank: int | None = None, jobs: int = 1) -> list[OrbitClass]:
    """Orbit classes of 2^Delta under the Weyl group, sorted by lexicographically smallest member."""
    check_bound(family, max_rank)
    if jobs > 1:
        return _compute_orbits(family, jobs)
    return list(_orbits(family))


def orbit_class_of(family: GroupFamily, subset: Iterable[int], max_rank: int | None = None) -> OrbitClass:
    key = tuple(sorted(subset))
    for c in subset_orbits(family, max_rank):
        if key in c.members:
            return c
    raise ValueError(f"{key} is not a subset of the simple roots of {family.describe()}")


def root_subsystem(datum: RootDatum, subset: Iterable[int]) -> frozenset[Vector]:
    """Phi_I: the closure of +-I under the simple reflections of I."""
    gens = [datum.simple_roots[i - 1] for i in subset]
    found = set(gens) | {tuple(-x for x in g) for g in gens}
    frontier = list(found)
    while frontier:
        nxt = []
        for r in frontier:
            for g in gens:
                image = reflect(datum, g, r)
                if image not in found:
                    found.add(image)
                    nxt.append(image)
        frontier = nxt
    return frozenset(found)


def _orthogonal_basis(vectors: list[Vector], n: int) -> list[tuple[int, ...]]:
    """Integer basis of the orthogonal complement of the span of ``vectors``."""
    import sympy

    if not vectors:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    basis = []
    for v in sympy.Matrix(vectors).nullspace():
        scale = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
        basis.append(tuple(int(x * scale) for x in v))
    return basis


def stabilizer_quotient_order(family: GroupFamily, subset: Iterable[int], max_rank: int | None = None) -> int:
    """|{w : w(Phi_I) = Phi_I}| / |W(Phi_I)|.

    The denominator counts the elements fixing the orthogonal complement of I pointwise,
    which is exactly the reflection subgroup W(Phi_I) (Steinberg's fixed-point theorem).
    """
    check_bound(family, max_rank)
    subset = tuple(sorted(subset))
    table = weyl_table(family)
    datum = table.datum
    phi = root_subsystem(datum, subset)
    in_phi = np.zeros(len(datum.roots), dtype=bool)
    for r in phi:
        in_phi[datum.root_index[r]] = True
    if subset:
        cols = table.images[:, [i - 1 for i in subset]]
        numerator = int(in_phi[cols].all(axis=1).sum())
    else:
        numerator = table.size
    fixes = np.ones(table.size, dtype=bool)
    for x in _orthogonal_basis([datum.simple_roots[i - 1] for i in subset], family.n):
        fixes &= (table.apply(x) == np.asarray(x, dtype=np.int8)).all(axis=1)
    denominator = int(fixes.sum())
    if numerator % denominator:
        raise ArithmeticError(f"{denominator} does not divide {numerator} for I = {subset}")
    return numerator // denominator


def setwise_stabilizer_order(family: GroupFamily, subset: Iterable[int], max_rank: int | None = None) -> int:
    """|{w : w(I) = I}|; for a subset of simple roots this complements W(Phi_I) in Stab(Phi_I)."""
    check_bound(family, max_rank)
    subset = tuple(sorted(subset))
    table = weyl_table(family)
    if not subset:
        return table.size
    cols = table.simple_pos[table.images[:, [i - 1 for i in subset]]]
    target = np.array([i - 1 for i in subset])
    return int((np.sort(cols, axis=1) == target).all(axis=1).sum())
