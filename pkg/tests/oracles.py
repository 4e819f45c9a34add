"""Slow, independent reference computations used to derive frozen test values.

Nothing here imports the numpy enumeration core or the closed-form label rules.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product

import sympy


def partition_count(m: int) -> int:
    """Euler's pentagonal-number recurrence."""
    p = [1] + [0] * m
    for i in range(1, m + 1):
        k, total = 1, 0
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > i:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[i - g1]
            if g2 <= i:
                total += sign * p[i - g2]
            k += 1
        p[i] = total
    return p[m]


def roots(kind: str, n: int) -> set[tuple[int, ...]]:
    def e(i, c=1):
        v = [0] * n
        v[i] = c
        return v

    out = set()
    if kind in ("GL", "SL", "PGL"):
        for i in range(n):
            for j in range(n):
                if i != j:
                    out.add(tuple(a - b for a, b in zip(e(i), e(j))))
        return out
    for i in range(n):
        for j in range(i + 1, n):
            for a, b in product((1, -1), repeat=2):
                out.add(tuple(x + y for x, y in zip(e(i, a), e(j, b))))
    if kind == "Sp":
        out |= {tuple(e(i, s)) for i in range(n) for s in (2, -2)}
    elif kind == "SOodd":
        out |= {tuple(e(i, s)) for i in range(n) for s in (1, -1)}
    return out


def simple_roots(kind: str, n: int) -> list[tuple[int, ...]]:
    base = [tuple(1 if k == i else -1 if k == i + 1 else 0 for k in range(n)) for i in range(n - 1)]
    if kind in ("GL", "SL", "PGL"):
        return base
    last = {
        "Sp": tuple(2 if k == n - 1 else 0 for k in range(n)),
        "SOodd": tuple(1 if k == n - 1 else 0 for k in range(n)),
        "SOeven": tuple(1 if k >= n - 2 else 0 for k in range(n)),
    }[kind]
    return base + [last]


def weyl_matrices(kind: str, n: int) -> list[tuple[tuple[int, ...], ...]]:
    """All signed permutation matrices in the Weyl group, built directly."""
    out = []
    for p in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            if kind in ("GL", "SL", "PGL") and -1 in signs:
                continue
            if kind == "SOeven" and signs.count(-1) % 2:
                continue
            out.append(tuple(tuple(signs[i] if p[i] == j else 0 for j in range(n)) for i in range(n)))
    return out


def matvec(m, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def orbit_classes(kind: str, n: int) -> list[list[tuple[int, ...]]]:
    """Orbit classes by exhaustive search: J ~ I iff some w maps the roots of I onto those of J."""
    delta = simple_roots(kind, n)
    index = {r: i + 1 for i, r in enumerate(delta)}
    mats = weyl_matrices(kind, n)
    d = len(delta)
    subsets = [tuple(i + 1 for i in range(d) if mask >> i & 1) for mask in range(1 << d)]
    assigned: dict[tuple, int] = {}
    classes: list[list[tuple]] = []
    for s in sorted(subsets):
        if s in assigned:
            continue
        orbit = set()
        for m in mats:
            images = [matvec(m, delta[i - 1]) for i in s]
            if all(im in index for im in images):
                orbit.add(tuple(sorted(index[im] for im in images)))
        for t in orbit:
            assigned[t] = len(classes)
        classes.append(sorted(orbit))
    return classes


def reflection(alpha, x):
    """s_alpha(x) = x - 2 (x, alpha)/(alpha, alpha) alpha with exact rationals."""
    c = Fraction(2 * sum(a * b for a, b in zip(x, alpha)), sum(a * a for a in alpha))
    out = tuple(Fraction(xi) - c * ai for xi, ai in zip(x, alpha))
    assert all(v.denominator == 1 for v in out)
    return tuple(int(v) for v in out)


def charpoly_coeffs(matrix) -> dict[int, int]:
    """det(q I - M) by sympy, as a degree -> coefficient map."""
    q = sympy.Symbol("q")
    poly = sympy.Matrix(matrix).charpoly(q)
    return {int(k[0]): int(c) for k, c in poly.as_dict().items()}


def residual_weyl_order(kind: str, n: int, subset) -> int:
    """|N_W(Phi_I)| / |W(Phi_I)| from scratch: Phi_I as integer span, W(Phi_I) by generating reflections."""
    all_roots = roots(kind, n)
    delta = simple_roots(kind, n)
    gens = [delta[i - 1] for i in subset]
    phi = set()
    if gens:
        basis = sympy.Matrix(gens).T
        for r in all_roots:
            try:
                sol, params = basis.gauss_jordan_solve(sympy.Matrix(r))
            except ValueError:
                continue
            if all(x.is_integer for x in sol):
                phi.add(r)
    mats = weyl_matrices(kind, n)
    stab = sum(1 for m in mats if {matvec(m, r) for r in phi} == phi)
    # Generate W(Phi_I) as matrices.
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    def refl_matrix(alpha):
        cols = [reflection(alpha, tuple(int(i == j) for i in range(n))) for j in range(n)]
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    def mul(a, b):
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))

    refls = [refl_matrix(g) for g in gens]
    group, frontier = {ident}, [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in refls:
                h = mul(s, g)
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    assert stab % len(group) == 0
    return stab // len(group)
