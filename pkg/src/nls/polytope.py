"""Exact lattice polytopes: vertex enumeration, Minkowski sums, norms.

Vertices are found point by point: ``p`` is a vertex of ``conv(S)`` iff it
is not a convex combination of ``S - {p}``.  The combination is searched by
a fraction-free phase-one simplex on integer tableaux (Bland's rule), so no
floating point enters the geometry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .fields import VectorField, to_d_form

Point = tuple[int, ...]


def feasible_point(A: Sequence[Sequence[int]], b: Sequence[int]):
    """Some ``x >= 0`` with ``A x = b``, or None if there is none.

    Phase one of the simplex method on ``A x + s = b`` (rows flipped so that
    ``b >= 0``), minimising the sum of artificials ``s`` under Bland's
    anti-cycling rule.  The tableau is kept fraction-free: integer entries
    over a common positive denominator, updated by exact division after
    each pivot.  Inputs must be integers (scale rationals beforehand).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    width = n + m
    rows = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        rows.append([sign * int(a) for a in A[i]]
                    + [int(i == k) for k in range(m)]
                    + [sign * int(b[i])])
    basis = [n + i for i in range(m)]
    cost = [0] * (width + 1)
    for r in rows:
        for j in range(n):
            cost[j] -= r[j]
        cost[width] -= r[width]
    denom = 1

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                if leave is None:
                    leave = i
                    continue
                lr = rows[leave]
                # compare r[w]/r[e] with lr[w]/lr[e]
                lhs, rhs = r[width] * lr[enter], lr[width] * r[enter]
                if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                    leave = i
        if leave is None:  # unbounded; impossible for a phase-one objective
            break
        piv = rows[leave]
        pv = piv[enter]
        for i, r in enumerate(rows):
            if i != leave:
                f = r[enter]
                rows[i] = [(pv * a - f * c) // denom for a, c in zip(r, piv)]
        f = cost[enter]
        cost = [(pv * a - f * c) // denom for a, c in zip(cost, piv)]
        denom = pv
        basis[leave] = enter

    if cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = Fraction(rows[i][width], denom)
    return x


def convex_combination(p: Sequence[int], points: Sequence[Sequence[int]]):
    """Weights ``w >= 0``, ``sum(w) = 1``, ``sum(w_k points_k) = p``; None if p is outside."""
    if not points:
        return None
    d = len(p)
    A = [[q[k] for q in points] for k in range(d)]
    A.append([1] * len(points))
    return feasible_point(A, list(p) + [1])


def _probe_directions(d: int) -> list[tuple[int, ...]]:
    dirs = []
    for k in range(d):
        e = [0] * d
        e[k] = 1
        dirs.append(tuple(e))
        dirs.append(tuple(-c for c in e))
    for signs in range(1 << d):
        dirs.append(tuple(1 if signs >> k & 1 else -1 for k in range(d)))
    dirs.extend([tuple(k + 1 for k in range(d)), tuple(-(k + 1) for k in range(d)),
                 tuple((-1) ** k * (2 * k + 1) for k in range(d))])
    return dirs


def vertex_set(points: Iterable[Sequence[int]]) -> frozenset[Point]:
    """Vertices of the convex hull of a finite lattice point set."""
    pts = sorted({tuple(int(c) for c in p) for p in points})
    if not pts:
        raise ValueError("vertex set of an empty point set")
    if len(pts) <= 2:
        return frozenset(pts)
    # a unique maximiser of any linear functional is a vertex
    known = {pts[0], pts[-1]}
    for c in _probe_directions(len(pts[0])):
        vals = [sum(a * b for a, b in zip(c, p)) for p in pts]
        top = max(vals)
        if vals.count(top) == 1:
            known.add(pts[vals.index(top)])
    # dropping a proven non-vertex leaves the hull unchanged
    alive = list(pts)
    for p in pts:
        if p in known:
            continue
        others = [q for q in alive if q != p]
        if convex_combination(p, others) is not None:
            alive.remove(p)
    return frozenset(alive)


def hull_certificate(p: Sequence[int], points: Sequence[Sequence[int]]) -> dict[Point, Fraction] | None:
    """Explicit convex combination of ``points - {p}`` reproducing ``p``."""
    others = [tuple(q) for q in points if tuple(q) != tuple(p)]
    w = convex_combination(p, others)
    if w is None:
        return None
    return {q: c for q, c in zip(others, w) if c}


@dataclass(frozen=True)
class LatticePolytope:
    dimension: int
    generators: frozenset[Point]
    vertices: frozenset[Point] = field(default=None, compare=False)

    def __post_init__(self):
        gens = frozenset(tuple(int(c) for c in g) for g in self.generators)
        if not gens:
            raise ValueError("a polytope needs at least one generator")
        if any(len(g) != self.dimension for g in gens):
            raise ValueError("generator of the wrong dimension")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "vertices", vertex_set(gens))

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> "LatticePolytope":
        pts = [tuple(p) for p in points]
        if not pts:
            raise ValueError("a polytope needs at least one generator")
        return cls(len(pts[0]), frozenset(pts))

    def sorted_vertices(self) -> list[Point]:
        return sorted(self.vertices)

    def __contains__(self, p) -> bool:
        return convex_combination(tuple(p), sorted(self.vertices)) is not None

    def __add__(self, other: "LatticePolytope") -> "LatticePolytope":
        return minkowski_sum(self, other)

    def __repr__(self) -> str:
        return f"LatticePolytope(vertices={self.sorted_vertices()})"


def newton_polytope(X: VectorField) -> LatticePolytope:
    form = to_d_form(X)
    if not form.coefficients:
        raise ValueError("the zero field has no Newton polytope")
    return LatticePolytope(X.dimension, frozenset(form.coefficients))


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.dimension != Q.dimension:
        raise ValueError(f"dimension mismatch: {P.dimension} vs {Q.dimension}")
    gens = {tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices}
    return LatticePolytope(P.dimension, frozenset(gens))


def is_vertex_of(p: Sequence[int], P: LatticePolytope) -> bool:
    if len(p) != P.dimension:
        raise ValueError("dimension mismatch")
    return tuple(p) in P.vertices


def norm_sq(v: Sequence[int]) -> int:
    return sum(int(c) * int(c) for c in v)
