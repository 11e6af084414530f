import random
from fractions import Fraction

import numpy as np
import pytest

from nls.fields import VectorField
from nls.polytope import (LatticePolytope, convex_combination, feasible_point, hull_certificate,
                          is_vertex_of, minkowski_sum, newton_polytope, norm_sq, vertex_set)

import randgen

SQUARE = LatticePolytope.from_points([(0, 0), (1, 0), (0, 1), (1, 1)])
TRIANGLE = LatticePolytope.from_points([(0, 0), (2, 0), (0, 2)])


def line(text):
    return VectorField.from_strings([text], ["x"])


# ---- Newton polytopes


def test_newton_point():
    P = newton_polytope(line("x^2"))
    assert P.generators == {(1,)} and P.vertices == {(1,)}


def test_newton_segment():
    X = VectorField.from_strings(["x1^2 + x1*x2", "0"], ["x1", "x2"])
    P = newton_polytope(X)
    assert P.generators == {(1, 0), (0, 1)} == P.vertices


def test_newton_translation_field():
    assert newton_polytope(line("1")).vertices == {(-1,)}


def test_newton_zero_field():
    with pytest.raises(ValueError):
        newton_polytope(VectorField.zero(2))


# ---- vertex enumeration


def test_vertices_of_collinear_points():
    assert vertex_set([(0,), (1,), (2,)]) == {(0,), (2,)}


def test_vertices_of_square():
    assert SQUARE.vertices == {(0, 0), (1, 0), (0, 1), (1, 1)}


def test_edge_midpoint_dropped():
    assert vertex_set([(0, 0), (2, 0), (0, 2), (1, 1)]) == {(0, 0), (2, 0), (0, 2)}


def test_duplicates_and_interior_points():
    pts = [(0, 0, 0), (0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 4), (1, 1, 1)]
    assert vertex_set(pts) == {(0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 4)}


def test_degenerate_hull_in_higher_dimension():
    # a segment in R^3 with interior lattice points
    pts = [(k, 2 * k, -k) for k in range(-2, 4)]
    assert vertex_set(pts) == {(-2, -4, 2), (3, 6, -3)}


def test_vertex_set_empty():
    with pytest.raises(ValueError):
        vertex_set([])


def test_vertices_subset_of_generators():
    rng = random.Random(11)
    for _ in range(100):
        P = LatticePolytope.from_points(randgen.points(rng, rng.randint(1, 4), rng.randint(1, 10)))
        assert P.vertices <= P.generators


def test_idempotence_and_translation_invariance():
    rng = random.Random(12)
    for _ in range(500):
        d = rng.randint(1, 4)
        pts = randgen.points(rng, d, rng.randint(1, 12))
        V = vertex_set(pts)
        assert vertex_set(V) == V
        c = tuple(rng.randint(-5, 5) for _ in range(d))
        shifted = [tuple(a + b for a, b in zip(p, c)) for p in pts]
        assert vertex_set(shifted) == {tuple(a + b for a, b in zip(v, c)) for v in V}


def test_agrees_with_floating_hull():
    from scipy.spatial import ConvexHull

    rng = random.Random(13)
    checked = 0
    while checked < 200:
        d = rng.randint(2, 4)
        pts = sorted(set(randgen.points(rng, d, rng.randint(d + 2, 14))))
        arr = np.array(pts, dtype=float)
        if np.linalg.matrix_rank(arr[1:] - arr[0]) < d:
            continue  # qhull needs full-dimensional input
        hull = ConvexHull(arr)
        # qhull may keep points lying on a facet; keep only strict vertices
        expected = {p for p in (pts[k] for k in hull.vertices)
                    if convex_combination(p, [q for q in pts if q != p]) is None}
        assert vertex_set(pts) == expected
        checked += 1


# ---- certificates


def test_hull_certificate_reproduces_point():
    rng = random.Random(14)
    for _ in range(200):
        d = rng.randint(1, 4)
        pts = sorted(set(randgen.points(rng, d, rng.randint(2, 12))))
        V = vertex_set(pts)
        for p in pts:
            cert = hull_certificate(p, pts)
            if p in V:
                assert cert is None
                continue
            assert cert is not None and all(w > 0 for w in cert.values())
            assert sum(cert.values()) == 1
            combo = tuple(sum(w * q[k] for q, w in cert.items()) for k in range(d))
            assert combo == p


def test_triangle_midpoint_certificate():
    cert = hull_certificate((1, 1), [(0, 0), (2, 0), (0, 2)])
    assert cert == {(2, 0): Fraction(1, 2), (0, 2): Fraction(1, 2)}


def test_feasible_point_infeasible():
    # x + y = -1 with x, y >= 0
    assert feasible_point([[1, 1]], [-1]) is None


def test_feasible_point_solution():
    x = feasible_point([[1, 2, 0], [0, 1, 1]], [4, 3])
    assert x is not None and min(x) >= 0
    assert x[0] + 2 * x[1] == 4 and x[1] + x[2] == 3


def test_membership():
    assert (1, 1) in TRIANGLE and (0, 0) in TRIANGLE
    assert (2, 1) not in TRIANGLE


# ---- Minkowski sums


def test_minkowski_segments():
    S = LatticePolytope.from_points([(0,), (1,)])
    assert minkowski_sum(S, S).vertices == {(0,), (2,)}


def test_minkowski_square():
    P = LatticePolytope.from_points([(0, 0), (1, 0)])
    Q = LatticePolytope.from_points([(0, 0), (0, 1)])
    assert (P + Q).vertices == SQUARE.vertices


def test_minkowski_points():
    P = LatticePolytope.from_points([(1,)])
    Q = LatticePolytope.from_points([(2,)])
    assert minkowski_sum(P, Q).vertices == {(3,)}


def test_minkowski_dimension_mismatch():
    with pytest.raises(ValueError):
        minkowski_sum(SQUARE, LatticePolytope.from_points([(0,)]))


def test_minkowski_vertices_come_from_vertex_pairs():
    rng = random.Random(15)
    for _ in range(150):
        d = rng.randint(1, 4)
        P = LatticePolytope.from_points(randgen.points(rng, d, rng.randint(1, 12)))
        Q = LatticePolytope.from_points(randgen.points(rng, d, rng.randint(1, 12)))
        sums = {tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices}
        assert minkowski_sum(P, Q).vertices <= sums


# ---- vertex tests and norms


def test_is_vertex_of():
    assert is_vertex_of((3,), LatticePolytope.from_points([(3,)]))
    assert not is_vertex_of((1, 1), TRIANGLE)
    assert is_vertex_of((0, 0), SQUARE)


def test_is_vertex_of_dimension_mismatch():
    with pytest.raises(ValueError):
        is_vertex_of((0,), SQUARE)


@pytest.mark.parametrize("v,n", [((3,), 9), ((-1, 2), 5), ((0, 0, 0), 0)])
def test_norm_sq(v, n):
    assert norm_sq(v) == n
