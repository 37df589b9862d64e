import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import ConvexHull

from conftest import poly, polynomials
from face_helpers import euler, multiplicative, random_poly, random_weight, restriction, restriction_case
from nad.poly import ParametricPolynomial
from nad.polyhedra import (
    WeightVector,
    ZeroPolynomialError,
    common_cones,
    face_function,
    minimal_points,
    newton_boundary,
    newton_polyhedron,
    support_min,
    vanishing_subspaces,
)


def witnesses(cones):
    return sorted(c.witness.w for c in cones)


class TestExamples:
    def test_cusp_cones(self):
        f = poly("z1^2 + z2^3")
        assert witnesses(common_cones([f], ())) == [(1, 1), (2, 1), (3, 2)]

    def test_cusp_faces(self):
        f = poly("z1^2 + z2^3")
        assert face_function(f, (3, 2)) == f
        assert str(face_function(f, (1, 1))) == "z1^2"
        assert support_min(f, (3, 2))[0] == 6

    def test_polyhedron(self):
        P = newton_polyhedron(poly("z1^2 + z1*z2 + z2^3 + z1^2*z2^2"))
        assert P.vertices == {(2, 0), (1, 1), (0, 3)}
        assert P.contains((1, 2)) and not P.contains((0, 2))
        assert ((1, 1), 2) in P.facets and ((1, 0), 0) in P.facets

    def test_umbrella_noncompact(self):
        f = poly("z1^2 - z2^2*z3", n=3)
        cones = common_cones([f], {2, 3})
        assert [c.witness.w for c in cones] == [(1, 0, 0)]
        assert str(face_function(f, (1, 0, 0))) == "-z2^2*z3"

    def test_vanishing_subspaces(self):
        f = poly("z1^2 - z2^2*z3", n=3)
        assert vanishing_subspaces(f).subspaces == {frozenset(), frozenset({2}), frozenset({3})}
        assert {1, 2} not in vanishing_subspaces(f)

    def test_boundary_of_coordinate_product(self):
        faces = newton_boundary(poly("z1*z2"))
        assert [set(f.carrier) for f in faces] == [{(1, 1)}]

    def test_two_factor_cones(self):
        f, g = poly("z1 + z2^2"), poly("z1^2 + z2")
        cones = common_cones([f, g], ())
        for c in cones:
            for h, face in zip((f, g), c.faces):
                assert support_min(h, c.witness)[1].carrier == face.carrier
        assert {(1, 2), (2, 1), (1, 1)} <= set(witnesses(cones))

    def test_zero_polynomial(self):
        z = ParametricPolynomial.zero(poly("z1").ring)
        with pytest.raises(ZeroPolynomialError):
            newton_polyhedron(z)
        with pytest.raises(ZeroPolynomialError):
            common_cones([z], ())

    def test_weight_validation(self):
        with pytest.raises(ValueError):
            WeightVector((0, 0))
        with pytest.raises(ValueError):
            WeightVector((1, -1))
        assert WeightVector((0, 3, 0)).I == {1, 3}


@given(polynomials(min_terms=1), st.lists(st.integers(0, 5), min_size=4, max_size=4), st.integers(1, 5))
@settings(max_examples=150)
def test_scale_invariance(f, w, c):
    if f.is_zero():
        return
    w = w[: f.ring.n]
    if not any(w):
        return
    scaled = tuple(c * x for x in w)
    assert face_function(f, w) == face_function(f, scaled)
    assert support_min(f, scaled)[0] == c * support_min(f, w)[0]


@given(polynomials(min_terms=1), polynomials(min_terms=1), st.data())
@settings(max_examples=150)
def test_multiplicativity(f, g, data):
    if f.is_zero() or g.is_zero() or f.ring != g.ring:
        return
    w = [data.draw(st.integers(0, 4)) for _ in range(f.ring.n)]
    if any(w):
        assert multiplicative(f, g, tuple(w))


@given(polynomials(min_terms=1), st.data())
@settings(max_examples=150)
def test_euler(f, data):
    if f.is_zero():
        return
    w = [data.draw(st.integers(0, 4)) for _ in range(f.ring.n)]
    if any(w):
        assert euler(f, tuple(w))


def test_restriction_identity_seeded():
    rng = random.Random(3)
    for _ in range(100):
        f, w = restriction_case(rng)
        assert restriction(f, w) is True


def test_restriction_not_applicable_on_vanishing_subspace():
    f = poly("z1^2 - z2^2*z3", n=3)
    assert restriction(f, (1, 0, 1)) is None


@given(polynomials(n=2, min_terms=1, params=()), st.integers(1, 8), st.integers(1, 8))
@settings(max_examples=80)
def test_facets_are_valid(f, a, b):
    if f.is_zero():
        return
    P = newton_polyhedron(f)
    for normal, rhs in P.facets:
        assert all(x >= 0 for x in normal)
        assert all(sum(x * y for x, y in zip(normal, v)) >= rhs for v in f.support)
        assert sum(1 for v in P.vertices if sum(x * y for x, y in zip(normal, v)) == rhs) >= 1
    # every support point lies in the polyhedron, and the vertices are support points
    assert all(P.contains(v) for v in f.support)
    assert P.vertices <= f.support


def _hull_vertices(points, n):
    """Vertices of conv(points) + R^n_+ via scipy: add far points along each axis and keep minimal hull vertices."""
    pts = np.array(sorted(points), dtype=float)
    big = pts.max() * 4 + 10
    extra = []
    for p in pts:
        for i in range(n):
            q = p.copy()
            q[i] = big
            extra.append(q)
    cloud = np.vstack([pts, np.array(extra)])
    if len(cloud) <= n:
        return {tuple(int(x) for x in p) for p in pts}
    hull = ConvexHull(cloud, qhull_options="Qt")
    ids = {i for i in hull.vertices if i < len(pts)}
    return {tuple(int(x) for x in pts[i]) for i in ids}


@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)), min_size=2, max_size=8))
@settings(max_examples=100)
def test_vertices_match_scipy_hull(points):
    points = {p for p in points if any(p)}
    if len(points) < 2:
        return
    ours = set(minimal_points(points))
    # scipy needs full-dimensional input; degenerate clouds are skipped
    try:
        ref = _hull_vertices(points, 3)
    except Exception:
        return
    assert ours == ref


@given(polynomials(n=3, min_terms=1, params=(), max_terms=5))
@settings(max_examples=40)
def test_cones_partition_random_weights(f):
    """Every positive weight selects a face tuple listed among the compact common cones."""
    if f.is_zero():
        return
    cones = common_cones([f], ())
    listed = {c.face_tuple() for c in cones}
    rng = random.Random(hash(str(f)) & 0xFFFF)
    for _ in range(5):
        w = random_weight(rng, 3, zeros=False)
        assert (support_min(f, w)[1].carrier,) in listed
    for c in cones:
        assert c.witness.is_positive()
        assert support_min(f, c.witness)[1].carrier == c.faces[0].carrier


def test_cones_partition_two_factors_seeded():
    rng = random.Random(5)
    for _ in range(10):
        f, g = random_poly(rng), random_poly(rng)
        cones = common_cones([f, g], ())
        listed = {c.face_tuple() for c in cones}
        for _ in range(20):
            w = random_weight(rng, 3, zeros=False)
            assert (support_min(f, w)[1].carrier, support_min(g, w)[1].carrier) in listed


def test_cones_with_zero_weights_seeded():
    rng = random.Random(9)
    for _ in range(10):
        f = random_poly(rng)
        for I in ({1}, {2, 3}):
            cones = common_cones([f], I)
            listed = {c.face_tuple() for c in cones}
            for c in cones:
                assert c.witness.I == I
            for _ in range(10):
                w = tuple(0 if i + 1 in I else rng.randint(1, 5) for i in range(3))
                assert (support_min(f, w)[1].carrier,) in listed
