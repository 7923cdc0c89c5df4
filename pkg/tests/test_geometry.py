import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mndp.errors import CollinearPoints, EmptyInput
from mndp.geometry import (
    Point, circumcenter, dist, farthest_pair, midpoint, min_enclosing_circle, point_toward,
)
from oracles import brute_force_mec_radius

coord = st.floats(-2e4, 2e4, allow_nan=False, allow_infinity=False)
points = st.tuples(coord, coord)


@pytest.mark.parametrize("a, b, expected", [
    ((0, 0), (0, 0), 0.0),
    ((0, 0), (3, 4), 5.0),
    ((8000, 8000), (20000, 20000), math.sqrt(2 * 12000 ** 2)),
])
def test_dist(a, b, expected):
    assert dist(a, b) == pytest.approx(expected, rel=1e-12)


def test_dist_bs_pair_value():
    assert dist((8000, 8000), (20000, 20000)) == pytest.approx(16970.5627, abs=1e-4)


@given(points, points, points)
def test_dist_is_metric(a, b, c):
    assert dist(a, b) == dist(b, a)
    assert dist(a, a) == 0
    assert dist(a, c) <= dist(a, b) + dist(b, c) + 1e-9


@pytest.mark.parametrize("a, b, expected", [
    ((0, 0), (2, 0), (1, 0)),
    ((1, 1), (1, 1), (1, 1)),
    ((-2, 4), (6, -4), (2, 0)),
])
def test_midpoint(a, b, expected):
    assert midpoint(a, b) == Point(*expected)


def test_circumcenter_right_triangle():
    c = circumcenter((0, 0), (1, 0), (0, 1))
    assert c.center == pytest.approx((0.5, 0.5))
    assert c.radius == pytest.approx(math.sqrt(2) / 2)


def test_circumcenter_equilateral():
    c = circumcenter((0, 0), (1, 0), (0.5, math.sqrt(3) / 2))
    assert c.radius == pytest.approx(1 / math.sqrt(3), rel=1e-12)


def test_circumcenter_collinear():
    with pytest.raises(CollinearPoints):
        circumcenter((0, 0), (1, 0), (2, 0))


@settings(max_examples=300)
@given(points, points, points)
def test_circumcenter_equidistant(a, b, c):
    try:
        circ = circumcenter(a, b, c)
    except CollinearPoints:
        return
    for p in (a, b, c):
        assert abs(dist(circ.center, p) - circ.radius) <= 1e-9 * circ.radius + 1e-9


def test_mec_single_point():
    assert min_enclosing_circle([(3.5, -1)]) == ((3.5, -1), 0.0)


def test_mec_two_points():
    c = min_enclosing_circle([(0, 0), (4, 0)])
    assert c.center == pytest.approx((2, 0))
    assert c.radius == pytest.approx(2)


def test_mec_empty():
    with pytest.raises(EmptyInput):
        min_enclosing_circle([])


def test_mec_collinear_triple():
    c = min_enclosing_circle([(0, 0), (1, 0), (2, 0)])
    assert c.center == pytest.approx((1, 0))
    assert c.radius == pytest.approx(1)


def test_mec_fifty_random_points_matches_brute_force():
    rng = np.random.default_rng(11)
    pts = rng.random((50, 2))
    c = min_enclosing_circle(pts.tolist())
    assert c.radius == pytest.approx(brute_force_mec_radius(pts), rel=1e-6)
    assert all(dist(c.center, p) <= c.radius + 1e-9 for p in pts)


def test_mec_matches_brute_force_small_sets():
    rng = np.random.default_rng(5)
    for _ in range(150):
        n = int(rng.integers(1, 25))
        pts = rng.random((n, 2)) * rng.choice([1.0, 25000.0])
        c = min_enclosing_circle(pts.tolist(), seed=int(rng.integers(1 << 30)))
        assert c.radius == pytest.approx(brute_force_mec_radius(pts), rel=1e-6, abs=1e-12)


def test_mec_grid_with_many_cocircular_points():
    pts = [(x, y) for x in range(5) for y in range(5)]
    c = min_enclosing_circle(pts)
    assert c.center == pytest.approx((2, 2))
    assert c.radius == pytest.approx(math.sqrt(8))


@settings(max_examples=100)
@given(st.lists(points, min_size=1, max_size=30), st.randoms(use_true_random=False))
def test_mec_permutation_invariant_and_contains(pts, rnd):
    c1 = min_enclosing_circle(pts)
    shuffled = list(pts)
    rnd.shuffle(shuffled)
    c2 = min_enclosing_circle(shuffled, seed=rnd.randrange(1 << 30))
    scale = max(1.0, c1.radius)
    assert c2.radius == pytest.approx(c1.radius, rel=1e-6, abs=1e-9)
    assert dist(c1.center, c2.center) <= 1e-6 * scale
    for p in pts:
        assert dist(c1.center, p) <= c1.radius + 1e-9 * scale


def test_farthest_pair_tie_break():
    assert farthest_pair([(0, 0), (1, 0), (0, 1), (1, 1)]) == (0, 3)
    assert farthest_pair([(5, 5)]) == (0, 0)


def test_point_toward_stays_inside_bound():
    rnd = random.Random(3)
    for _ in range(2000):
        o = (rnd.uniform(0, 2e4), rnd.uniform(0, 2e4))
        t = (rnd.uniform(0, 2e4), rnd.uniform(0, 2e4))
        r = rnd.uniform(1, 7000)
        p = point_toward(o, t, r)
        dx, dy = p[0] - o[0], p[1] - o[1]
        assert dx * dx + dy * dy <= r * r
        assert dist(o, p) == pytest.approx(r, abs=1e-9)
