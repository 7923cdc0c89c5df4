"""Planar primitives: distances, circumcircles and the minimum enclosing circle.

All coordinates are meters. Functions accept anything indexable as ``(x, y)``
and return :class:`Point` / :class:`Circle` named tuples.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import CollinearPoints, EmptyInput

# Absolute signed-area floor (m^2) below which a triangle is degenerate.
COLLINEAR_AREA_TOL = 1e-9

_REL_EPS = 1e-12


class Point(NamedTuple):
    x: float
    y: float


class Circle(NamedTuple):
    center: Point
    radius: float

    def contains(self, p, slack: float = 0.0) -> bool:
        return dist(self.center, p) <= self.radius + slack


def as_point(p) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite coordinate: {p!r}")
    return Point(x, y)


def dist(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def dist_sq(a, b) -> float:
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy


def midpoint(a, b) -> Point:
    return Point((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)


def point_toward(origin, target, distance: float) -> Point:
    """Point on the ray origin->target at ``distance`` from origin.

    The result never lies farther than ``distance`` from ``origin`` after
    rounding, so an inclusive ``<= distance`` test on it always succeeds.
    """
    span = dist(origin, target)
    if span == 0.0:
        return Point(float(origin[0]), float(origin[1]))
    t = distance / span
    while True:
        p = Point(origin[0] + (target[0] - origin[0]) * t,
                  origin[1] + (target[1] - origin[1]) * t)
        if dist_sq(origin, p) <= distance * distance:
            return p
        t = math.nextafter(t, 0.0)


def circumcenter(a, b, c) -> Circle:
    """Circle through three non-collinear points.

    Raises CollinearPoints when the triangle's signed area is below
    ``COLLINEAR_AREA_TOL``.
    """
    # Translate to a's frame for precision with large coordinates.
    ox, oy = a[0], a[1]
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    cross = bx * cy - by * cx
    if abs(cross) / 2.0 < COLLINEAR_AREA_TOL:
        raise CollinearPoints(f"degenerate triangle {a!r}, {b!r}, {c!r}")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    if abs(cross) < 1e-6 * math.sqrt(b2 * c2):
        center = _exact_circumcenter(a, b, c)
    else:
        d = 2.0 * cross
        ux = (cy * b2 - by * c2) / d
        uy = (bx * c2 - cx * b2) / d
        center = Point(ox + ux, oy + uy)
    radius = max(dist(center, a), dist(center, b), dist(center, c))
    return Circle(center, radius)


def _exact_circumcenter(a, b, c) -> Point:
    # Thin triangles amplify rounding by 1/sin(angle); rationals avoid it.
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]) - ax, Fraction(b[1]) - ay
    cx, cy = Fraction(c[0]) - ax, Fraction(c[1]) - ay
    d = 2 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    return Point(float(ax + (cy * b2 - by * c2) / d), float(ay + (bx * c2 - cx * b2) / d))


def diameter_circle(a, b) -> Circle:
    return Circle(midpoint(a, b), dist(a, b) / 2.0)


def farthest_pair(points: Sequence) -> tuple[int, int]:
    """Indices (i, j), i < j, of the two most distant points; lowest ids win ties.

    A single point pairs with itself.
    """
    if not points:
        raise EmptyInput("farthest_pair of empty input")
    best = (0, 0)
    best_d = -1.0
    for i in range(len(points)):
        pi = points[i]
        for j in range(i + 1, len(points)):
            d = dist_sq(pi, points[j])
            if d > best_d:
                best_d = d
                best = (i, j)
    return best


def _inside(c: Circle, p) -> bool:
    return dist(c.center, p) <= c.radius * (1.0 + _REL_EPS) + _REL_EPS


def min_enclosing_circle(points: Iterable, seed: int = 0) -> Circle:
    """Smallest circle containing every point (randomized incremental, Welzl).

    ``seed`` fixes the internal shuffle; the returned circle is unique up to
    rounding, so it only affects the running time.
    """
    pts = [as_point(p) for p in points]
    if not pts:
        raise EmptyInput("min_enclosing_circle of empty input")
    random.Random(seed).shuffle(pts)

    c = Circle(pts[0], 0.0)
    for i in range(1, len(pts)):
        if not _inside(c, pts[i]):
            c = _mec_one_boundary(pts[:i], pts[i])
    return c


def _mec_one_boundary(pts: list[Point], p: Point) -> Circle:
    c = Circle(p, 0.0)
    for i, q in enumerate(pts):
        if not _inside(c, q):
            if c.radius == 0.0:
                c = diameter_circle(p, q)
            else:
                c = _mec_two_boundary(pts[: i + 1], p, q)
    return c


def _mec_two_boundary(pts: list[Point], p: Point, q: Point) -> Circle:
    c = diameter_circle(p, q)
    for r in pts:
        if not _inside(c, r):
            try:
                c = circumcenter(p, q, r)
            except CollinearPoints:
                # r lies on line pq outside the current circle: the circle
                # must span the farthest pair among the three.
                cands = [diameter_circle(p, r), diameter_circle(q, r)]
                c = max(cands, key=lambda k: k.radius)
    return c
