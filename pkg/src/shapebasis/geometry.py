"""Planar geometry of oriented rectangles and convex polygons.

Rectangles are stored by center, orientation of the long side and the two
side lengths.  Convex polygons are counterclockwise vertex tuples; the
empty intersection is the distinguished value :data:`EMPTY`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import NonPositiveCheck

__all__ = [
    "Point2",
    "Rectangle",
    "ConvexPolygon",
    "EMPTY",
    "rect_polygon",
    "polygon_area",
    "clip_convex",
    "hat_rect",
    "check_rect",
    "check_anchor_points",
    "dyadic_parent",
    "points_in_rectangle",
    "convex_hull",
    "check_rect_inscribed",
]

HALF_PI = 0.5 * math.pi


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Rectangle:
    """Oriented rectangle.

    ``theta`` is the angle in radians between the horizontal axis and the
    long side, normalized into ``[0, pi)``.
    """

    center: Point2
    theta: float
    long: float
    short: float

    def __post_init__(self):
        cx, cy = float(self.center[0]), float(self.center[1])
        if not (math.isfinite(cx) and math.isfinite(cy)):
            raise ValueError("rectangle center must be finite")
        if not (self.short > 0 and self.long >= self.short and math.isfinite(self.long)):
            raise ValueError(f"need long >= short > 0, got long={self.long}, short={self.short}")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        theta = math.fmod(float(self.theta), math.pi)
        if theta < 0:
            theta += math.pi
        if theta >= math.pi:
            theta = 0.0
        object.__setattr__(self, "center", Point2(cx, cy))
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "long", float(self.long))
        object.__setattr__(self, "short", float(self.short))

    @classmethod
    def axis(cls, center, width: float, height: float) -> "Rectangle":
        """Axis-parallel rectangle with the given horizontal/vertical extents."""
        if width >= height:
            return cls(Point2(*center), 0.0, width, height)
        return cls(Point2(*center), HALF_PI, height, width)

    @property
    def area(self) -> float:
        return self.long * self.short

    @property
    def shape(self) -> float:
        return self.long / self.short

    @property
    def is_axis_parallel(self) -> bool:
        return self.theta == 0.0 or self.theta == HALF_PI

    @property
    def width(self) -> float:
        """Horizontal extent (axis-parallel rectangles only)."""
        self._require_axis()
        return self.long if self.theta == 0.0 else self.short

    @property
    def height(self) -> float:
        self._require_axis()
        return self.short if self.theta == 0.0 else self.long

    def _require_axis(self):
        if not self.is_axis_parallel:
            raise ValueError("rectangle is not axis-parallel")

    def direction(self) -> tuple[float, float]:
        if self.theta == HALF_PI:
            return 0.0, 1.0
        return math.cos(self.theta), math.sin(self.theta)

    def vertices(self) -> tuple[Point2, ...]:
        c, s = self.direction()
        hl, hs = 0.5 * self.long, 0.5 * self.short
        cx, cy = self.center
        out = []
        for a, b in ((-hl, -hs), (hl, -hs), (hl, hs), (-hl, hs)):
            out.append(Point2(cx + a * c - b * s, cy + a * s + b * c))
        return tuple(out)

    def local(self, x, y):
        """Coordinates (u along the long side, v along the short side)."""
        c, s = self.direction()
        dx = np.asarray(x, dtype=float) - self.center.x
        dy = np.asarray(y, dtype=float) - self.center.y
        return dx * c + dy * s, -dx * s + dy * c

    def contains(self, x, y, tol: float = 0.0):
        u, v = self.local(x, y)
        return (np.abs(u) <= 0.5 * self.long + tol) & (np.abs(v) <= 0.5 * self.short + tol)

    def bounding_box(self) -> tuple[float, float, float, float]:
        xs = [p.x for p in self.vertices()]
        ys = [p.y for p in self.vertices()]
        return min(xs), min(ys), max(xs), max(ys)


def points_in_rectangle(r: Rectangle, pts: np.ndarray) -> np.ndarray:
    """Boolean mask of the rows of an ``(n, 2)`` array lying in ``r`` (closed)."""
    return r.contains(pts[:, 0], pts[:, 1])


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _signed_area(pts: Sequence) -> float:
    # relative to the first vertex to limit cancellation far from the origin
    ox, oy = pts[0]
    n = len(pts)
    acc = 0.0
    for i in range(1, n - 1):
        x0, y0 = pts[i][0] - ox, pts[i][1] - oy
        x1, y1 = pts[i + 1][0] - ox, pts[i + 1][1] - oy
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


def _cleanup(pts: list) -> list:
    """Drop repeated and collinear vertices.

    The cross-product threshold is 1e-12 times the squared diameter.
    """
    if len(pts) < 3:
        return []
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    diam2 = (max(xs) - min(xs)) ** 2 + (max(ys) - min(ys)) ** 2
    if diam2 == 0.0:
        return []
    tol = 1e-12 * diam2
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        n = len(pts)
        for i in range(n):
            prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % n]
            if abs(_cross(prev, cur, nxt)) <= tol:
                del pts[i]
                changed = True
                break
    return pts if len(pts) >= 3 else []


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple[Point2, ...] = field(default=())

    def __post_init__(self):
        verts = tuple(Point2(float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            return
        if len(verts) < 3:
            raise ValueError("a nonempty polygon needs at least 3 vertices")
        if _signed_area(verts) <= 0:
            raise ValueError("polygon vertices must be counterclockwise with positive area")
        xs = [p.x for p in verts]
        ys = [p.y for p in verts]
        tol = 1e-9 * ((max(xs) - min(xs)) ** 2 + (max(ys) - min(ys)) ** 2)
        n = len(verts)
        for i in range(n):
            if _cross(verts[i - 1], verts[i], verts[(i + 1) % n]) < -tol:
                raise ValueError("polygon is not convex")

    @classmethod
    def from_points(cls, points: Iterable) -> "ConvexPolygon":
        """Build from a convex vertex cycle in either orientation."""
        pts = [(float(x), float(y)) for x, y in points]
        if len(pts) >= 3 and _signed_area(pts) < 0:
            pts.reverse()
        pts = _cleanup(pts)
        if not pts or _signed_area(pts) <= 0:
            return EMPTY
        return cls(tuple(pts))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def area(self) -> float:
        return polygon_area(self)

    def __len__(self) -> int:
        return len(self.vertices)

    def translated(self, dx: float, dy: float) -> "ConvexPolygon":
        return ConvexPolygon(tuple((x + dx, y + dy) for x, y in self.vertices))


EMPTY = ConvexPolygon(())


def rect_polygon(r: Rectangle) -> ConvexPolygon:
    return ConvexPolygon(r.vertices())


def polygon_area(p: ConvexPolygon) -> float:
    if p.is_empty:
        return 0.0
    return abs(_signed_area(p.vertices))


def clip_convex(p: ConvexPolygon, q: ConvexPolygon) -> ConvexPolygon:
    """Intersection of two convex polygons (Sutherland-Hodgman)."""
    if p.is_empty or q.is_empty:
        return EMPTY
    output = list(p.vertices)
    clip = q.vertices
    for j in range(len(clip)):
        a, b = clip[j - 1], clip[j]
        ex, ey = b[0] - a[0], b[1] - a[1]
        inp = output
        output = []
        if not inp:
            break
        s = inp[-1]
        ds = ex * (s[1] - a[1]) - ey * (s[0] - a[0])
        for e in inp:
            de = ex * (e[1] - a[1]) - ey * (e[0] - a[0])
            if de >= 0:
                if ds < 0:
                    output.append(_lerp(s, e, ds, de))
                output.append(e)
            elif ds >= 0:
                output.append(_lerp(s, e, ds, de))
            s, ds = e, de
    return ConvexPolygon.from_points(output)


def _lerp(s, e, ds, de):
    w = ds / (ds - de)
    return (s[0] + w * (e[0] - s[0]), s[1] + w * (e[1] - s[1]))


def _fold(theta: float) -> tuple[float, float]:
    """cos/sin of the angle folded into [0, pi/2] (mirror about the vertical axis)."""
    if theta == HALF_PI:
        return 0.0, 1.0
    return abs(math.cos(theta)), math.sin(theta)


def hat_rect(r: Rectangle) -> Rectangle:
    """Smallest axis-parallel rectangle containing ``r``."""
    if r.is_axis_parallel:
        return r
    c, s = _fold(r.theta)
    width = r.long * c + r.short * s
    height = r.short * c + r.long * s
    return Rectangle.axis(r.center, width, height)


def check_anchor_points(r: Rectangle, t: float) -> tuple[Point2, Point2]:
    """The two opposite corners of the inscribed rectangle lying on the long sides of ``r``.

    First point: on the lower long side at distance ``t*L`` from its right
    end.  Second: on the upper long side at distance ``t*L`` from its left end.
    """
    if not 0 < t < 0.5:
        raise ValueError("t must lie in (0, 1/2)")
    a = (0.5 - t) * r.long
    # lower/upper are w.r.t. the rectangle's own frame; for theta in (pi/2, pi)
    # the mirrored choice keeps the inscribed rectangle nondegenerate.
    sgn = 1.0 if r.theta <= HALF_PI else -1.0
    c, s = r.direction()
    hs = 0.5 * r.short
    cx, cy = r.center
    u1, v1 = sgn * a, -hs
    u2, v2 = -sgn * a, hs
    p1 = Point2(cx + u1 * c - v1 * s, cy + u1 * s + v1 * c)
    p2 = Point2(cx + u2 * c - v2 * s, cy + u2 * s + v2 * c)
    return p1, p2


def check_rect(r: Rectangle, t: float) -> Rectangle:
    """Axis-parallel rectangle inscribed in ``r`` with two corners on its long sides."""
    if not 0 < t < 0.5:
        raise ValueError("t must lie in (0, 1/2)")
    c, s = _fold(r.theta)
    width = (1 - 2 * t) * r.long * c + r.short * s
    height = r.short * c - (1 - 2 * t) * r.long * s
    if height <= 0:
        raise NonPositiveCheck(
            f"inscribed rectangle degenerates: vertical side {height:.6g} <= 0 "
            f"(shape {r.shape:.6g}, theta {r.theta:.6g}, t {t})"
        )
    return Rectangle.axis(r.center, width, height)


def dyadic_parent(r: Rectangle) -> Rectangle:
    """Concentric rectangle with power-of-two sides, smallest containing ``r``."""
    if not r.is_axis_parallel:
        raise ValueError("dyadic parent is defined for axis-parallel rectangles")
    return Rectangle.axis(r.center, _dyadic_ceil(r.width), _dyadic_ceil(r.height))


def _dyadic_ceil(x: float) -> float:
    m, e = math.frexp(x)
    if m == 0.5:
        return x
    return math.ldexp(1.0, e)


def convex_hull(points: Iterable) -> ConvexPolygon:
    """Counterclockwise hull of a point set (monotone chain)."""
    pts = sorted({(float(x), float(y)) for x, y in points})
    if len(pts) < 3:
        return EMPTY
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return ConvexPolygon.from_points(lower[:-1] + upper[:-1])


def check_rect_inscribed(r: Rectangle, t: float) -> bool:
    """Whether ``check_rect(r, t)`` lies inside ``r``.

    The anchored corners are on ``r`` by construction; the other two stay
    inside iff ``sin(th) cos(th) / sigma <= t + (1 - 2t) sin(th)^2`` with
    ``th`` the angle folded into ``[0, pi/2]``.  This can fail for
    ``t < 1/4`` even when the inscribed rectangle is nondegenerate.
    """
    c, s = _fold(r.theta)
    return c * s / r.shape <= t + (1 - 2 * t) * s * s
