"""Closed convex primitives and the predicates used by the mesh counters.

A :class:`ConvexPrimitive` is the closed convex hull of 1 (point), 2 (segment)
or >= 3 (polygon, counterclockwise) vertices. A :class:`GeoSet` is a named
union of primitives. Coordinates are either all :class:`~boxdim.dyadic.Dyadic`
(exact mode) or all ``float`` (approx mode).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

from .dyadic import APPROX_TOL, Dyadic, Scalar, as_scalar
from .exceptions import EmptyInputError, ModeError, ValidationError

__all__ = [
    "Point",
    "ConvexPrimitive",
    "GeoSet",
    "convex_area",
    "total_area",
    "bounding_box",
    "convex_intersects",
    "point_in_convex",
    "convex_hull",
    "sat_overlap",
    "hull_axes",
    "clip_convex",
]


class Point(NamedTuple):
    x: Scalar
    y: Scalar


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _coerce_points(vertices):
    pts = []
    modes = set()
    for v in vertices:
        x, y = as_scalar(v[0]), as_scalar(v[1])
        modes.add(type(x) is float)
        modes.add(type(y) is float)
        pts.append(Point(x, y))
    if len(modes) > 1:
        raise ModeError("primitive mixes exact and approx coordinates")
    return tuple(pts), ("approx" if True in modes else "exact")


def _check_polygon(pts, tol):
    n = len(pts)
    for i in range(n):
        if pts[i] == pts[(i + 1) % n]:
            raise ValidationError(f"repeated consecutive vertex {pts[i]}")
    twice_area = 0
    wraps = 0
    for i in range(n):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
        turn = _cross(a, b, c)
        if turn < -tol:
            raise ValidationError("polygon is not convex and counterclockwise")
        if abs(turn) <= tol:
            # collinear vertex: allowed only when the walk does not double back
            if (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) < 0:
                raise ValidationError("polygon doubles back on itself")
        twice_area += b[0] * c[1] - c[0] * b[1]
        d0 = (b[0] - a[0], b[1] - a[1])
        d1 = (c[0] - b[0], c[1] - b[1])
        if not _upper(d0) and _upper(d1):
            wraps += 1
    if twice_area <= tol:
        raise ValidationError("polygon has zero or negative (clockwise) area")
    if wraps != 1:
        raise ValidationError("polygon winds more than once")


def _upper(d):
    return d[1] > 0 or (d[1] == 0 and d[0] > 0)


class ConvexPrimitive:
    """Closed convex hull of an ordered vertex list.

    Polygons must be counterclockwise with no repeated consecutive vertices;
    collinear vertices are accepted. Construction raises
    :class:`~boxdim.exceptions.ValidationError` on malformed input.
    """

    __slots__ = ("vertices", "mode")

    def __init__(self, vertices: Iterable, *, validate: bool = True):
        pts, mode = _coerce_points(vertices)
        if not pts:
            raise ValidationError("a primitive needs at least one vertex")
        if validate:
            if len(pts) == 2 and pts[0] == pts[1]:
                raise ValidationError("degenerate segment with equal endpoints")
            if len(pts) >= 3:
                _check_polygon(pts, APPROX_TOL if mode == "approx" else 0)
        self.vertices: Tuple[Point, ...] = pts
        self.mode: str = mode

    @classmethod
    def trusted(cls, vertices, mode="exact"):
        """Build without coercion or validation; for generators that construct
        well-formed hulls by design."""
        self = object.__new__(cls)
        self.vertices = tuple(vertices)
        self.mode = mode
        return self

    @property
    def kind(self):
        return {1: "point", 2: "segment"}.get(len(self.vertices), "polygon")

    def translated(self, dx, dy):
        return ConvexPrimitive.trusted(
            [Point(x + dx, y + dy) for x, y in self.vertices], self.mode)

    def to_approx(self):
        if self.mode == "approx":
            return self
        return ConvexPrimitive.trusted(
            [Point(float(x), float(y)) for x, y in self.vertices], "approx")

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, ConvexPrimitive):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"ConvexPrimitive({[(str(x), str(y)) for x, y in self.vertices]})"


@dataclass(frozen=True)
class GeoSet:
    """Union of closed convex primitives; an empty list is the empty set."""

    name: str
    primitives: Tuple[ConvexPrimitive, ...] = ()
    stage: Optional[int] = None
    kind: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        prims = tuple(p if isinstance(p, ConvexPrimitive) else ConvexPrimitive(p)
                      for p in self.primitives)
        object.__setattr__(self, "primitives", prims)
        if len({p.mode for p in prims}) > 1:
            raise ModeError(f"set {self.name!r} mixes exact and approx primitives")
        if self.stage is not None and self.stage < 0:
            raise ValidationError("stage must be nonnegative")

    @property
    def mode(self):
        return self.primitives[0].mode if self.primitives else "exact"

    def __len__(self):
        return len(self.primitives)

    def __iter__(self):
        return iter(self.primitives)

    def translated(self, dx, dy):
        return GeoSet(self.name, tuple(p.translated(dx, dy) for p in self.primitives),
                      self.stage, self.kind)

    def to_approx(self):
        return GeoSet(self.name, tuple(p.to_approx() for p in self.primitives),
                      self.stage, self.kind)

    def union(self, other, name=None):
        return GeoSet(name or f"{self.name}+{other.name}",
                      self.primitives + other.primitives, None, None)


def convex_area(p: ConvexPrimitive) -> Scalar:
    """Shoelace area of the closed hull; zero for points and segments."""
    v = p.vertices
    zero = 0.0 if p.mode == "approx" else Dyadic(0)
    if len(v) < 3:
        return zero
    twice = zero
    n = len(v)
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        twice = twice + (a.x * b.y - b.x * a.y)
    return twice / 2


def total_area(prims) -> Scalar:
    """Exact sum of :func:`convex_area` over ``prims`` (float sum in approx mode).

    Exact mode works on integers at one common power-of-two scale, which keeps
    large decompositions fast.
    """
    prims = list(prims)
    if not prims or prims[0].mode == "approx":
        return sum((convex_area(p) for p in prims), 0.0) if prims else Dyadic(0)
    e = max(c.exponent for p in prims for v in p.vertices for c in v)
    twice = 0
    for p in prims:
        v = p.vertices
        if len(v) < 3:
            continue
        pts = [(x.numerator << (e - x.exponent), y.numerator << (e - y.exponent)) for x, y in v]
        n = len(pts)
        for i in range(n):
            (x0, y0), (x1, y1) = pts[i], pts[(i + 1) % n]
            twice += x0 * y1 - x1 * y0
    return Dyadic(twice, 2 * e + 1)


def bounding_box(g) -> Tuple[Point, Point]:
    prims = g.primitives if isinstance(g, GeoSet) else g
    if not prims:
        raise EmptyInputError("bounding box of an empty set")
    xs = [v.x for p in prims for v in p.vertices]
    ys = [v.y for p in prims for v in p.vertices]
    return Point(min(xs), min(ys)), Point(max(xs), max(ys))


def hull_axes(vertices) -> list:
    """Candidate separating directions for a closed hull.

    Edge normals for polygons; normal and direction for a segment. The
    coordinate axes are always included, which also settles point/point pairs.
    """
    axes = [(1, 0), (0, 1)]
    n = len(vertices)
    if n == 2:
        (x0, y0), (x1, y1) = vertices
        axes.append((y0 - y1, x1 - x0))
        axes.append((x1 - x0, y1 - y0))
    elif n >= 3:
        for i in range(n):
            (x0, y0), (x1, y1) = vertices[i], vertices[(i + 1) % n]
            axes.append((y0 - y1, x1 - x0))
    return axes


def _project(vertices, axis):
    ax, ay = axis
    lo = hi = vertices[0][0] * ax + vertices[0][1] * ay
    for x, y in vertices[1:]:
        d = x * ax + y * ay
        if d < lo:
            lo = d
        elif d > hi:
            hi = d
    return lo, hi


def _normalize(axis):
    ax, ay = float(axis[0]), float(axis[1])
    norm = (ax * ax + ay * ay) ** 0.5
    return (ax / norm, ay / norm) if norm else None


def sat_overlap(verts_a, verts_b, axes, tol=0) -> bool:
    """True unless some axis in ``axes`` separates the two closed hulls.

    With ``tol > 0`` axes are normalized and projections within ``tol`` count
    as touching.
    """
    for axis in axes:
        if tol:
            axis = _normalize(axis)
            if axis is None:
                continue
        lo_a, hi_a = _project(verts_a, axis)
        lo_b, hi_b = _project(verts_b, axis)
        if hi_a < lo_b - tol or hi_b < lo_a - tol:
            return False
    return True


def convex_intersects(a: ConvexPrimitive, b: ConvexPrimitive) -> bool:
    """Whether the closed hulls of ``a`` and ``b`` share a point.

    Separating-axis test over the axes of both hulls. Exact for dyadic input;
    approx mode treats gaps up to ``APPROX_TOL`` as contact.
    """
    if a.mode != b.mode:
        raise ModeError("cannot intersect exact and approx primitives")
    axes = hull_axes(a.vertices) + hull_axes(b.vertices)[2:]
    tol = APPROX_TOL if a.mode == "approx" else 0
    return sat_overlap(a.vertices, b.vertices, axes, tol)


def point_in_convex(pt, p: ConvexPrimitive, tol=0) -> bool:
    """Closed membership of ``pt`` in the hull of ``p``."""
    v = p.vertices
    x, y = pt
    if len(v) == 1:
        return abs(v[0][0] - x) <= tol and abs(v[0][1] - y) <= tol
    if len(v) == 2:
        a, b = v
        if abs(_cross(a, b, pt)) > tol:
            return False
        return (min(a[0], b[0]) - tol <= x <= max(a[0], b[0]) + tol
                and min(a[1], b[1]) - tol <= y <= max(a[1], b[1]) + tol)
    n = len(v)
    return all(_cross(v[i], v[(i + 1) % n], pt) >= -tol for i in range(n))


def convex_hull(points: Sequence) -> ConvexPrimitive:
    """Monotone-chain hull of ``points`` as a point, segment or CCW polygon.

    Collinear boundary points are dropped.
    """
    pts, mode = _coerce_points(points)
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return ConvexPrimitive(pts)

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return ConvexPrimitive(hull)


def clip_convex(vertices, a, b, c) -> list:
    """Clip a convex hull to the closed half-plane ``a*x + b*y + c <= 0``.

    Returns a vertex list whose hull is the intersection; intersection points
    are computed with ``/`` so pass ``Fraction`` (exact) or ``float`` input.
    """
    n = len(vertices)
    vals = [a * x + b * y + c for x, y in vertices]
    out = []
    for i in range(n):
        p, fp = vertices[i], vals[i]
        q, fq = vertices[(i + 1) % n], vals[(i + 1) % n]
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t))
    dedup = []
    for p in out:
        if not dedup or tuple(p) != tuple(dedup[-1]):
            dedup.append(p)
    while len(dedup) > 1 and tuple(dedup[0]) == tuple(dedup[-1]):
        dedup.pop()
    return dedup
