"""Prefractal generators: the Bradley spiral and calibration fractals.

The spiral starts from the closed unit square ``N_0``. Stage ``k`` inscribes
``N_k`` in ``N_{k-1}`` through its edge midpoints, which leaves four right
isoceles corner triangles; the one pointing in ``removal_direction(k)`` is
removed and the other three are kept. The removed corner turns 45 degrees
clockwise per stage, starting at the upper right.

Stage ``k`` is represented as the union of the closed primitives ``N_k`` and
all kept triangles. Closed union drops exactly the boundary pieces that the
construction removes: the leg a removed triangle shares with its predecessor
touches no kept primitive, while kept hypotenuses lie on the closed ``N_k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .dyadic import Dyadic, format_scalar
from .exceptions import DomainError, ResourceError, ValidationError
from .geometry import ConvexPrimitive, GeoSet, Point

__all__ = [
    "DEPTH_CAP",
    "COMPASS",
    "StageTrace",
    "PrefractalSpec",
    "unit_square",
    "inscribed_square",
    "removal_direction",
    "bradley_stage",
    "construction_decomposition",
    "reference_prefractal",
    "format_trace",
    "spiral_depth_for",
    "finest_scale",
]

DEPTH_CAP = 24

#: compass tags in clockwise order starting at the first removed corner
COMPASS = ("NE", "E", "SE", "S", "SW", "W", "NW", "N")

_SIGN_TAGS = {
    (1, 1): "NE", (1, 0): "E", (1, -1): "SE", (0, -1): "S",
    (-1, -1): "SW", (-1, 0): "W", (-1, 1): "NW", (0, 1): "N",
}

_KINDS = ("bradley", "sierpinski", "koch", "cantor-dust", "filled-square", "segment")


def _sign(v):
    return (v > 0) - (v < 0)


def _mid(p, q):
    return Point((p.x + q.x).half(), (p.y + q.y).half())


def unit_square() -> ConvexPrimitive:
    one, zero = Dyadic(1), Dyadic(0)
    return ConvexPrimitive.trusted(
        [Point(zero, zero), Point(one, zero), Point(one, one), Point(zero, one)])


def _sqlen(p, q):
    dx, dy = q.x - p.x, q.y - p.y
    return dx * dx + dy * dy


def _check_square(sq: ConvexPrimitive):
    v = sq.vertices
    if len(v) != 4:
        raise ValidationError("a square needs exactly 4 vertices")
    sides = {_sqlen(v[i], v[(i + 1) % 4]) for i in range(4)}
    if len(sides) != 1 or not next(iter(sides)):
        raise ValidationError("sides of the square differ in length")
    for i in range(4):
        a, b, c = v[i - 1], v[i], v[(i + 1) % 4]
        dot = (a.x - b.x) * (c.x - b.x) + (a.y - b.y) * (c.y - b.y)
        if dot != 0:
            raise ValidationError("square corner is not a right angle")


def inscribed_square(sq: ConvexPrimitive) -> ConvexPrimitive:
    """Square through the four edge midpoints of ``sq`` (half its area)."""
    _check_square(sq)
    v = sq.vertices
    return ConvexPrimitive.trusted([_mid(v[i], v[(i + 1) % 4]) for i in range(4)], sq.mode)


def removal_direction(k: int) -> str:
    if k < 1:
        raise DomainError("stage index must be >= 1")
    return COMPASS[(k - 1) % 8]


def _direction_tag(v, center):
    return _SIGN_TAGS[(_sign(v.x - center.x), _sign(v.y - center.y))]


@dataclass(frozen=True)
class StageTrace:
    k: int
    square_before: ConvexPrimitive
    square_after: ConvexPrimitive
    removed_triangle: ConvexPrimitive
    kept_triangles: Tuple[ConvexPrimitive, ConvexPrimitive, ConvexPrimitive]
    removed_direction: str
    removed_boundary: Optional[ConvexPrimitive]
    kept_boundary: Tuple[ConvexPrimitive, ...]


def _corner_triangles(sq: ConvexPrimitive):
    """Inscribed square and the four corner triangles, right angle first."""
    v = sq.vertices
    mids = [_mid(v[i], v[(i + 1) % 4]) for i in range(4)]
    corners = [ConvexPrimitive.trusted([v[i], mids[i], mids[i - 1]]) for i in range(4)]
    return ConvexPrimitive.trusted(mids), corners


def _check_cap(k, cap):
    if cap is None:
        cap = DEPTH_CAP
    if k > cap:
        raise ResourceError(f"depth {k} exceeds cap {cap}")


def bradley_stage(k: int, cap: Optional[int] = None) -> Tuple[GeoSet, List[StageTrace]]:
    """Stage ``k`` of the spiral as ``N_k`` plus ``3k`` kept triangles."""
    if k < 0:
        raise DomainError("depth must be nonnegative")
    _check_cap(k, cap)
    square = unit_square()
    kept: List[ConvexPrimitive] = []
    traces: List[StageTrace] = []
    prev_hyp = None
    for j in range(1, k + 1):
        v = square.vertices
        center = _mid(v[0], v[2])
        inner, corners = _corner_triangles(square)
        want = removal_direction(j)
        idx = next(i for i in range(4) if _direction_tag(v[i], center) == want)
        removed = corners[idx]
        stage_kept = tuple(corners[(idx + s) % 4] for s in (1, 2, 3))

        corner, leg_a, leg_b = removed.vertices
        hyp = ConvexPrimitive.trusted([leg_a, leg_b])
        if prev_hyp is None:
            removed_boundary = None
            kept_boundary = (hyp,)
        else:
            shared_mid = _mid(*prev_hyp.vertices)
            if shared_mid == leg_a:
                removed_leg, other_leg = leg_a, leg_b
            elif shared_mid == leg_b:
                removed_leg, other_leg = leg_b, leg_a
            else:  # pragma: no cover - construction invariant
                raise AssertionError("removed triangle does not touch its predecessor")
            removed_boundary = ConvexPrimitive.trusted([corner, removed_leg])
            kept_boundary = (hyp, ConvexPrimitive.trusted([corner, other_leg]))

        traces.append(StageTrace(j, square, inner, removed, stage_kept, want,
                                 removed_boundary, kept_boundary))
        kept.extend(stage_kept)
        prev_hyp = hyp
        square = inner
    return GeoSet("bradley", (square, *kept), k, kind="bradley"), traces


def _to_int(p, e):
    return p.x.numerator << (e - p.x.exponent), p.y.numerator << (e - p.y.exponent)


def _bisect(tri):
    (ax, ay), (bx, by), (cx, cy) = tri
    m = ((bx + cx) >> 1, (by + cy) >> 1)
    return (m, (ax, ay), (bx, by)), (m, (cx, cy), (ax, ay))


def construction_decomposition(k: int, cap: Optional[int] = None) -> List[ConvexPrimitive]:
    """Cover of stage ``k`` by ``3*2**k + 1`` right isoceles triangles.

    ``N_k`` is cut along both diagonals into 4 triangles; each kept triangle
    of stage ``j`` is halved through its right angle ``k - j`` times. All
    pieces have squared leg length ``2**-(k+1)`` and disjoint interiors.
    """
    if k < 1:
        raise DomainError("decomposition needs k >= 1")
    _check_cap(k, cap)
    stage, traces = bradley_stage(k, cap)
    # integer coordinates at scale 2**e; bisection midpoints stay integral
    e = k + 3
    nk = [_to_int(p, e) for p in stage.primitives[0].vertices]
    center = ((nk[0][0] + nk[2][0]) >> 1, (nk[0][1] + nk[2][1]) >> 1)
    out = [(center, nk[i], nk[(i + 1) % 4]) for i in range(4)]
    for tr in traces:
        level = [tuple(_to_int(p, e) for p in t.vertices) for t in tr.kept_triangles]
        for _ in range(k - tr.k):
            level = [half for tri in level for half in _bisect(tri)]
        out.extend(level)
    cache = {}

    def point(xy):
        pt = cache.get(xy)
        if pt is None:
            pt = cache[xy] = Point(Dyadic._make(xy[0], e), Dyadic._make(xy[1], e))
        return pt

    return [ConvexPrimitive.trusted([point(v) for v in t]) for t in out]


@dataclass(frozen=True)
class PrefractalSpec:
    kind: str
    depth: int = 0
    cap: int = DEPTH_CAP

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"unknown fractal kind {self.kind!r}; expected one of {_KINDS}")
        if self.depth < 0:
            raise ValidationError("depth must be nonnegative")
        if self.depth > self.cap:
            raise ResourceError(f"depth {self.depth} exceeds cap {self.cap}")


def _sierpinski(depth):
    zero, one = Dyadic(0), Dyadic(1)
    tris = [(Point(zero, zero), Point(one, zero), Point(zero, one))]
    for _ in range(depth):
        nxt = []
        for a, b, c in tris:
            ab, bc, ca = _mid(a, b), _mid(b, c), _mid(c, a)
            nxt.extend([(a, ab, ca), (ab, b, bc), (ca, bc, c)])
        tris = nxt
    return [ConvexPrimitive.trusted(t) for t in tris]


def _koch(depth):
    segs = [((0.0, 0.0), (1.0, 0.0))]
    c, s = 0.5, math.sqrt(3.0) / 2.0
    for _ in range(depth):
        nxt = []
        for (x0, y0), (x1, y1) in segs:
            dx, dy = (x1 - x0) / 3.0, (y1 - y0) / 3.0
            a = (x0 + dx, y0 + dy)
            b = (x0 + 2 * dx, y0 + 2 * dy)
            peak = (a[0] + c * dx - s * dy, a[1] + s * dx + c * dy)
            nxt.extend([((x0, y0), a), (a, peak), (peak, b), (b, (x1, y1))])
        segs = nxt
    return [ConvexPrimitive.trusted([Point(*p), Point(*q)], "approx") for p, q in segs]


def _cantor_dust(depth):
    intervals = [(0, 1)]  # numerators over 3**depth
    for level in range(depth):
        nxt = []
        for lo, hi in intervals:
            lo, hi = 3 * lo, 3 * hi
            third = (hi - lo) // 3
            nxt.extend([(lo, lo + third), (hi - third, hi)])
        intervals = nxt
    scale = float(3 ** depth)
    prims = []
    for ylo, yhi in intervals:
        for xlo, xhi in intervals:
            x0, x1, y0, y1 = xlo / scale, xhi / scale, ylo / scale, yhi / scale
            prims.append(ConvexPrimitive.trusted(
                [Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)], "approx"))
    return prims


def reference_prefractal(spec: PrefractalSpec) -> GeoSet:
    """Calibration sets with known dimension (plus the spiral itself)."""
    kind, depth = spec.kind, spec.depth
    if kind == "bradley":
        return bradley_stage(depth, spec.cap)[0]
    if kind == "sierpinski":
        prims = _sierpinski(depth)
    elif kind == "koch":
        prims = _koch(depth)
    elif kind == "cantor-dust":
        prims = _cantor_dust(depth)
    elif kind == "filled-square":
        return GeoSet("filled-square", (unit_square(),), None, kind=kind)
    else:
        zero, one = Dyadic(0), Dyadic(1)
        return GeoSet("segment", (ConvexPrimitive.trusted([Point(zero, zero), Point(one, zero)]),),
                      None, kind=kind)
    return GeoSet(kind, tuple(prims), depth, kind=kind)


def spiral_depth_for(delta) -> int:
    """Smallest stage whose triangle legs ``2**(-(k+1)/2)`` are at most ``delta/2``."""
    delta = float(delta)
    if delta <= 0:
        raise ValidationError("delta must be positive")
    k = 0
    while 2.0 ** (-(k + 1) / 2) > delta / 2:
        k += 1
    return k


def finest_scale(g: GeoSet) -> Optional[float]:
    """Feature size below which a generated prefractal no longer resolves its
    limit set; ``None`` for sets of unknown origin or without stage."""
    kind, d = g.kind, g.stage
    if d is None:
        return None
    if kind == "bradley":
        return 2.0 * 2.0 ** (-(d + 1) / 2)
    if kind == "sierpinski":
        return 2.0 ** -d
    if kind in ("koch", "cantor-dust"):
        return 3.0 ** -d
    return None


def _fmt_prim(p):
    return " ".join(f"({format_scalar(x)},{format_scalar(y)})" for x, y in p.vertices)


def format_trace(traces: List[StageTrace]) -> str:
    """Plain-text trace report, one block per stage."""
    lines = []
    for t in traces:
        lines.append(f"stage {t.k}")
        lines.append(f"  direction {t.removed_direction}")
        lines.append(f"  square_before {_fmt_prim(t.square_before)}")
        lines.append(f"  square_after {_fmt_prim(t.square_after)}")
        lines.append(f"  removed_triangle {_fmt_prim(t.removed_triangle)}")
        for kt in t.kept_triangles:
            lines.append(f"  kept_triangle {_fmt_prim(kt)}")
        rb = "-" if t.removed_boundary is None else _fmt_prim(t.removed_boundary)
        lines.append(f"  removed_boundary {rb}")
        for kb in t.kept_boundary:
            lines.append(f"  kept_boundary {_fmt_prim(kb)}")
        lines.append("")
    return "\n".join(lines)
