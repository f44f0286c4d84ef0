"""Square and triangle delta-mesh counts of a :class:`~boxdim.geometry.GeoSet`.

The square mesh is the grid of cells ``[m*d, (m+1)*d] x [n*d, (n+1)*d]``
shifted by ``offset``. The triangle mesh splits every cell along one diagonal
(``ne``: lower-left to upper-right, ``nw``: upper-left to lower-right) into a
``lower`` and an ``upper`` right isoceles triangle.

Counting is exact when the set, ``delta`` and ``offset`` are all dyadic: every
coordinate is rescaled to an integer at one common power of two and all
predicates run on Python integers. Otherwise floats are used and contact
within ``APPROX_TOL`` counts.

Each primitive is scanned row by row. The x-extent of a convex primitive inside
a row band is an interval, so the touched cells of a row are one contiguous
index range; cells whose four corners lie in the primitive are interior and
need no further test. Only boundary cells of the triangle mesh (and of the
half-open mode) go through an explicit intersection test.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .dyadic import APPROX_TOL, Dyadic, Scalar, as_scalar, format_scalar
from .exceptions import EmptyInputError, ModeError, ParseError, ValidationError
from .geometry import GeoSet, Point, clip_convex, hull_axes, point_in_convex

__all__ = [
    "MeshSpec",
    "CellKey",
    "CountRecord",
    "enumerate_candidate_cells",
    "touched_cells",
    "count_square_mesh",
    "count_triangle_mesh",
    "count_mesh",
    "sampling_oracle_count",
    "format_delta",
    "write_counts_csv",
    "read_counts_csv",
    "counts_to_csv",
    "counts_from_csv",
]

MESHES = ("square", "triangle")
CELL_MODES = ("closed", "half-open")
DIAGONALS = ("ne", "nw")
LOWER, UPPER = "lower", "upper"


@dataclass(frozen=True)
class MeshSpec:
    delta: Scalar
    offset: Point = Point(Dyadic(0), Dyadic(0))
    cell_mode: str = "closed"
    diagonal: str = "ne"

    def __post_init__(self):
        delta = as_scalar(self.delta)
        if not delta > 0:
            raise ValidationError(f"delta must be positive, got {self.delta}")
        offset = Point(as_scalar(self.offset[0]), as_scalar(self.offset[1]))
        if self.cell_mode not in CELL_MODES:
            raise ValidationError(f"cell_mode must be one of {CELL_MODES}")
        if self.diagonal not in DIAGONALS:
            raise ValidationError(f"diagonal must be one of {DIAGONALS}")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "offset", offset)

    @property
    def is_dyadic(self):
        return all(isinstance(v, Dyadic) for v in (self.delta, *self.offset))


class CellKey(NamedTuple):
    m: int
    n: int
    half: Optional[str] = None


@dataclass(frozen=True)
class CountRecord:
    mesh: str
    delta: Scalar
    count: int


# ---------------------------------------------------------------------------
# coordinate frames

@dataclass(frozen=True)
class _Frame:
    exact: bool
    step: object        # grid spacing in frame units (int or float)
    tol: float
    polys: tuple        # per primitive: tuple of (x, y) in frame units


def _resolve_mode(g: GeoSet, spec: MeshSpec, mode: Optional[str]) -> bool:
    dyadic = g.mode == "exact" and spec.is_dyadic
    if mode is None or mode == "auto":
        return dyadic
    if mode == "exact":
        if not dyadic:
            raise ModeError("exact counting needs a dyadic set, delta and offset")
        return True
    if mode == "approx":
        return False
    raise ValidationError(f"unknown mode {mode!r}")


def _frame(g: GeoSet, spec: MeshSpec, mode: Optional[str]) -> _Frame:
    exact = _resolve_mode(g, spec, mode)
    ox, oy = spec.offset
    if exact:
        e = max([spec.delta.exponent, ox.exponent, oy.exponent]
                + [c.exponent for p in g.primitives for v in p.vertices for c in v])
        sx, sy = ox.scaled(e), oy.scaled(e)
        polys = tuple(
            tuple((x.scaled(e) - sx, y.scaled(e) - sy) for x, y in p.vertices)
            for p in g.primitives)
        return _Frame(True, spec.delta.scaled(e), 0, polys)
    fx, fy = float(ox), float(oy)
    polys = tuple(tuple((float(x) - fx, float(y) - fy) for x, y in p.vertices)
                  for p in g.primitives)
    return _Frame(False, float(spec.delta), APPROX_TOL, polys)


# Exact rationals travel as (num, den) with den > 0; approx values as floats.
# "out" rounding widens ranges for closed contact, "in" rounding shrinks them
# for the interior test. They coincide in exact mode.

def _x_at(frame, xa, ya, xb, yb, c):
    if frame.exact:
        den = yb - ya
        num = xa * den + (c - ya) * (xb - xa)
        return (num, den) if den > 0 else (-num, -den)
    return xa + (c - ya) * (xb - xa) / (yb - ya)


def _floor(frame, x, widen):
    if frame.exact:
        num, den = x
        return num // (den * frame.step)
    return math.floor((x + (frame.tol if widen else -frame.tol)) / frame.step)


def _ceil(frame, x, widen):
    if frame.exact:
        num, den = x
        return -((-num) // (den * frame.step))
    return math.ceil((x - (frame.tol if widen else -frame.tol)) / frame.step)


def _line_xs(frame, verts, c):
    """x-coordinates whose hull is the primitive's section on ``y = c``."""
    tol = frame.tol
    xs = []
    for x, y in verts:
        if abs(y - c) <= tol:
            xs.append((x, 1) if frame.exact else x)
    n = len(verts)
    for i in range(n if n > 2 else n - 1):
        xa, ya = verts[i]
        xb, yb = verts[(i + 1) % n]
        if (ya < c < yb) or (yb < c < ya):
            xs.append(_x_at(frame, xa, ya, xb, yb, c))
    return xs


def _band_xs(frame, verts, y0, y1, sect0, sect1):
    tol = frame.tol
    xs = list(sect0) + list(sect1)
    for x, y in verts:
        if y0 - tol <= y <= y1 + tol:
            xs.append((x, 1) if frame.exact else x)
    return xs


def _rows(frame, verts):
    """Yield ``(n, m_lo, m_hi, i_lo, i_hi)`` per touched row.

    ``[m_lo, m_hi]`` are the closed cells touching the primitive and
    ``[i_lo, i_hi]`` (possibly empty) the cells inside it.
    """
    step = frame.step
    ys = [y for _, y in verts]
    ylo = (min(ys), 1) if frame.exact else min(ys)
    yhi = (max(ys), 1) if frame.exact else max(ys)
    n_lo = _ceil(frame, ylo, True) - 1
    n_hi = _floor(frame, yhi, True)
    solid = len(verts) >= 3
    below = _line_xs(frame, verts, n_lo * step)
    for n in range(n_lo, n_hi + 1):
        y0 = n * step
        y1 = y0 + step
        above = _line_xs(frame, verts, y1)
        xs = _band_xs(frame, verts, y0, y1, below, above)
        if xs:
            m_lo = min(_ceil(frame, x, True) for x in xs) - 1
            m_hi = max(_floor(frame, x, True) for x in xs)
            i_lo, i_hi = 0, -1
            if solid and below and above:
                i_lo = max(_ceil(frame, x, False) for x in (min(below, key=_key(frame)),
                                                            min(above, key=_key(frame))))
                i_hi = min(_floor(frame, x, False) for x in (max(below, key=_key(frame)),
                                                             max(above, key=_key(frame)))) - 1
            yield n, m_lo, m_hi, i_lo, i_hi
        below = above


def _key(frame):
    if frame.exact:
        return lambda q: Fraction(q[0], q[1])
    return None


# ---------------------------------------------------------------------------
# per-cell predicates for boundary cells

def _cell_triangles(m, n, step, diagonal):
    x0, y0 = m * step, n * step
    x1, y1 = x0 + step, y0 + step
    if diagonal == "ne":
        return ((x0, y0), (x1, y0), (x1, y1)), ((x0, y0), (x1, y1), (x0, y1))
    return ((x0, y0), (x1, y0), (x0, y1)), ((x1, y0), (x1, y1), (x0, y1))


def _cell_constraints(m, n, step, diagonal, half):
    """Half-open region as ``(closed, strict)`` lists of ``(a, b, c)`` with
    ``a*x + b*y + c <= 0`` (closed) or ``< 0`` (strict)."""
    x0, y0 = m * step, n * step
    x1, y1 = x0 + step, y0 + step
    closed = [(-1, 0, x0), (1, 0, -x1), (0, -1, y0), (0, 1, -y1)]
    strict = [(1, 0, -x1), (0, 1, -y1)]
    if half is None:
        return closed, strict
    if diagonal == "ne":
        # diagonal y - y0 = x - x0; points on it belong to the upper half
        diag = (-1, 1, x0 - y0)
        if half == LOWER:
            return closed + [diag], strict + [diag]
        return closed + [(1, -1, y0 - x0)], strict
    # diagonal (x - x0) + (y - y0) = step
    diag = (1, 1, -x0 - y0 - step)
    if half == LOWER:
        return closed + [diag], strict + [diag]
    return closed + [(-1, -1, x0 + y0 + step)], strict


def _half_open_hits(frame, verts, constraints):
    closed, strict = constraints
    tol = frame.tol
    pts = [(Fraction(x), Fraction(y)) for x, y in verts] if frame.exact else list(verts)
    widened = pts
    for a, b, c in closed:
        widened = clip_convex(widened, a, b, c - tol)
        if not widened:
            return False
    if tol:
        # judge strict sides on the unwidened piece when there is one, so the
        # tolerance sliver outside a closed side cannot fake a penetration
        for a, b, c in closed:
            pts = clip_convex(pts, a, b, c)
            if not pts:
                break
        pts = pts or widened
    else:
        pts = widened
    for a, b, c in strict:
        if not any(a * x + b * y + c < -tol for x, y in pts):
            return False
    return True


class _Prepared:
    """SAT data of one primitive against cell triangles."""

    def __init__(self, frame, verts, diagonal):
        self.verts = verts
        self.tol = frame.tol
        hyp = (1, -1) if diagonal == "ne" else (1, 1)
        axes = hull_axes(verts) + [hyp]
        if not frame.exact:
            axes = [(ax / n, ay / n) for ax, ay in axes
                    for n in [math.hypot(ax, ay)] if n]
        self.axes = axes
        self.proj = []
        for ax, ay in axes:
            ds = [x * ax + y * ay for x, y in verts]
            self.proj.append((min(ds), max(ds)))

    def hits(self, tri):
        tol = self.tol
        for (ax, ay), (lo, hi) in zip(self.axes, self.proj):
            d0 = tri[0][0] * ax + tri[0][1] * ay
            d1 = tri[1][0] * ax + tri[1][1] * ay
            d2 = tri[2][0] * ax + tri[2][1] * ay
            if max(d0, d1, d2) < lo - tol or min(d0, d1, d2) > hi + tol:
                return False
        return True


def _scan(frame: _Frame, polys: Sequence, mesh: str, cell_mode: str, diagonal: str) -> set:
    step = frame.step
    keys = set()
    halves = (0, 1)
    for verts in polys:
        prepared = _Prepared(frame, verts, diagonal) if mesh == "triangle" else None
        for n, m_lo, m_hi, i_lo, i_hi in _rows(frame, verts):
            if i_lo <= i_hi:
                inner = range(i_lo, i_hi + 1)
                if mesh == "square":
                    keys.update((m, n) for m in inner)
                else:
                    keys.update((m, n, h) for m in inner for h in halves)
                border = [m for m in range(m_lo, m_hi + 1) if not i_lo <= m <= i_hi]
            else:
                border = range(m_lo, m_hi + 1)
            for m in border:
                if mesh == "square":
                    if cell_mode == "closed" or _half_open_hits(
                            frame, verts, _cell_constraints(m, n, step, diagonal, None)):
                        keys.add((m, n))
                    continue
                for h, tri in zip(halves, _cell_triangles(m, n, step, diagonal)):
                    if (m, n, h) in keys:
                        continue
                    if cell_mode == "closed":
                        hit = prepared.hits(tri)
                    else:
                        hit = _half_open_hits(frame, verts, _cell_constraints(
                            m, n, step, diagonal, LOWER if h == 0 else UPPER))
                    if hit:
                        keys.add((m, n, h))
    return keys


def _chunks(seq, k):
    k = max(1, min(k, len(seq)))
    size = -(-len(seq) // k)
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def _collect(g: GeoSet, spec: MeshSpec, mesh: str, mode=None, n_jobs=None) -> set:
    if mesh not in MESHES:
        raise ValidationError(f"mesh must be one of {MESHES}")
    if not g.primitives:
        raise EmptyInputError(f"set {g.name!r} is empty")
    frame = _frame(g, spec, mode)
    if not n_jobs or n_jobs == 1 or len(frame.polys) < 2:
        return _scan(frame, frame.polys, mesh, spec.cell_mode, spec.diagonal)
    from joblib import Parallel, delayed, effective_n_jobs

    parts = _chunks(list(frame.polys), effective_n_jobs(n_jobs))
    results = Parallel(n_jobs=n_jobs)(
        delayed(_scan)(frame, part, mesh, spec.cell_mode, spec.diagonal) for part in parts)
    keys = set()
    for r in results:
        keys |= r
    return keys


def touched_cells(g: GeoSet, spec: MeshSpec, mesh: str = "square", *, mode=None,
                  n_jobs=None) -> List[CellKey]:
    """Sorted keys of all cells (or cell halves) meeting ``g``."""
    keys = _collect(g, spec, mesh, mode, n_jobs)
    if mesh == "square":
        return sorted(CellKey(m, n) for m, n in keys)
    return sorted(CellKey(m, n, LOWER if h == 0 else UPPER) for m, n, h in keys)


def count_square_mesh(g: GeoSet, spec: MeshSpec, *, mode=None, n_jobs=None) -> CountRecord:
    """Number of square mesh cells meeting ``g`` (N_delta)."""
    return CountRecord("square", spec.delta, len(_collect(g, spec, "square", mode, n_jobs)))


def count_triangle_mesh(g: GeoSet, spec: MeshSpec, *, mode=None, n_jobs=None) -> CountRecord:
    """Number of triangle mesh halves meeting ``g`` (T_delta)."""
    return CountRecord("triangle", spec.delta, len(_collect(g, spec, "triangle", mode, n_jobs)))


def count_mesh(g: GeoSet, spec: MeshSpec, mesh: str, **kwargs) -> CountRecord:
    if mesh == "square":
        return count_square_mesh(g, spec, **kwargs)
    if mesh == "triangle":
        return count_triangle_mesh(g, spec, **kwargs)
    raise ValidationError(f"mesh must be one of {MESHES}")


def enumerate_candidate_cells(bbox: Tuple[Point, Point], spec: MeshSpec) -> Iterator[CellKey]:
    """Every cell whose extent meets the box ``bbox`` (row-major order).

    Closed cells include those that only touch the box boundary.
    """
    (x0, y0), (x1, y1) = bbox
    d, (ox, oy) = spec.delta, spec.offset

    def index_range(lo, hi, origin):
        if isinstance(d, Dyadic) and isinstance(lo, Dyadic) and isinstance(origin, Dyadic):
            a = (lo - origin).to_fraction() / d.to_fraction()
            b = (hi - origin).to_fraction() / d.to_fraction()
            if spec.cell_mode == "closed":
                return math.ceil(a) - 1, math.floor(b)
            return math.floor(a), math.floor(b)
        a = (float(lo) - float(origin)) / float(d)
        b = (float(hi) - float(origin)) / float(d)
        tol = APPROX_TOL / float(d)
        if spec.cell_mode == "closed":
            return math.ceil(a - tol) - 1, math.floor(b + tol)
        return math.floor(a + tol), math.floor(b + tol)

    m_lo, m_hi = index_range(x0, x1, ox)
    n_lo, n_hi = index_range(y0, y1, oy)
    for n in range(n_lo, n_hi + 1):
        for m in range(m_lo, m_hi + 1):
            yield CellKey(m, n)


# ---------------------------------------------------------------------------
# independent sampling oracle

def _sample_points(prim, density):
    v = [(Fraction(x.to_fraction() if isinstance(x, Dyadic) else x),
          Fraction(y.to_fraction() if isinstance(y, Dyadic) else y)) for x, y in prim.vertices]
    pts = set(v)
    n = len(v)
    for i in range(n if n > 2 else n - 1):
        (xa, ya), (xb, yb) = v[i], v[(i + 1) % n]
        steps = max(1, math.ceil(max(abs(xb - xa), abs(yb - ya)) * density))
        for s in range(1, steps):
            t = Fraction(s, steps)
            pts.add((xa + (xb - xa) * t, ya + (yb - ya) * t))
    if n >= 3:
        xs = [p[0] for p in v]
        ys = [p[1] for p in v]
        for i in range(math.ceil(min(xs) * density), math.floor(max(xs) * density) + 1):
            for j in range(math.ceil(min(ys) * density), math.floor(max(ys) * density) + 1):
                q = (Fraction(i, density), Fraction(j, density))
                if point_in_convex(q, _FracPrim(v)):
                    pts.add(q)
    return pts


class _FracPrim:
    def __init__(self, v):
        self.vertices = v


def _owners(u):
    """Closed-cell indices containing coordinate ``u`` (in cell units)."""
    f = math.floor(u)
    return (f - 1, f) if u == f else (f,)


def sampling_oracle_count(g: GeoSet, spec: MeshSpec, density: int, mesh: str = "square"
                          ) -> CountRecord:
    """Lower bound on the mesh count from a lattice sample of ``g``.

    Samples vertices, points along every edge and lattice points of spacing
    ``1/density`` inside polygons, then counts the distinct cells (or halves)
    containing a sample, in exact rational arithmetic.
    """
    if density < 1:
        raise ValidationError("density must be >= 1")
    if mesh not in MESHES:
        raise ValidationError(f"mesh must be one of {MESHES}")
    if not g.primitives:
        raise EmptyInputError(f"set {g.name!r} is empty")
    frac = lambda s: s.to_fraction() if isinstance(s, Dyadic) else Fraction(s)  # noqa: E731
    d = frac(spec.delta)
    ox, oy = frac(spec.offset[0]), frac(spec.offset[1])
    closed = spec.cell_mode == "closed"
    keys = set()
    for prim in g.primitives:
        for x, y in _sample_points(prim, density):
            u, w = (x - ox) / d, (y - oy) / d
            ms = _owners(u) if closed else (math.floor(u),)
            ns = _owners(w) if closed else (math.floor(w),)
            for m in ms:
                for n in ns:
                    if mesh == "square":
                        keys.add((m, n))
                        continue
                    a, b = u - m, w - n  # local coordinates in [0, 1]
                    s = b - a if spec.diagonal == "ne" else a + b - 1
                    if closed:
                        if s <= 0:
                            keys.add((m, n, 0))
                        if s >= 0:
                            keys.add((m, n, 1))
                    else:
                        keys.add((m, n, 0 if s < 0 else 1))
    return CountRecord(mesh, spec.delta, len(keys))


# ---------------------------------------------------------------------------
# CSV

def format_delta(delta) -> str:
    return "%.17g" % float(delta)


def counts_to_csv(records: Sequence[CountRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["mesh", "delta", "count", "delta_exact"])
    for r in records:
        exact = format_scalar(r.delta) if isinstance(r.delta, Dyadic) else ""
        w.writerow([r.mesh, format_delta(r.delta), r.count, exact])
    return buf.getvalue()


def counts_from_csv(text: str) -> List[CountRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty counts file", 1)
    header = rows[0]
    if header[:3] != ["mesh", "delta", "count"]:
        raise ParseError("expected header 'mesh,delta,count[,delta_exact]'", 1)
    has_exact = len(header) > 3 and header[3] == "delta_exact"
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", lineno)
        mesh = row[0]
        if mesh not in MESHES:
            raise ParseError(f"unknown mesh {mesh!r}", lineno)
        try:
            count = int(row[2])
            if has_exact and row[3]:
                delta = as_scalar(row[3])
            else:
                delta = float(row[1])
        except (ValueError, TypeError) as exc:
            raise ParseError(str(exc), lineno) from None
        out.append(CountRecord(mesh, delta, count))
    return out


def write_counts_csv(records: Sequence[CountRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(counts_to_csv(records))


def read_counts_csv(path) -> List[CountRecord]:
    with open(path, encoding="utf-8") as fh:
        return counts_from_csv(fh.read())
