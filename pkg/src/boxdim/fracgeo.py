"""Reader and writer for the line-oriented ``fracgeo v1`` geometry format.

::

    fracgeo v1
    set bradley stage 1
    poly 4 1/2^1 0 1 1/2^1 1/2^1 1 0 1/2^1
    seg 0 0 1 0
    point 1/2^2 1/2^2

Coordinates are ``<int>``, ``<int>/2^<uint>`` or decimal literals. A file
containing any decimal literal is read entirely in approx mode.
"""
from __future__ import annotations

import io
import os

from .dyadic import format_scalar, parse_scalar
from .exceptions import ParseError, ValidationError
from .geometry import ConvexPrimitive, GeoSet, Point

__all__ = ["read_fracgeo", "write_fracgeo", "loads", "dumps"]

MAGIC = "fracgeo v1"


def loads(text: str) -> GeoSet:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ParseError(f"expected header {MAGIC!r}", 1)
    if len(lines) < 2:
        raise ParseError("missing 'set' line", 2)
    head = lines[1].split()
    if len(head) != 4 or head[0] != "set" or head[2] != "stage":
        raise ParseError("expected 'set <name> stage <k|->'", 2)
    name = head[1]
    if head[3] == "-":
        stage = None
    else:
        try:
            stage = int(head[3])
        except ValueError:
            raise ParseError(f"bad stage {head[3]!r}", 2) from None
        if stage < 0:
            raise ParseError("stage must be nonnegative", 2)

    raw = []
    for lineno, line in enumerate(lines[2:], start=3):
        tok = line.split()
        if not tok:
            continue
        op, args = tok[0], tok[1:]
        if op == "point":
            expect = 2
        elif op == "seg":
            expect = 4
        elif op == "poly":
            if not args:
                raise ParseError("poly needs a vertex count", lineno)
            try:
                nv = int(args[0])
            except ValueError:
                raise ParseError(f"bad vertex count {args[0]!r}", lineno) from None
            if nv < 3:
                raise ParseError("poly needs at least 3 vertices", lineno)
            args = args[1:]
            expect = 2 * nv
        else:
            raise ParseError(f"unknown directive {op!r}", lineno)
        if len(args) != expect:
            raise ParseError(f"{op} expects {expect} coordinates, got {len(args)}", lineno)
        coords = [parse_scalar(a, lineno) for a in args]
        raw.append((lineno, coords))

    approx = any(isinstance(c, float) for _, coords in raw for c in coords)
    prims = []
    for lineno, coords in raw:
        if approx:
            coords = [float(c) for c in coords]
        pts = [Point(coords[i], coords[i + 1]) for i in range(0, len(coords), 2)]
        try:
            prims.append(ConvexPrimitive(pts))
        except ValidationError as exc:
            raise ParseError(str(exc), lineno) from None
    return GeoSet(name, tuple(prims), stage, kind=name)


def dumps(g: GeoSet) -> str:
    out = io.StringIO()
    out.write(MAGIC + "\n")
    stage = "-" if g.stage is None else str(g.stage)
    name = g.name.replace(" ", "_") or "unnamed"
    out.write(f"set {name} stage {stage}\n")
    for p in g.primitives:
        coords = " ".join(f"{format_scalar(x)} {format_scalar(y)}" for x, y in p.vertices)
        n = len(p.vertices)
        if n == 1:
            out.write(f"point {coords}\n")
        elif n == 2:
            out.write(f"seg {coords}\n")
        else:
            out.write(f"poly {n} {coords}\n")
    return out.getvalue()


def read_fracgeo(path) -> GeoSet:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write_fracgeo(g: GeoSet, path) -> None:
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(g))
