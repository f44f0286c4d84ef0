"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

import os
from typing import List, Sequence

from .dyadic import Dyadic, Scalar, as_scalar
from .exceptions import EmptyInputError, ValidationError
from .geometry import ConvexPrimitive, GeoSet, Point

__all__ = ["check_geoset", "check_geosets", "check_deltas", "check_choice", "check_offset"]


def check_geoset(X, *, allow_empty=False) -> GeoSet:
    """Coerce ``X`` to a :class:`GeoSet`.

    Accepts a GeoSet, a path to a ``fracgeo`` file, or a sequence of
    primitives / vertex lists.
    """
    if isinstance(X, GeoSet):
        g = X
    elif isinstance(X, (str, os.PathLike)):
        from .fracgeo import read_fracgeo
        g = read_fracgeo(X)
    elif isinstance(X, ConvexPrimitive):
        g = GeoSet("input", (X,))
    else:
        try:
            prims = tuple(p if isinstance(p, ConvexPrimitive) else ConvexPrimitive(p) for p in X)
        except TypeError:
            raise ValidationError(f"cannot interpret {type(X).__name__} as a set") from None
        g = GeoSet("input", prims)
    if not allow_empty and not g.primitives:
        raise EmptyInputError(f"set {g.name!r} is empty")
    return g


def check_geosets(X) -> List[GeoSet]:
    """A batch of sets: a single set (or path) becomes a batch of one."""
    if isinstance(X, (GeoSet, str, os.PathLike)):
        return [check_geoset(X)]
    items = list(X)
    if items and all(isinstance(i, (GeoSet, str, os.PathLike)) for i in items):
        return [check_geoset(i) for i in items]
    return [check_geoset(items)]


def check_deltas(schedule) -> List[Scalar]:
    """Resolve a schedule spec (string, Schedule or sequence) to strictly
    decreasing positive deltas."""
    from .estimation import Schedule, make_schedule, parse_schedule

    if isinstance(schedule, str):
        deltas = make_schedule(parse_schedule(schedule))
    elif isinstance(schedule, Schedule):
        deltas = make_schedule(schedule)
    else:
        deltas = [as_scalar(d) for d in schedule]
    if not deltas:
        raise ValidationError("schedule is empty")
    for d in deltas:
        if not d > 0:
            raise ValidationError(f"delta must be positive, got {d}")
    for a, b in zip(deltas, deltas[1:]):
        if not float(a) > float(b):
            raise ValidationError("deltas must be strictly decreasing")
    return deltas


def check_choice(name, value, choices: Sequence[str]) -> str:
    if value not in choices:
        raise ValidationError(f"{name} must be one of {tuple(choices)}, got {value!r}")
    return value


def check_offset(offset) -> Point:
    if isinstance(offset, str):
        parts = offset.split(",")
        if len(parts) != 2:
            raise ValidationError(f"offset must be 'X,Y', got {offset!r}")
        offset = parts
    try:
        x, y = offset
    except (TypeError, ValueError):
        raise ValidationError(f"offset must be a pair, got {offset!r}") from None
    x, y = as_scalar(x), as_scalar(y)
    if isinstance(x, Dyadic) != isinstance(y, Dyadic):
        x, y = float(x), float(y)
    return Point(x, y)
