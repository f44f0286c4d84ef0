"""Closed-form spiral counts, the ratio iteration, delta schedules and log-log fits."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .dyadic import Dyadic, Scalar
from .exceptions import (DomainError, InsufficientDataError, NonConvergenceError,
                         ParseError, ValidationError)
from .mesh import CountRecord

__all__ = [
    "cover_count_formula",
    "ratio_estimate",
    "ratio_table",
    "converge_ratio",
    "Schedule",
    "make_schedule",
    "parse_schedule",
    "FitResult",
    "fit_loglog",
    "fits_to_csv",
    "fits_from_csv",
]


def cover_count_formula(k: int) -> int:
    """Number of stage-``k`` triangles covering the spiral: ``3 * 2**k + 1``."""
    if k < 1:
        raise DomainError("stage must be >= 1")
    return 3 * (1 << k) + 1


def ratio_estimate(k: int) -> float:
    """Finite-stage dimension estimate ``2 * log2(3 * 2**k + 1) / (k + 1)``.

    Always above 2 and decreasing towards it.
    """
    return 2.0 * math.log2(cover_count_formula(k)) / (k + 1)


def ratio_table(k_stop: int) -> List[Tuple[int, int, float]]:
    return [(k, cover_count_formula(k), ratio_estimate(k)) for k in range(1, k_stop + 1)]


def converge_ratio(tolerance: float = 0.1, k_max: int = 60, literal: bool = False
                   ) -> Tuple[int, float]:
    """Iterate the ratio estimate until it settles.

    By default stops at the first ``k`` with ``B(k) - 2 <= tolerance``. With
    ``literal=True`` the stopping rule is ``B(k) >= 2`` instead, which every
    ``B(k)`` satisfies, so it stops at ``k = 1``.
    """
    if k_max < 1:
        raise ValidationError("k_max must be >= 1")
    if not literal and not tolerance > 0:
        raise ValidationError("tolerance must be positive")
    value = math.nan
    for k in range(1, k_max + 1):
        value = ratio_estimate(k)
        if (value >= 2) if literal else (value - 2 <= tolerance):
            return k, value
    raise NonConvergenceError(
        f"ratio did not reach 2 + {tolerance} within k_max={k_max} (last B={value:.6f})",
        k_max, value, ratio_table(k_max))


@dataclass(frozen=True)
class Schedule:
    """A family of mesh sizes.

    * ``dyadic``: ``params=(j0, j1)``, ``delta_j = 2**-j`` for ``j0 <= j <= j1``
    * ``paper``: ``params=(k0, k1)``, ``delta_k = 2**(-(k+1)/2)``
    * ``linear``: ``params=(d0, d1, n)``, ``n`` equally spaced values from d0 to d1
    """

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in ("dyadic", "paper", "linear"):
            raise ValidationError(f"unknown schedule kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(self.params))

    def __str__(self):
        return ":".join([self.kind, *map(str, self.params)])


def parse_schedule(text: str) -> Schedule:
    """Parse ``dyadic:J0:J1``, ``paper:K0:K1`` or ``linear:D0:D1:N``."""
    parts = text.strip().split(":")
    kind = parts[0]
    try:
        if kind in ("dyadic", "paper") and len(parts) == 3:
            return Schedule(kind, (int(parts[1]), int(parts[2])))
        if kind == "linear" and len(parts) == 4:
            return Schedule(kind, (float(parts[1]), float(parts[2]), int(parts[3])))
    except ValueError:
        pass
    raise ValidationError(
        f"bad schedule {text!r}; expected dyadic:J0:J1, paper:K0:K1 or linear:D0:D1:N")


def make_schedule(s: Schedule) -> List[Scalar]:
    """Mesh sizes of ``s`` in strictly decreasing order.

    Dyadic entries are exact; ``paper`` gives exact values for odd ``k`` and
    floats for even ``k``.
    """
    if s.kind == "dyadic":
        j0, j1 = s.params
        if j1 < j0:
            raise ValidationError("dyadic schedule needs j0 <= j1")
        return [Dyadic.pow2(-j) for j in range(j0, j1 + 1)]
    if s.kind == "paper":
        k0, k1 = s.params
        if k0 < 0 or k1 < k0:
            raise ValidationError("paper schedule needs 0 <= k0 <= k1")
        return [Dyadic.pow2(-((k + 1) // 2)) if k % 2 else 2.0 ** (-(k + 1) / 2)
                for k in range(k0, k1 + 1)]
    d0, d1, n = s.params
    if n < 1 or d0 <= 0 or d1 <= 0:
        raise ValidationError("linear schedule needs positive bounds and n >= 1")
    if n == 1:
        return [float(d0)]
    if d0 == d1:
        raise ValidationError("linear schedule bounds must differ")
    hi, lo = max(d0, d1), min(d0, d1)
    return [float(v) for v in np.linspace(hi, lo, n)]


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    mesh: str = ""

    @property
    def dimension(self):
        return self.slope


def fit_loglog(records: Sequence[CountRecord]) -> FitResult:
    """Ordinary least squares of ``log10(count)`` on ``-log10(delta)``."""
    records = list(records)
    meshes = {r.mesh for r in records}
    if len(meshes) > 1:
        raise ValidationError(f"records mix mesh kinds {sorted(meshes)}")
    if any(r.count <= 0 for r in records):
        raise DomainError("counts must be >= 1 to take logarithms")
    if len({float(r.delta) for r in records}) < 2:
        raise InsufficientDataError("need at least two distinct delta values")
    x = np.array([-math.log10(float(r.delta)) for r in records])
    y = np.array([math.log10(r.count) for r in records])
    dx, dy = x - x.mean(), y - y.mean()
    slope = float(np.dot(dx, dy) / np.dot(dx, dx))
    intercept = float(y.mean() - slope * x.mean())
    ss_tot = float(np.dot(dy, dy))
    resid = y - (intercept + slope * x)
    ss_res = float(np.dot(resid, resid))
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return FitResult(slope, intercept, r2, len(records), meshes.pop() if meshes else "")


def fits_to_csv(fits: Sequence[FitResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["mesh", "slope", "intercept", "r_squared", "n_points"])
    for f in fits:
        w.writerow([f.mesh, "%.17g" % f.slope, "%.17g" % f.intercept,
                    "%.17g" % f.r_squared, f.n_points])
    return buf.getvalue()


def fits_from_csv(text: str) -> List[FitResult]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["mesh", "slope", "intercept", "r_squared", "n_points"]:
        raise ParseError("expected header 'mesh,slope,intercept,r_squared,n_points'", 1)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            out.append(FitResult(float(row[1]), float(row[2]), float(row[3]), int(row[4]), row[0]))
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), lineno) from None
    return out
