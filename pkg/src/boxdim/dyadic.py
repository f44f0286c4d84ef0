"""Exact dyadic rationals and the exact/approx scalar convention.

A :class:`Dyadic` is ``numerator / 2**exponent`` with an arbitrary precision
integer numerator. Sums, differences, products and halving stay dyadic, so
every midpoint construction on the unit square is represented without
rounding. Approximate values are plain ``float``; a single computation never
mixes the two.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

from .exceptions import ModeError, ParseError

__all__ = [
    "Dyadic",
    "Scalar",
    "APPROX_TOL",
    "as_scalar",
    "scalar_mode",
    "scalar_normalize",
    "parse_scalar",
    "format_scalar",
    "to_float",
]

#: absolute tolerance used by every approx-mode predicate
APPROX_TOL = 1e-12

_DYADIC_RE = re.compile(r"^([+-]?\d+)(?:/2\^(\d+))?$")


def _canonical(num, exp):
    if num == 0:
        return 0, 0
    if exp and not num & 1:
        tz = (num & -num).bit_length() - 1
        shift = tz if tz < exp else exp
        return num >> shift, exp - shift
    return num, exp


class Dyadic:
    """Immutable exact rational ``numerator / 2**exponent``.

    Instances are always stored in canonical form: the exponent is as small as
    possible, which makes the numerator odd unless the exponent is zero.

    >>> Dyadic(4, 3)
    Dyadic(1, 1)
    >>> Dyadic(3, 2) + Dyadic(1, 2)
    Dyadic(1, 0)
    """

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator=0, exponent=0):
        if exponent < 0:
            raise ValueError("exponent must be nonnegative")
        num, exp = _canonical(int(numerator), int(exponent))
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    @classmethod
    def _make(cls, num, exp):
        self = object.__new__(cls)
        num, exp = _canonical(num, exp)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    def __reduce__(self):
        return (Dyadic, (self.numerator, self.exponent))

    # -- conversions -----------------------------------------------------
    @classmethod
    def from_fraction(cls, value):
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ModeError(f"{value} is not a dyadic rational")
        return cls._make(value.numerator, den.bit_length() - 1)

    @classmethod
    def pow2(cls, k):
        """``2**k`` for any integer ``k``."""
        if k >= 0:
            return cls._make(1 << k, 0)
        return cls._make(1, -k)

    def to_fraction(self):
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self):
        return self.numerator / (1 << self.exponent)

    def scaled(self, exponent):
        """Integer ``self * 2**exponent``; ``exponent`` must be >= ``self.exponent``."""
        return self.numerator << (exponent - self.exponent)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic._make(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        e1, e2 = self.exponent, other.exponent
        if e1 == e2:
            return Dyadic._make(self.numerator + other.numerator, e1)
        if e1 > e2:
            return Dyadic._make(self.numerator + (other.numerator << (e1 - e2)), e1)
        return Dyadic._make((self.numerator << (e2 - e1)) + other.numerator, e2)

    __radd__ = __add__

    def __neg__(self):
        return Dyadic._make(-self.numerator, self.exponent)

    def __pos__(self):
        return self

    def __abs__(self):
        return self if self.numerator >= 0 else -self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Dyadic._make(self.numerator * other.numerator, self.exponent + other.exponent)

    __rmul__ = __mul__

    def half(self):
        return Dyadic._make(self.numerator, self.exponent + 1)

    def __truediv__(self, other):
        # only division by powers of two keeps the result dyadic
        if isinstance(other, int) and other > 0 and not other & (other - 1):
            return Dyadic._make(self.numerator, self.exponent + other.bit_length() - 1)
        if isinstance(other, Dyadic) and other.numerator in (1, -1):
            return Dyadic._make(self.numerator * other.numerator << other.exponent, self.exponent)
        raise ModeError("division result is not dyadic")

    # -- comparison ------------------------------------------------------
    def _cmp_key(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return None
        e = max(self.exponent, other.exponent)
        return self.scaled(e), other.scaled(e)

    def __eq__(self, other):
        if isinstance(other, (Dyadic, int)):
            a, b = self._cmp_key(other)
            return a == b
        if isinstance(other, Rational):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        key = self._cmp_key(other)
        if key is None:
            return NotImplemented
        return key[0] < key[1]

    def __le__(self, other):
        key = self._cmp_key(other)
        if key is None:
            return NotImplemented
        return key[0] <= key[1]

    def __gt__(self, other):
        key = self._cmp_key(other)
        if key is None:
            return NotImplemented
        return key[0] > key[1]

    def __ge__(self, other):
        key = self._cmp_key(other)
        if key is None:
            return NotImplemented
        return key[0] >= key[1]

    def __hash__(self):
        if self.exponent == 0:
            return hash(self.numerator)
        return hash(self.to_fraction())

    def __bool__(self):
        return self.numerator != 0

    def __repr__(self):
        return f"Dyadic({self.numerator}, {self.exponent})"

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"


Scalar = Union[Dyadic, float]


def scalar_normalize(s) -> Dyadic:
    """Canonical form of ``s``.

    ``s`` is a :class:`Dyadic` (already canonical, returned unchanged in value)
    or a raw ``(numerator, exponent)`` pair such as ``(4, 3)``.
    """
    if isinstance(s, Dyadic):
        return Dyadic._make(s.numerator, s.exponent)
    num, exp = s
    return Dyadic(num, exp)


def as_scalar(value) -> Scalar:
    """Coerce ints, dyadic fractions and strings to :class:`Dyadic`; floats pass through."""
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return Dyadic._make(value, 0)
    if isinstance(value, float):
        return value
    if isinstance(value, Rational):
        return Dyadic.from_fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise TypeError(f"cannot interpret {value!r} as a scalar") from None


def scalar_mode(value) -> str:
    return "exact" if isinstance(value, Dyadic) else "approx"


def to_float(value) -> float:
    return float(value)


def parse_scalar(text: str, line=None) -> Scalar:
    """Parse ``<int>``, ``<int>/2^<uint>`` (exact) or a decimal literal (approx)."""
    text = text.strip()
    m = _DYADIC_RE.match(text)
    if m:
        return Dyadic(int(m.group(1)), int(m.group(2) or 0))
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"bad scalar {text!r}", line) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite scalar {text!r}", line)
    return value


def format_scalar(value: Scalar) -> str:
    if isinstance(value, Dyadic):
        return str(value)
    text = repr(float(value))
    # keep approx values recognizable as decimals on re-read
    if _DYADIC_RE.match(text):
        text += ".0"
    return text
