"""Exact dyadic rationals ``num / 2**exp``.

Every rational quantity derived from a set family under the uniform measure
(measures, correlations, influences, Fourier coefficients) has a power-of-two
denominator, so this small type is enough to keep all of them exact.
Mixing with :class:`fractions.Fraction` falls back to ``Fraction``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = ["Dyadic", "to_fraction", "as_dyadic"]


def _normalize(num: int, exp: int) -> tuple[int, int]:
    if num == 0:
        return 0, 0
    if exp < 0:
        return num << -exp, 0
    tz = (num & -num).bit_length() - 1
    if tz:
        shift = min(tz, exp)
        return num >> shift, exp - shift
    return num, exp


class Dyadic:
    """Immutable exact value ``numerator / 2**exponent``.

    Stored normalized: the numerator is odd, or the value is zero with
    exponent 0.

    >>> Dyadic(6, 3)
    Dyadic(3, 2)
    >>> Dyadic(1, 1) + Dyadic(1, 2)
    Dyadic(3, 2)
    """

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int = 0, exponent: int = 0):
        num, exp = _normalize(int(numerator), int(exponent))
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def from_fraction(cls, q) -> "Dyadic":
        q = Fraction(q)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, den.bit_length() - 1)

    # conversions -----------------------------------------------------------

    @property
    def denominator(self) -> int:
        return 1 << self.exponent

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self) -> float:
        return math.ldexp(self.numerator, -self.exponent) if abs(self.numerator) < 1 << 1000 \
            else float(self.to_fraction())

    def __int__(self) -> int:
        return int(self.to_fraction())

    def __bool__(self) -> bool:
        return self.numerator != 0

    def __repr__(self) -> str:
        return f"Dyadic({self.numerator}, {self.exponent})"

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{1 << self.exponent}"

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    # arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Rational):
                return self.to_fraction() + other
            if isinstance(other, float):
                return float(self) + other
            return NotImplemented
        e = max(self.exponent, o.exponent)
        return Dyadic((self.numerator << (e - self.exponent)) + (o.numerator << (e - o.exponent)), e)

    __radd__ = __add__

    def __neg__(self):
        return Dyadic(-self.numerator, self.exponent)

    def __pos__(self):
        return self

    def __abs__(self):
        return Dyadic(abs(self.numerator), self.exponent)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Rational):
                return self.to_fraction() - other
            if isinstance(other, float):
                return float(self) - other
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Rational):
                return self.to_fraction() * other
            if isinstance(other, float):
                return float(self) * other
            return NotImplemented
        return Dyadic(self.numerator * o.numerator, self.exponent + o.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a power of two stays dyadic; anything else gives a Fraction."""
        if isinstance(other, float):
            return float(self) / other
        if isinstance(other, (int, Dyadic, Rational)):
            q = self.to_fraction() / to_fraction(other)
            return as_dyadic(q) if _is_dyadic(q) else q
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        if isinstance(other, (int, Rational)):
            q = to_fraction(other) / self.to_fraction()
            return as_dyadic(q) if _is_dyadic(q) else q
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        return Dyadic(self.numerator ** k, self.exponent * k)

    def shift(self, k: int) -> "Dyadic":
        """Multiply by ``2**k`` (``k`` may be negative)."""
        return Dyadic(self.numerator, self.exponent - k)

    # comparison ------------------------------------------------------------

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is not None:
            e = max(self.exponent, o.exponent)
            a = self.numerator << (e - self.exponent)
            b = o.numerator << (e - o.exponent)
            return (a > b) - (a < b)
        if isinstance(other, Rational):
            a, b = self.to_fraction(), Fraction(other)
        elif isinstance(other, float):
            a, b = self.to_fraction(), Fraction(other)
        else:
            raise TypeError
        return (a > b) - (a < b)

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError, OverflowError):
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def to_fraction(x) -> Fraction:
    if isinstance(x, Dyadic):
        return x.to_fraction()
    return Fraction(x)


def as_dyadic(x) -> Dyadic:
    """Convert ints, Fractions with power-of-two denominator, or Dyadics."""
    if isinstance(x, Dyadic):
        return x
    if isinstance(x, int):
        return Dyadic(x, 0)
    return Dyadic.from_fraction(x)
