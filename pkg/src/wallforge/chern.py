"""Chern characters on P^2 and the arithmetic that acts on them.

Everything here is exact: ranks and degrees are ints, ``ch2`` is a
:class:`fractions.Fraction` whose denominator divides 2.  The canonical
class is fixed to ``K = -3H`` and the Todd class to ``(1, 3/2, 1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class ChernParseError(ValueError):
    """Raised for malformed text encodings of classes or rationals."""


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q``.  Decimal forms are rejected on purpose."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ChernParseError(f"not an exact rational: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ChernParseError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class ChernChar:
    """Numerical class ``(ch0, ch1, ch2)`` in Z + Z + (1/2)Z."""

    ch0: int
    ch1: int
    ch2: Fraction

    def __post_init__(self) -> None:
        for name in ("ch0", "ch1"):
            value = getattr(self, name)
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError(f"{name} must be an integer, got {value}")
                object.__setattr__(self, name, int(value))
            elif not isinstance(value, int) or isinstance(value, bool):
                raise TypeError(f"{name} must be an integer, got {value!r}")
        ch2 = self.ch2
        if isinstance(ch2, float) or isinstance(ch2, bool):
            raise TypeError("ch2 must be an exact rational")
        ch2 = Fraction(ch2)
        if 2 % ch2.denominator:
            raise ValueError(f"ch2 must lie in (1/2)Z, got {ch2}")
        object.__setattr__(self, "ch2", ch2)

    @classmethod
    def parse(cls, text: str) -> ChernChar:
        """Read the ``r,c1,ch2`` encoding, e.g. ``0,5,-15/2``."""
        parts = text.split(",")
        if len(parts) != 3:
            raise ChernParseError(f"expected 'r,c1,ch2', got {text!r}")
        r, c, x = (parse_rational(p) for p in parts)
        if r.denominator != 1 or c.denominator != 1:
            raise ChernParseError(f"rank and c1 must be integers: {text!r}")
        try:
            return cls(int(r), int(c), x)
        except ValueError as exc:
            raise ChernParseError(str(exc)) from exc

    def __str__(self) -> str:
        return f"{self.ch0},{self.ch1},{format_rational(self.ch2)}"

    def __add__(self, other: ChernChar) -> ChernChar:
        if not isinstance(other, ChernChar):
            return NotImplemented
        return ChernChar(self.ch0 + other.ch0, self.ch1 + other.ch1, self.ch2 + other.ch2)

    def __sub__(self, other: ChernChar) -> ChernChar:
        if not isinstance(other, ChernChar):
            return NotImplemented
        return ChernChar(self.ch0 - other.ch0, self.ch1 - other.ch1, self.ch2 - other.ch2)

    def __neg__(self) -> ChernChar:
        return ChernChar(-self.ch0, -self.ch1, -self.ch2)

    def __mul__(self, k: int) -> ChernChar:
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        return ChernChar(k * self.ch0, k * self.ch1, k * self.ch2)

    __rmul__ = __mul__

    def is_sheaf_integral(self) -> bool:
        """``ch2 - ch1^2/2`` is an integer, as it is for any coherent sheaf."""
        return (self.ch2 - Fraction(self.ch1 * self.ch1, 2)).denominator == 1

    def is_proportional_to(self, other: ChernChar) -> bool:
        a, b = self.as_tuple(), other.as_tuple()
        return all(a[i] * b[j] == a[j] * b[i] for i in range(3) for j in range(i + 1, 3))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return Fraction(self.ch0), Fraction(self.ch1), self.ch2


def line_bundle(k: int) -> ChernChar:
    """ch(O(k)) = (1, k, k^2/2)."""
    return ChernChar(1, k, Fraction(k * k, 2))


def ideal_sheaf(n: int, k: int = 0) -> ChernChar:
    """ch(I_Z(k)) for a zero-dimensional subscheme Z of length ``n``."""
    return twist(ChernChar(1, 0, Fraction(-n)), k)


def euler_characteristic(v: ChernChar) -> Fraction:
    return v.ch0 + Fraction(3, 2) * v.ch1 + v.ch2


def euler_pairing(a: ChernChar, b: ChernChar) -> Fraction:
    """chi(A, B) = sum (-1)^i dim Ext^i(A, B), by Riemann-Roch on P^2."""
    return (
        a.ch0 * b.ch0
        + Fraction(3, 2) * (a.ch0 * b.ch1 - a.ch1 * b.ch0)
        + a.ch0 * b.ch2
        + b.ch0 * a.ch2
        - a.ch1 * b.ch1
    )


def twist(v: ChernChar, k: int) -> ChernChar:
    """Tensor by O(k)."""
    return ChernChar(
        v.ch0,
        v.ch1 + k * v.ch0,
        v.ch2 + k * v.ch1 + Fraction(k * k * v.ch0, 2),
    )


def dualize(v: ChernChar) -> ChernChar:
    """Class of RHom(E, O(-3))[1].

    This is an involution; on rank-0 classes it negates the Euler
    characteristic and fixes ``(0, d, -3d/2)``.
    """
    return ChernChar(
        -v.ch0,
        v.ch1 + 3 * v.ch0,
        -v.ch2 - 3 * v.ch1 - Fraction(9 * v.ch0, 2),
    )


def bogomolov_holds(v: ChernChar) -> bool:
    """Strict Bogomolov inequality ``ch2 < ch1^2 / (2 ch0)``.

    Only meaningful for positive rank; torsion classes must be handled by
    the caller.
    """
    if v.ch0 <= 0:
        raise ValueError(f"Bogomolov inequality needs positive rank, got {v}")
    return 2 * v.ch0 * v.ch2 < v.ch1 * v.ch1


def discriminant_nonnegative(v: ChernChar) -> bool:
    """Non-strict form ``2 ch0 ch2 <= ch1^2``; admits line bundles."""
    return 2 * v.ch0 * v.ch2 <= v.ch1 * v.ch1
