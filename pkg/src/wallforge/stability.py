"""Central charge Z_{s,t}, slopes and numerical heart membership."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from wallforge.chern import ChernChar, ChernParseError, Rational, format_rational, parse_rational

SlopeValue = Union[Fraction, float]  # float only ever holds math.inf


class NotInHeartConeError(ValueError):
    """Z(v) lies on the closed non-negative real axis, so the slope is undefined."""


@dataclass(frozen=True)
class StabPoint:
    s: Fraction
    t: Fraction

    def __post_init__(self) -> None:
        for name in ("s", "t"):
            value = getattr(self, name)
            if isinstance(value, float):
                raise TypeError(f"{name} must be exact")
            object.__setattr__(self, name, Fraction(value))
        if self.t <= 0:
            raise ValueError(f"t must be positive, got {self.t}")

    @classmethod
    def parse(cls, text: str) -> StabPoint:
        parts = text.split(",")
        if len(parts) != 2:
            raise ChernParseError(f"expected 's,t', got {text!r}")
        s, t = (parse_rational(p) for p in parts)
        try:
            return cls(s, t)
        except ValueError as exc:
            raise ChernParseError(str(exc)) from exc

    def __str__(self) -> str:
        return f"{format_rational(self.s)},{format_rational(self.t)}"


@dataclass(frozen=True)
class ChargeValue:
    re: Fraction
    im: Fraction

    def __add__(self, other: ChargeValue) -> ChargeValue:
        return ChargeValue(self.re + other.re, self.im + other.im)


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class HeartPosition(enum.Enum):
    TORSION_LIKE = "TORSION_LIKE"
    Q_PART = "Q_PART"
    F_SHIFT_PART = "F_SHIFT_PART"
    OUTSIDE = "OUTSIDE"
    INDETERMINATE = "INDETERMINATE"


def central_charge(v: ChernChar, p: StabPoint) -> ChargeValue:
    s, t = p.s, p.t
    re = -v.ch2 + v.ch1 * s - Fraction(v.ch0, 2) * (s * s - t * t)
    im = t * (v.ch1 - v.ch0 * s)
    return ChargeValue(re, im)


def _check_defined(z: ChargeValue, v: ChernChar) -> None:
    if z.im == 0 and z.re >= 0:
        raise NotInHeartConeError(f"slope of {v} undefined: Z = {z.re} + 0i")


def slope(v: ChernChar, p: StabPoint) -> SlopeValue:
    """-Re Z / Im Z, or ``math.inf`` for classes of phase one."""
    z = central_charge(v, p)
    _check_defined(z, v)
    if z.im == 0:
        return math.inf
    return -z.re / z.im


def _sign(x: Rational) -> int:
    return (x > 0) - (x < 0)


def compare_slopes(a: ChernChar, b: ChernChar, p: StabPoint) -> Ordering:
    """Order mu(a) against mu(b) without dividing.

    For classes in the heart (Im Z >= 0) this is the sign of
    ``re_b*im_a - re_a*im_b``.  When an imaginary part is negative the
    cross product is corrected by the signs of the denominators, so the
    result always agrees with comparing :func:`slope` values.
    """
    za, zb = central_charge(a, p), central_charge(b, p)
    _check_defined(za, a)
    _check_defined(zb, b)
    cross = _sign(zb.re * za.im - za.re * zb.im)
    if za.im != 0 and zb.im != 0:
        cross *= _sign(za.im) * _sign(zb.im)
    elif za.im == 0 and zb.im == 0:
        cross = 0
    elif za.im == 0:
        cross = 1
    else:
        cross = -1
    return Ordering(cross)


def heart_position(v: ChernChar, s: Rational) -> HeartPosition:
    """Necessary-condition classification of ``v`` against the tilt at ``s``.

    Only the invariants are visible here; a Q_PART answer does not mean a
    sheaf of that class has all Harder-Narasimhan slopes above ``s``.
    """
    s = Fraction(s)
    if v.ch0 == 0:
        if v.ch1 > 0:
            return HeartPosition.TORSION_LIKE
        if v.ch1 < 0:
            return HeartPosition.OUTSIDE
        return HeartPosition.INDETERMINATE
    mu = Fraction(v.ch1, v.ch0)
    if v.ch0 > 0:
        return HeartPosition.Q_PART if mu > s else HeartPosition.OUTSIDE
    # negative rank: a shifted sheaf E[1] whose own slope is mu
    return HeartPosition.F_SHIFT_PART if mu <= s else HeartPosition.OUTSIDE
