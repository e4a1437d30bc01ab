"""Chern characters versus dimension vectors of the Beilinson quiver.

An object of ``A(k) = <O(k-2)[2], O(k-1)[1], O(k)>`` is a complex
``C^n0 (x) O(k-2) -> C^n1 (x) O(k-1) -> C^n2 (x) O(k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from wallforge.chern import ChernChar, line_bundle
from wallforge.stability import StabPoint


class NonIntegralError(ValueError):
    """The class is not that of any complex in A(k)."""


@dataclass(frozen=True)
class DimensionVector:
    n0: int
    n1: int
    n2: int
    k: int

    @classmethod
    def checked(cls, n0: int, n1: int, n2: int, k: int) -> DimensionVector:
        if min(n0, n1, n2) < 0:
            raise ValueError(f"dimension vector entries must be >= 0: {(n0, n1, n2)}")
        return cls(n0, n1, n2, k)

    @property
    def has_negative(self) -> bool:
        return min(self.n0, self.n1, self.n2) < 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n0, self.n1, self.n2)


def conversion_matrix(k: int) -> list[list[Fraction]]:
    return [
        [Fraction(k * (k - 1), 2), Fraction(-(2 * k - 1), 2), Fraction(1)],
        [Fraction(k * (k - 2)), Fraction(-(2 * k - 2)), Fraction(2)],
        [Fraction((k - 1) * (k - 2), 2), Fraction(-(2 * k - 3), 2), Fraction(1)],
    ]


def to_dimension_vector(v: ChernChar, k: int) -> DimensionVector:
    """Raw conversion; negative entries are kept so callers can see them."""
    col = v.as_tuple()
    entries = [sum(m * x for m, x in zip(row, col)) for row in conversion_matrix(k)]
    if any(e.denominator != 1 for e in entries):
        raise NonIntegralError(f"{v} has non-integral dimension vector {entries} at k={k}")
    n0, n1, n2 = (int(e) for e in entries)
    return DimensionVector(n0, n1, n2, k)


def from_dimension_vector(n: DimensionVector) -> ChernChar:
    k = n.k
    return n.n2 * line_bundle(k) - n.n1 * line_bundle(k - 1) + n.n0 * line_bundle(k - 2)


def quiver_regions_containing(p: StabPoint) -> set[int]:
    """All k with ``(s - (k-1))^2 + t^2 < 1``."""
    base = math.floor(p.s)
    out = set()
    for shift in range(base - 1, base + 3):
        if (p.s - shift) ** 2 + p.t**2 < 1:
            out.add(shift + 1)
    return out


def beilinson_moduli_dim(n: DimensionVector) -> int:
    """Expected dimension of the quiver moduli, valid when ``n0 == 0``.

    With no ``O(k-2)`` term the quiver is the Kronecker quiver with three
    arrows and no relations: ``3*n1*n2 - n1^2 - n2^2 + 1``.
    """
    if n.n0 != 0:
        raise ValueError("only two-term complexes (n0 == 0) are supported")
    return 3 * n.n1 * n.n2 - n.n1**2 - n.n2**2 + 1
