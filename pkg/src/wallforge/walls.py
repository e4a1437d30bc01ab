"""Potential walls for the (sH, tH) slice and the destabilizer enumeration.

Radii are carried as ``radius_sq`` throughout; a square root is never taken
except to bound an integer search range.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from wallforge.chern import (
    ChernChar,
    discriminant_nonnegative,
    dualize,
    euler_characteristic,
    line_bundle,
)
from wallforge.stability import Ordering, StabPoint, compare_slopes

THETA_CENTER = Fraction(-3, 2)


class WallKind(enum.Enum):
    SEMICIRCLE = "SEMICIRCLE"
    VERTICAL_LINE = "VERTICAL_LINE"
    EMPTY = "EMPTY"
    DEGENERATE_ALL = "DEGENERATE_ALL"


class Side(enum.Enum):
    A_BELOW = "A_BELOW"
    EQUAL = "EQUAL"
    A_ABOVE = "A_ABOVE"


class Actuality(enum.Enum):
    CERTIFIED_RANK1 = "CERTIFIED_RANK1"
    NUMERICAL_CANDIDATE = "NUMERICAL_CANDIDATE"


class DegenerateWallError(ValueError):
    """The two classes are proportional, so every point is on the 'wall'."""


@dataclass(frozen=True)
class Wall:
    kind: WallKind
    pair: tuple[ChernChar, ChernChar]
    center: Optional[Fraction] = None
    radius_sq: Optional[Fraction] = None
    line_s: Optional[Fraction] = None
    tags: tuple[str, ...] = ()

    @property
    def key(self) -> tuple:
        """Identity of the geometric locus; pairs and tags are annotations."""
        return (self.kind.value, self.center, self.radius_sq, self.line_s)

    def contains(self, p: StabPoint) -> bool:
        if self.kind is WallKind.SEMICIRCLE:
            return (p.s - self.center) ** 2 + p.t**2 == self.radius_sq
        if self.kind is WallKind.VERTICAL_LINE:
            return p.s == self.line_s
        return self.kind is WallKind.DEGENERATE_ALL


@dataclass(frozen=True)
class DestabilizerCandidate:
    cls: ChernChar
    rank: int
    chi: int
    radius_sq: Fraction
    actuality: Actuality
    # rank-1 family data; None for higher-rank numerical candidates
    ell: Optional[int] = None
    i: Optional[int] = None
    len_W: Optional[int] = None
    len_Y: Optional[int] = None

    def sort_key(self) -> tuple:
        return (self.rank, self.cls.ch1, self.cls.ch2, self.cls.ch0)


def wall_from_pair(a: ChernChar, e: ChernChar) -> Wall:
    """Locus where mu(a) = mu(e).

    With the 2x2 minors ``D_rc``, ``D_rd``, ``D_cd`` of the pair, the
    cleared slope difference is ``-(D_rc/2) * ((s - c)^2 + t^2 - R^2)``.
    """
    d_rc = a.ch0 * e.ch1 - e.ch0 * a.ch1
    d_rd = a.ch0 * e.ch2 - e.ch0 * a.ch2
    d_cd = a.ch1 * e.ch2 - e.ch1 * a.ch2
    pair = (a, e)
    if d_rc != 0:
        center = Fraction(d_rd) / d_rc
        radius_sq = center * center - 2 * Fraction(d_cd) / d_rc
        if radius_sq <= 0:
            return Wall(WallKind.EMPTY, pair)
        return Wall(WallKind.SEMICIRCLE, pair, center=center, radius_sq=radius_sq)
    if d_rd != 0:
        return Wall(WallKind.VERTICAL_LINE, pair, line_s=Fraction(d_cd) / d_rd)
    if d_cd != 0:
        # both of rank 0 with different slopes: the phases never meet
        return Wall(WallKind.EMPTY, pair)
    return Wall(WallKind.DEGENERATE_ALL, pair)


_SIDE = {Ordering.LESS: Side.A_BELOW, Ordering.EQUAL: Side.EQUAL, Ordering.GREATER: Side.A_ABOVE}


def side_of_wall(a: ChernChar, e: ChernChar, p: StabPoint) -> Side:
    if a.is_proportional_to(e):
        raise DegenerateWallError(f"{a} and {e} are proportional")
    return _SIDE[compare_slopes(a, e, p)]


def radius_sq_from_rank_chi(d: int, r: int, chi: int) -> Fraction:
    """Squared radius of the wall cut out by a rank ``r`` subobject of
    Euler characteristic ``chi`` in a class ``(0, d, -3d/2)``."""
    return Fraction(1, 4) + Fraction(2 * chi, r)


def flip_chi_range(d: int, r: int) -> range:
    """Integers chi with ``3/2 < sqrt(1/4 + 2 chi/r) <= d/(2r)``."""
    hi = (d * d - r * r) // (8 * r)
    return range(r + 1, max(r + 1, hi + 1))


def default_max_rank(d: int) -> int:
    """Above this rank R > 3/2 and R <= d/(2r) cannot both hold."""
    return (d - 1) // 3


def _ceil_sqrt(n: int) -> int:
    root = math.isqrt(n)
    return root if root * root == n else root + 1


def _c1_interval(d: int, r: int, radius_sq: Fraction) -> list[int]:
    """Integers c with ``-3/2 + R <= c/r <= -3/2 + d/r - R``.

    Both ends are decided by squaring: ``2c + 3r >= 2rR`` and
    ``2d - 3r - 2c >= 2rR``.
    """
    bound = 4 * r * r * radius_sq  # (2rR)^2
    lo_ceil = math.floor((_ceil_sqrt(math.ceil(bound)) - 3 * r) / 2) - 1
    out = []
    for c in range(lo_ceil, d + 1):
        left = 2 * c + 3 * r
        right = 2 * d - 3 * r - 2 * c
        if right < 0:
            break
        if left >= 0 and left * left >= bound and right * right >= bound:
            out.append(c)
    return out


def rank1_c1_solutions(d: int, ell: int) -> list[int]:
    """First Chern classes allowed for a rank 1 destabilizer with
    Euler characteristic ``(d^2 - 1)/8 - ell``."""
    radius_sq = Fraction(d * d, 4) - 2 * ell
    if radius_sq < 0:
        raise ValueError(f"no wall: d^2/4 - 2*ell < 0 for d={d}, ell={ell}")
    return _c1_interval(d, 1, radius_sq)


def _check_d(d: int, minimum: int = 5) -> None:
    if not isinstance(d, int) or d % 2 == 0 or d < minimum:
        raise ValueError(f"d must be odd and >= {minimum}, got {d}")


def rank1_candidate(d: int, ell: int, i: int) -> DestabilizerCandidate:
    c = (d - 3) // 2 + i
    len_w = ell + i * (d + i) // 2
    len_y = ell - i * (d - i) // 2
    chi = (d * d - 1) // 8 - ell
    cls = ChernChar(1, c, Fraction(c * c, 2) - len_w)
    return DestabilizerCandidate(
        cls=cls,
        rank=1,
        chi=chi,
        radius_sq=radius_sq_from_rank_chi(d, 1, chi),
        actuality=Actuality.CERTIFIED_RANK1,
        ell=ell,
        i=i,
        len_W=len_w,
        len_Y=len_y,
    )


def total_class(d: int) -> ChernChar:
    return ChernChar(0, d, Fraction(-3 * d, 2))


def enumerate_rank1_walls(d: int) -> list[tuple[Wall, list[DestabilizerCandidate]]]:
    """Flip walls cut out by rank 1 subobjects, outermost first."""
    _check_d(d)
    v = total_class(d)
    top_chi = (d * d - 1) // 8
    out = []
    for chi in reversed(flip_chi_range(d, 1)):
        ell = top_chi - chi
        cands = []
        for c in rank1_c1_solutions(d, ell):
            cand = rank1_candidate(d, ell, c - (d - 3) // 2)
            if cand.len_W >= 0 and cand.len_Y >= 0:
                cands.append(cand)
        generic = rank1_candidate(d, ell, 0).cls
        wall = Wall(
            WallKind.SEMICIRCLE,
            (generic, v),
            center=THETA_CENTER,
            radius_sq=Fraction(d * d, 4) - 2 * ell,
            tags=("FLIP",),
        )
        out.append((wall, cands))
    return out


def enumerate_flip_candidates(d: int, max_rank: int) -> list[DestabilizerCandidate]:
    """All numerical destabilizers of ``(0, d, -3d/2)`` up to ``max_rank``
    cutting out a flip wall, sorted by radius (outermost first)."""
    _check_d(d)
    if max_rank < 1:
        raise ValueError("max_rank must be >= 1")
    top_chi = (d * d - 1) // 8
    out = []
    for r in range(1, max_rank + 1):
        for chi in flip_chi_range(d, r):
            radius_sq = radius_sq_from_rank_chi(d, r, chi)
            for c in _c1_interval(d, r, radius_sq):
                ch2 = chi - r - Fraction(3 * c, 2)
                cls = ChernChar(r, c, ch2)
                if not discriminant_nonnegative(cls):
                    continue
                if r == 1:
                    ell = top_chi - chi
                    cand = rank1_candidate(d, ell, c - (d - 3) // 2)
                    assert cand.cls == cls
                else:
                    cand = DestabilizerCandidate(
                        cls=cls,
                        rank=r,
                        chi=chi,
                        radius_sq=radius_sq,
                        actuality=Actuality.NUMERICAL_CANDIDATE,
                    )
                out.append(cand)
    out.sort(key=lambda cd: (-cd.radius_sq, cd.sort_key()))
    return out


def special_walls(d: int) -> tuple[Wall, Wall]:
    """The theta wall (divisorial contraction) and the collapsing wall."""
    _check_d(d)
    v = total_class(d)
    theta = Wall(
        WallKind.SEMICIRCLE,
        (line_bundle(0), v),
        center=THETA_CENTER,
        radius_sq=Fraction(9, 4),
        tags=("THETA", "DIVISORIAL"),
    )
    collapsing = Wall(
        WallKind.SEMICIRCLE,
        (line_bundle(-1), v),
        center=THETA_CENTER,
        radius_sq=Fraction(1, 4),
        tags=("COLLAPSING",),
    )
    return theta, collapsing


def reflect_wall(w: Wall) -> Wall:
    """Image of a wall under duality, which sends s to -3 - s.

    The sub/total pair ``(a, e)`` becomes ``(dual(e - a), dual(e))``: the
    dual of the quotient is the new subobject.
    """
    if w.kind is WallKind.DEGENERATE_ALL:
        raise DegenerateWallError("cannot reflect a degenerate wall")
    a, e = w.pair
    pair = (dualize(e - a), dualize(e))
    if w.kind is WallKind.SEMICIRCLE:
        return replace(w, pair=pair, center=-3 - w.center)
    if w.kind is WallKind.VERTICAL_LINE:
        return replace(w, pair=pair, line_s=-3 - w.line_s)
    return replace(w, pair=pair)


def merge_walls(
    entries: Iterable[tuple[Wall, list[DestabilizerCandidate]]],
) -> list[tuple[Wall, list[DestabilizerCandidate]]]:
    """Merge entries sharing a locus; order by radius, outermost first.

    The first wall seen for a locus keeps its pair; tags are unioned.
    """
    merged: dict[tuple, tuple[Wall, list[DestabilizerCandidate]]] = {}
    for wall, cands in entries:
        if wall.key in merged:
            old, old_cands = merged[wall.key]
            tags = tuple(dict.fromkeys(old.tags + wall.tags))
            merged[wall.key] = (replace(old, tags=tags), old_cands + list(cands))
        else:
            merged[wall.key] = (wall, list(cands))
    out = []
    for wall, cands in merged.values():
        seen = {}
        for cd in cands:
            seen.setdefault(cd, None)
        out.append((wall, sorted(seen, key=DestabilizerCandidate.sort_key)))
    out.sort(key=lambda item: _radius_order(item[0]))
    return out


def _radius_order(w: Wall) -> tuple:
    if w.kind is WallKind.SEMICIRCLE:
        return (0, -w.radius_sq, w.center)
    if w.kind is WallKind.VERTICAL_LINE:
        return (1, w.line_s)
    return (2, w.kind.value)


def scan_walls(d: int, max_rank: int) -> list[tuple[Wall, list[DestabilizerCandidate]]]:
    """Flip candidates grouped into walls, one entry per distinct radius."""
    v = total_class(d)
    entries = []
    for cand in enumerate_flip_candidates(d, max_rank):
        tags = ("FLIP",) if cand.rank == 1 else ("NUMERICAL",)
        wall = Wall(
            WallKind.SEMICIRCLE,
            (cand.cls, v),
            center=THETA_CENTER,
            radius_sq=cand.radius_sq,
            tags=tags,
        )
        entries.append((wall, [cand]))
    return merge_walls(entries)


# ---------------------------------------------------------------------------
# Bounded potential-wall search for an arbitrary class.


def _along_wall_nonneg(x: ChernChar, center: Fraction, radius_sq: Fraction) -> bool:
    """Im Z(x) >= 0 on the whole wall, and not identically zero.

    ``x1 - x0*s`` is linear, so it suffices that its value at the center
    dominates ``|x0| * R``.
    """
    at_center = x.ch1 - x.ch0 * center
    if x.ch0 == 0:
        return at_center > 0
    return at_center >= 0 and at_center * at_center >= x.ch0 * x.ch0 * radius_sq


def _half_range(lo: float, hi: float) -> Iterator[Fraction]:
    """Half-integers in [lo, hi], padded by one step on each side."""
    for n in range(math.floor(2 * lo) - 2, math.ceil(2 * hi) + 3):
        yield Fraction(n, 2)


def numerical_walls(v: ChernChar, max_rank: int) -> list[Wall]:
    """Semicircular potential walls of ``v`` along which some splitting
    ``a + (v - a)`` keeps both pieces in the heart.

    Pieces are restricted to ``|ch0(a)|, |ch0(v - a)| <= max_rank``; the
    condition is invariant under duality, so the result for ``dualize(v)``
    is the reflection of the result for ``v``.  Integer search ranges are
    bounded using floats and padded; every wall is then checked exactly.
    """
    if max_rank < 0:
        raise ValueError("max_rank must be >= 0")
    ranks = [r for r in range(v.ch0 - max_rank, v.ch0 + max_rank + 1) if abs(r) <= max_rank]
    found: dict[tuple, Wall] = {}

    def consider(a: ChernChar) -> None:
        w = wall_from_pair(a, v)
        if w.kind is not WallKind.SEMICIRCLE or w.key in found:
            return
        if _along_wall_nonneg(a, w.center, w.radius_sq) and _along_wall_nonneg(
            v - a, w.center, w.radius_sq
        ):
            found[w.key] = w

    if v.ch0 == 0:
        if v.ch1 <= 0:
            return []
        center = v.ch2 / v.ch1
        for r in ranks:
            if r == 0:
                continue
            # R <= ch1 / (2|r|) and 0 <= a1 - r*center <= ch1
            lo = float(r * center)
            for a1 in range(math.floor(lo) - 1, math.ceil(lo + v.ch1) + 2):
                # center is fixed; R^2 is affine in a2 with slope 2/r
                r_max_sq = (v.ch1 / (2 * abs(r))) ** 2
                base = float(center * center - 2 * Fraction(a1 * v.ch2) / (r * v.ch1))
                ends = sorted(((0 - base) * r / 2, (r_max_sq - base) * r / 2))
                for a2 in _half_range(*ends):
                    consider(ChernChar(r, a1, a2))
        return _sorted_walls(found.values())

    mu = Fraction(v.ch1, v.ch0)
    delta = Fraction(v.ch1 * v.ch1) - 2 * v.ch0 * v.ch2
    if delta <= 0:
        return []
    delta_n = delta / (v.ch0 * v.ch0)
    # nearest wall endpoint stays 1/(|v0|(|v0|+N)) away from the vertical wall
    eps = Fraction(1, abs(v.ch0) * (abs(v.ch0) + max_rank))
    u_max = float((delta_n + eps * eps) / (2 * eps))
    side = -1 if v.ch0 > 0 else 1  # Im Z(v) > 0 only on this side of s = mu
    c_lo, c_hi = sorted((float(mu) + side * math.sqrt(float(delta_n)), float(mu) + side * u_max))
    f_v_max = abs(v.ch0) * u_max
    for r in ranks:
        a1_lo = min(r * c_lo, r * c_hi)
        a1_hi = max(r * c_lo, r * c_hi) + f_v_max
        for a1 in range(math.floor(a1_lo) - 1, math.ceil(a1_hi) + 2):
            d_rc = r * v.ch1 - v.ch0 * a1
            if d_rc == 0:
                continue
            # center = (r*v2 - v0*a2) / d_rc is affine in a2
            ends = sorted(
                float((r * v.ch2 - c * d_rc) / v.ch0) for c in (Fraction(c_lo), Fraction(c_hi))
            )
            for a2 in _half_range(*ends):
                consider(ChernChar(r, a1, a2))
    return _sorted_walls(found.values())


def _sorted_walls(walls: Iterable[Wall]) -> list[Wall]:
    return sorted(walls, key=lambda w: (w.center, -w.radius_sq))
