"""Wall-by-wall bookkeeping of the flip sequence for ``v = (0, d, -3d/2)``.

Each record pairs a wall with the extension loci it creates.  Dimensions
of Ext groups are computed from the Euler pairing and are only reported
together with the vanishing assumptions that make that legitimate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from wallforge.chern import ChernChar, dualize, euler_characteristic, euler_pairing, line_bundle
from wallforge.quiver import beilinson_moduli_dim, to_dimension_vector
from wallforge.walls import (
    DestabilizerCandidate,
    Wall,
    _check_d,
    default_max_rank,
    scan_walls,
    special_walls,
    total_class,
)


class NegativeLengthError(ValueError):
    pass


class Assumption(enum.Enum):
    HOM_VANISHES = "HOM_VANISHES"
    EXT2_VANISHES = "EXT2_VANISHES"


class Reason(enum.Enum):
    BEL = "BEL"  # Bertram-Ein-Lazarsfeld vanishing
    STABILITY_SCHUR = "STABILITY_SCHUR"


FULL = frozenset(Assumption)


@dataclass(frozen=True)
class Ext1Dim:
    """dim Ext^1(b, a), or None when the assumptions do not pin it down."""

    value: Optional[int]
    assumptions: tuple[Assumption, ...] = ()
    reason: Optional[Reason] = None


@dataclass
class Component:
    label: str
    sub: ChernChar
    quot: ChernChar
    # projective dimensions of P(Ext^1(quot, sub)) and P(Ext^1(sub, quot))
    fiber_dim_above: Optional[int]
    fiber_dim_below: Optional[int]
    base_desc: str
    base_dim: Optional[int]
    assumptions: tuple[str, ...] = ()


@dataclass
class LocusRecord:
    wall: Wall
    destabilizer: ChernChar
    components: list[Component] = field(default_factory=list)
    candidates: list[DestabilizerCandidate] = field(default_factory=list)
    annotations: dict[str, object] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def _lengths(d: int, ell: int, i: int) -> tuple[int, int]:
    return ell + i * (d + i) // 2, ell - i * (d - i) // 2


def candidate_class(d: int, ell: int, i: int) -> ChernChar:
    """ch of the twisted ideal sheaf I_W((d-3)/2 + i), |W| = ell + i(d+i)/2."""
    len_w, _ = _lengths(d, ell, i)
    if len_w < 0:
        raise NegativeLengthError(f"length(W) = {len_w} < 0 for d={d}, ell={ell}, i={i}")
    c = (d - 3) // 2 + i
    return ChernChar(1, c, Fraction(c * c, 2) - len_w)


def partner_class(d: int, ell: int, i: int) -> ChernChar:
    """Quotient of the generic destabilizing sequence: the dual of the
    ``-i`` candidate."""
    _, len_y = _lengths(d, ell, i)
    if len_y < 0:
        raise NegativeLengthError(f"length(Y) = {len_y} < 0 for d={d}, ell={ell}, i={i}")
    return dualize(candidate_class(d, ell, -i))


def ext1_dim_via_euler(
    b: ChernChar,
    a: ChernChar,
    assumptions: frozenset[Assumption] | set[Assumption] = frozenset(),
    reason: Optional[Reason] = None,
) -> Ext1Dim:
    """dim Ext^1(b, a) = -chi(b, a) once Hom and Ext^2 are known to vanish."""
    assumptions = frozenset(assumptions)
    tags = tuple(sorted(assumptions, key=lambda x: x.value))
    if assumptions >= FULL:
        chi = euler_pairing(b, a)
        assert chi.denominator == 1, chi
        return Ext1Dim(int(-chi), tags, reason)
    return Ext1Dim(None, tags, reason)


def _projective(dim: Ext1Dim) -> Optional[int]:
    return None if dim.value is None else dim.value - 1


def _assumption_tags(*dims: Ext1Dim) -> tuple[str, ...]:
    out: dict[str, None] = {}
    for dim in dims:
        for a in dim.assumptions:
            out.setdefault(a.value, None)
        if dim.reason is not None:
            out.setdefault(dim.reason.value, None)
    return tuple(out)


def _hilb_label(len_w: int, len_y: int) -> str:
    if len_w == 0 and len_y == 0:
        return "point"
    if len_w == 1 and len_y == 1:
        return "P2 x P2"
    parts = [f"Hilb^{n}" for n in (len_w, len_y) if n > 0]
    return " x ".join(parts)


def _flip_component(d: int, cand: DestabilizerCandidate) -> Component:
    ell, i = cand.ell, cand.i
    sub = candidate_class(d, ell, i)
    quot = partner_class(d, ell, i)
    reason = Reason.STABILITY_SCHUR if cand.len_W == 0 and cand.len_Y == 0 else Reason.BEL
    above = ext1_dim_via_euler(quot, sub, FULL, reason)
    below = ext1_dim_via_euler(sub, quot, FULL, reason)
    return Component(
        label=f"E_{{{ell},{i}}}",
        sub=sub,
        quot=quot,
        fiber_dim_above=_projective(above),
        fiber_dim_below=_projective(below),
        base_desc=_hilb_label(cand.len_W, cand.len_Y),
        base_dim=2 * (cand.len_W + cand.len_Y),
        assumptions=_assumption_tags(above, below),
    )


def _flip_notes(d: int, ell: int, irreducible: bool) -> tuple[dict[str, object], list[str]]:
    ann: dict[str, object] = {"ell": ell, "irreducible": irreducible}
    notes = []
    if ell == 0:
        ann["E0_minus"] = f"P(H^0(P2, O({d - 3}))^v)"
        ann["E0_minus_dim"] = (d - 1) * (d - 2) // 2 - 1
        notes.append(f"E_0^- contains the Veronese surface X, the {d - 3}-uple embedding of P2")
    else:
        ann["secant_label"] = f"Sec^{ell - 1}X"
    if ell == 1:
        notes.append("E_1^+ and E_1^- are projective bundles over P2 x P2; E_1^+ meets E_0^- in X")
    if ell >= 1 and irreducible:
        notes.append(f"locus on E_0^-: strict transform of Sec^{ell - 1}X")
    elif ell >= 1:
        notes.append(
            f"reducible; E_{{{ell},0}} meets E_0^- along the strict transform of Sec^{ell - 1}X; "
            "triple intersections with E_0^- have no invariant-level description"
        )
    return ann, notes


def _theta_record(d: int, theta: Wall) -> LocusRecord:
    n = d * (d - 3) // 2
    quot = -line_bundle(-3)
    sub = ChernChar(1, d - 3, Fraction(9 - 3 * d, 2))
    above = ext1_dim_via_euler(quot, sub, FULL, Reason.BEL)
    below = ext1_dim_via_euler(sub, quot)
    main = Component(
        label="Theta",
        sub=sub,
        quot=quot,
        fiber_dim_above=_projective(above),
        fiber_dim_below=None,
        base_desc=f"Hilb^{n}",
        base_dim=2 * n,
        assumptions=_assumption_tags(above, below),
    )
    dual_sub, dual_quot = dualize(quot), dualize(sub)
    above_d = ext1_dim_via_euler(dual_quot, dual_sub, FULL, Reason.BEL)
    dual = Component(
        label="Theta^D",
        sub=dual_sub,
        quot=dual_quot,
        fiber_dim_above=_projective(above_d),
        fiber_dim_below=None,
        base_desc=f"Hilb^{n}",
        base_dim=2 * n,
        assumptions=_assumption_tags(above_d),
    )
    m = (d - 3) // 2
    semistable_piece = ChernChar(0, m, Fraction(-(d - 3) * (d + 9), 8))
    return LocusRecord(
        wall=theta,
        destabilizer=line_bundle(0),
        components=[main, dual],
        annotations={
            "n_points": n,
            "chi_sub": int(euler_characteristic(sub)),
            "divisorial": True,
            "strict_transform_caveat": True,
            "below_piece_A": str(semistable_piece),
            "below_piece_G": str(semistable_piece + dualize(semistable_piece)),
        },
        notes=[
            f"sub is ch(I_Z({d - 3})) for Z of length {n}",
            "Theta meets E_0^- in a projective bundle over curves of degree "
            f"{m}; the contracted locus may differ after earlier flips",
            "objects created below are pseudo-stable: O(-3)[1] -> E -> O + G, "
            "G an extension of A by its dual",
        ],
    )


def _collapsing_record(d: int, collapsing: Wall) -> LocusRecord:
    v = total_class(d)
    sub = d * line_bundle(-1)
    quot = v - sub
    dim_vec = to_dimension_vector(v, -1)
    return LocusRecord(
        wall=collapsing,
        destabilizer=sub,
        components=[
            Component(
                label="C",
                sub=sub,
                quot=quot,
                fiber_dim_above=None,
                fiber_dim_below=None,
                base_desc="point",
                base_dim=0,
            )
        ],
        annotations={
            "last_model": f"N(3,{d},{d})",
            "quiver_k": -1,
            "dimension_vector": list(dim_vec.as_tuple()),
            "last_model_dim": beilinson_moduli_dim(dim_vec),
            "moduli_dim": int(1 - euler_pairing(v, v)),
        },
        notes=[
            "polarization (-theta, theta): theta > 0 above, 0 on, < 0 below the wall",
            "moduli on the wall is a point; empty below",
        ],
    )


def build_ledger(d: int, max_rank: Optional[int] = None) -> list[LocusRecord]:
    """Records for every wall of ``(0, d, -3d/2)``, outermost first."""
    _check_d(d)
    if max_rank is None:
        max_rank = default_max_rank(d)
    records = []
    for wall, cands in scan_walls(d, max(max_rank, 1)):
        rank1 = [cd for cd in cands if cd.rank == 1]
        if rank1:
            ell = rank1[0].ell
            components = [_flip_component(d, cd) for cd in sorted(rank1, key=lambda c: c.i)]
            destabilizer = candidate_class(d, ell, 0)
            ann, notes = _flip_notes(d, ell, irreducible=len(rank1) == 1)
        else:
            components = []
            destabilizer = cands[0].cls
            ann, notes = {}, ["higher-rank numerical candidate; actuality not certified"]
        records.append(
            LocusRecord(
                wall=wall,
                destabilizer=destabilizer,
                components=components,
                candidates=cands,
                annotations=ann,
                notes=notes,
            )
        )
    theta, collapsing = special_walls(d)
    records.append(_theta_record(d, theta))
    records.append(_collapsing_record(d, collapsing))
    return records
