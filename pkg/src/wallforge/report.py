"""JSON, CSV and SVG emission for walls, candidates and ledgers.

Rationals cross this boundary as ``"p/q"`` strings and classes in the
``r,c1,ch2`` encoding.  SVG is the only place floats appear.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Optional, Sequence

from wallforge import SCHEMA
from wallforge.chern import ChernChar, format_rational, parse_rational
from wallforge.flipledger import Component, LocusRecord
from wallforge.walls import Actuality, DestabilizerCandidate, Wall, WallKind

LEDGER_CSV_COLUMNS = (
    "schema", "record", "kind", "center", "radius_sq", "tags", "destabilizer",
    "component", "sub", "quot", "fiber_dim_above", "fiber_dim_below",
    "base_desc", "base_dim", "assumptions",
)
SCAN_CSV_COLUMNS = (
    "schema", "rank", "chi", "class", "ell", "i", "len_W", "len_Y", "radius_sq", "actuality",
)


def _q(x: Optional[Fraction]) -> Optional[str]:
    return None if x is None else format_rational(x)


def _unq(x: Optional[str]) -> Optional[Fraction]:
    return None if x is None else parse_rational(x)


def candidate_to_json(c: DestabilizerCandidate) -> dict[str, Any]:
    return {
        "cls": str(c.cls),
        "rank": c.rank,
        "chi": c.chi,
        "ell": c.ell,
        "i": c.i,
        "len_W": c.len_W,
        "len_Y": c.len_Y,
        "radius_sq": _q(c.radius_sq),
        "actuality": c.actuality.value,
    }


def candidate_from_json(obj: dict[str, Any]) -> DestabilizerCandidate:
    return DestabilizerCandidate(
        cls=ChernChar.parse(obj["cls"]),
        rank=obj["rank"],
        chi=obj["chi"],
        radius_sq=_unq(obj["radius_sq"]),
        actuality=Actuality(obj["actuality"]),
        ell=obj["ell"],
        i=obj["i"],
        len_W=obj["len_W"],
        len_Y=obj["len_Y"],
    )


def wall_to_json(w: Wall, candidates: Sequence[DestabilizerCandidate] = ()) -> dict[str, Any]:
    out: dict[str, Any] = {
        "kind": w.kind.value,
        "center": _q(w.center),
        "radius_sq": _q(w.radius_sq),
    }
    if w.line_s is not None:
        out["line_s"] = _q(w.line_s)
    out["pair"] = [str(w.pair[0]), str(w.pair[1])]
    out["tags"] = list(w.tags)
    out["candidates"] = [candidate_to_json(c) for c in candidates]
    return out


def wall_from_json(obj: dict[str, Any]) -> tuple[Wall, list[DestabilizerCandidate]]:
    wall = Wall(
        kind=WallKind(obj["kind"]),
        pair=(ChernChar.parse(obj["pair"][0]), ChernChar.parse(obj["pair"][1])),
        center=_unq(obj.get("center")),
        radius_sq=_unq(obj.get("radius_sq")),
        line_s=_unq(obj.get("line_s")),
        tags=tuple(obj.get("tags", ())),
    )
    return wall, [candidate_from_json(c) for c in obj.get("candidates", ())]


def component_to_json(c: Component) -> dict[str, Any]:
    return {
        "label": c.label,
        "sub": str(c.sub),
        "quot": str(c.quot),
        "fiber_dim_above": c.fiber_dim_above,
        "fiber_dim_below": c.fiber_dim_below,
        "base_desc": c.base_desc,
        "base_dim": c.base_dim,
        "assumptions": list(c.assumptions),
    }


def component_from_json(obj: dict[str, Any]) -> Component:
    return Component(
        label=obj["label"],
        sub=ChernChar.parse(obj["sub"]),
        quot=ChernChar.parse(obj["quot"]),
        fiber_dim_above=obj["fiber_dim_above"],
        fiber_dim_below=obj["fiber_dim_below"],
        base_desc=obj["base_desc"],
        base_dim=obj["base_dim"],
        assumptions=tuple(obj["assumptions"]),
    )


def record_to_json(r: LocusRecord) -> dict[str, Any]:
    return {
        "wall": wall_to_json(r.wall, r.candidates),
        "destabilizer": str(r.destabilizer),
        "components": [component_to_json(c) for c in r.components],
        "annotations": r.annotations,
        "notes": list(r.notes),
    }


def record_from_json(obj: dict[str, Any]) -> LocusRecord:
    wall, cands = wall_from_json(obj["wall"])
    return LocusRecord(
        wall=wall,
        destabilizer=ChernChar.parse(obj["destabilizer"]),
        components=[component_from_json(c) for c in obj["components"]],
        candidates=cands,
        annotations=dict(obj["annotations"]),
        notes=list(obj["notes"]),
    )


def ledger_to_json(d: int, max_rank: int, records: Sequence[LocusRecord]) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "d": d,
        "max_rank": max_rank,
        "records": [record_to_json(r) for r in records],
    }


def ledger_from_json(obj: dict[str, Any]) -> tuple[int, int, list[LocusRecord]]:
    if obj.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {obj.get('schema')!r}")
    return obj["d"], obj["max_rank"], [record_from_json(r) for r in obj["records"]]


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def _csv_text(columns: Sequence[str], rows: list[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if row.get(k) is None else row[k] for k in columns})
    return buf.getvalue()


def ledger_to_csv(records: Sequence[LocusRecord]) -> str:
    rows = []
    for idx, r in enumerate(records):
        base = {
            "schema": SCHEMA,
            "record": idx,
            "kind": r.wall.kind.value,
            "center": _q(r.wall.center),
            "radius_sq": _q(r.wall.radius_sq),
            "tags": ";".join(r.wall.tags),
            "destabilizer": str(r.destabilizer),
        }
        if not r.components:
            rows.append(base)
        for c in r.components:
            rows.append(
                base
                | {
                    "component": c.label,
                    "sub": str(c.sub),
                    "quot": str(c.quot),
                    "fiber_dim_above": c.fiber_dim_above,
                    "fiber_dim_below": c.fiber_dim_below,
                    "base_desc": c.base_desc,
                    "base_dim": c.base_dim,
                    "assumptions": ";".join(c.assumptions),
                }
            )
    return _csv_text(LEDGER_CSV_COLUMNS, rows)


def candidates_to_csv(cands: Sequence[DestabilizerCandidate]) -> str:
    rows = [
        {"schema": SCHEMA, "class": str(c.cls)}
        | {k: v for k, v in candidate_to_json(c).items() if k != "cls"}
        for c in cands
    ]
    return _csv_text(SCAN_CSV_COLUMNS, rows)


# ---------------------------------------------------------------------------
# SVG

_HIGHLIGHT = {"THETA": "#c0392b", "COLLAPSING": "#2471a3"}


def _f(x: float) -> str:
    return f"{x:.6f}"


def render_svg(walls: Sequence[Wall], scale: Fraction = Fraction(40)) -> str:
    """Draw semicircles and vertical lines in the (s, t) half-plane.

    Output depends only on the walls and ``scale``; coordinates carry six
    decimals.
    """
    if scale <= 0:
        raise ValueError("svg scale must be positive")
    k = float(scale)
    arcs = [w for w in walls if w.kind is WallKind.SEMICIRCLE]
    lines = [w for w in walls if w.kind is WallKind.VERTICAL_LINE]
    xs = [float(w.line_s) for w in lines]
    top = 1.0
    for w in arcs:
        r = math.sqrt(w.radius_sq)
        xs += [float(w.center) - r, float(w.center) + r]
        top = max(top, r)
    if not xs:
        xs = [-1.0, 1.0]
    s_min, s_max = math.floor(min(xs)) - 1, math.ceil(max(xs)) + 1
    margin = 20.0
    width = (s_max - s_min) * k + 2 * margin
    height = (math.ceil(top) + 1) * k + 2 * margin
    base_y = height - margin

    def px(s: float) -> float:
        return margin + (s - s_min) * k

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        f'<line x1="{_f(margin)}" y1="{_f(base_y)}" x2="{_f(width - margin)}" y2="{_f(base_y)}" '
        'stroke="#000000" stroke-width="1"/>',
    ]
    for s in range(s_min, s_max + 1):
        out.append(
            f'<text x="{_f(px(s))}" y="{_f(base_y + 14)}" font-size="10" '
            f'text-anchor="middle">{s}</text>'
        )
    for w in arcs:
        r = math.sqrt(w.radius_sq)
        color = next((_HIGHLIGHT[t] for t in w.tags if t in _HIGHLIGHT), "#555555")
        width_attr = "2" if color != "#555555" else "1"
        x0, x1 = px(float(w.center) - r), px(float(w.center) + r)
        rr = r * k
        out.append(
            f'<path d="M {_f(x0)} {_f(base_y)} A {_f(rr)} {_f(rr)} 0 0 1 {_f(x1)} {_f(base_y)}" '
            f'fill="none" stroke="{color}" stroke-width="{width_attr}" '
            f'data-center="{format_rational(w.center)}" '
            f'data-radius-sq="{format_rational(w.radius_sq)}"/>'
        )
        out.append(
            f'<text x="{_f(px(float(w.center)))}" y="{_f(base_y - rr - 3)}" font-size="9" '
            f'text-anchor="middle" fill="{color}">{format_rational(w.radius_sq)}</text>'
        )
    for w in lines:
        x = px(float(w.line_s))
        out.append(
            f'<line x1="{_f(x)}" y1="{_f(base_y)}" x2="{_f(x)}" y2="{_f(margin)}" '
            f'stroke="#555555" stroke-width="1" data-line-s="{format_rational(w.line_s)}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
