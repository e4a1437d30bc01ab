"""Command-line entry point: ``wallforge <command> [flags]``.

Exit codes: 0 success, 1 usage or parse error, 2 mathematically
degenerate input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from wallforge import SCHEMA
from wallforge.chern import ChernChar, ChernParseError, dualize, format_rational, parse_rational
from wallforge.flipledger import build_ledger
from wallforge.quiver import NonIntegralError, quiver_regions_containing, to_dimension_vector
from wallforge.report import (
    candidates_to_csv,
    dumps,
    ledger_to_csv,
    ledger_to_json,
    render_svg,
    wall_to_json,
)
from wallforge.stability import NotInHeartConeError, StabPoint, central_charge, slope
from wallforge.walls import (
    WallKind,
    default_max_rank,
    enumerate_flip_candidates,
    scan_walls,
    wall_from_pair,
)

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2
ENV_MAX_RANK = "WALLFORGE_MAX_RANK"
GEOMETRY_COMMANDS = {"wall", "scan", "ledger"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        # let values such as -3/2,1 or -1,2,-2 through as arguments
        self._negative_number_matcher = re.compile(r"^-\d[\d/,\-]*$")

    def error(self, message: str) -> None:  # argparse defaults to exit 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class ReportConfig:
    format: str
    out_path: Optional[Path]
    max_rank: Optional[int]  # None means AUTO
    svg_scale: Fraction


def _chern(text: str) -> ChernChar:
    try:
        return ChernChar.parse(text)
    except (ChernParseError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _point(text: str) -> StabPoint:
    try:
        return StabPoint.parse(text)
    except (ChernParseError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _max_rank(text: str) -> Optional[int]:
    if str(text).upper() == "AUTO":
        return None
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"max rank must be an integer or AUTO: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError("max rank must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wallforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json", "csv", "svg"))
        p.add_argument("--out", type=Path, help="write here instead of stdout")
        p.add_argument("--config", type=Path, help="JSON file with the same keys as the flags")

    p = sub.add_parser("charge", help="central charge and slope of a class")
    p.add_argument("--v", type=_chern, required=True)
    p.add_argument("--p", type=_point, required=True)
    common(p)

    p = sub.add_parser("wall", help="potential wall of a sub/total pair")
    p.add_argument("--a", type=_chern, required=True)
    p.add_argument("--e", type=_chern, required=True)
    p.add_argument("--svg-scale")
    common(p)

    for name, hlp in (("scan", "flip candidates up to a rank"), ("ledger", "full wall ledger")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--max-rank", type=_max_rank)
        p.add_argument("--svg-scale")
        common(p)

    p = sub.add_parser("dualize", help="class of the derived dual")
    p.add_argument("--v", type=_chern, required=True)
    common(p)

    p = sub.add_parser("quiver", help="dimension vector in A(k)")
    p.add_argument("--v", type=_chern, required=True)
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--k", type=int)
    where.add_argument("--p", type=_point)
    common(p)
    return parser


def resolve_config(args: argparse.Namespace) -> ReportConfig:
    """Flags win over the config file; the environment only replaces AUTO."""
    file_cfg: dict = {}
    if args.config is not None:
        try:
            file_cfg = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
        file_cfg = {k.replace("-", "_"): v for k, v in file_cfg.items()}

    def pick(name: str, default=None):
        value = getattr(args, name, None)
        return value if value is not None else file_cfg.get(name, default)

    default_fmt = "json" if args.command in {"scan", "ledger"} else "text"
    fmt = pick("format", default_fmt)
    if fmt == "svg" and args.command not in GEOMETRY_COMMANDS:
        raise UsageError(f"svg output is only available for {sorted(GEOMETRY_COMMANDS)}")
    if fmt == "csv" and args.command not in {"scan", "ledger"}:
        raise UsageError("csv output is only available for scan and ledger")

    max_rank = getattr(args, "max_rank", None)
    if max_rank is None and "max_rank" in file_cfg:
        try:
            max_rank = _max_rank(file_cfg["max_rank"])
        except argparse.ArgumentTypeError as exc:
            raise UsageError(str(exc)) from exc
    if max_rank is None and os.environ.get(ENV_MAX_RANK):
        try:
            max_rank = _max_rank(os.environ[ENV_MAX_RANK])
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"{ENV_MAX_RANK}: {exc}") from exc

    try:
        scale = parse_rational(str(pick("svg_scale", "40")))
    except ChernParseError as exc:
        raise UsageError(str(exc)) from exc
    if scale <= 0:
        raise UsageError("svg scale must be positive")
    out = pick("out")
    return ReportConfig(fmt, Path(out) if out is not None else None, max_rank, scale)


def _emit(text: str, cfg: ReportConfig) -> None:
    if cfg.out_path is None:
        sys.stdout.write(text)
    else:
        cfg.out_path.write_text(text)


def _check_d(d: int) -> None:
    if d < 5 or d % 2 == 0:
        raise UsageError(f"d must be odd and >= 5, got {d}")


def cmd_charge(args: argparse.Namespace, cfg: ReportConfig) -> int:
    z = central_charge(args.v, args.p)
    try:
        mu = slope(args.v, args.p)
        mu_text = "inf" if mu == math.inf else format_rational(mu)
    except NotInHeartConeError:
        mu_text = "ERROR(not-in-cone)"
    if cfg.format == "json":
        _emit(dumps({"schema": SCHEMA, "v": str(args.v), "p": str(args.p),
                     "re": format_rational(z.re), "im": format_rational(z.im),
                     "slope": mu_text}), cfg)
    else:
        _emit(f"re {format_rational(z.re)}\nim {format_rational(z.im)}\nslope {mu_text}\n", cfg)
    return EXIT_OK


def cmd_wall(args: argparse.Namespace, cfg: ReportConfig) -> int:
    w = wall_from_pair(args.a, args.e)
    if cfg.format == "json":
        _emit(dumps({"schema": SCHEMA, "wall": wall_to_json(w)}), cfg)
    elif cfg.format == "svg":
        _emit(render_svg([w], cfg.svg_scale), cfg)
    else:
        lines = [f"kind {w.kind.value}"]
        if w.kind is WallKind.SEMICIRCLE:
            lines += [f"center {format_rational(w.center)}",
                      f"radius_sq {format_rational(w.radius_sq)}"]
        elif w.kind is WallKind.VERTICAL_LINE:
            lines.append(f"line_s {format_rational(w.line_s)}")
        _emit("\n".join(lines) + "\n", cfg)
    return EXIT_DEGENERATE if w.kind is WallKind.DEGENERATE_ALL else EXIT_OK


def cmd_scan(args: argparse.Namespace, cfg: ReportConfig) -> int:
    _check_d(args.d)
    max_rank = cfg.max_rank if cfg.max_rank is not None else default_max_rank(args.d)
    max_rank = max(max_rank, 1)
    if cfg.format == "svg":
        _emit(render_svg([w for w, _ in scan_walls(args.d, max_rank)], cfg.svg_scale), cfg)
        return EXIT_OK
    cands = enumerate_flip_candidates(args.d, max_rank)
    if cfg.format == "csv":
        _emit(candidates_to_csv(cands), cfg)
    elif cfg.format == "json":
        walls = [wall_to_json(w, cs) for w, cs in scan_walls(args.d, max_rank)]
        _emit(dumps({"schema": SCHEMA, "d": args.d, "max_rank": max_rank, "walls": walls}), cfg)
    else:
        rows = [
            f"r={c.rank} chi={c.chi} class={c.cls} radius_sq={format_rational(c.radius_sq)} "
            f"{c.actuality.value}"
            for c in cands
        ]
        _emit("\n".join(rows) + "\n", cfg)
    return EXIT_OK


def cmd_ledger(args: argparse.Namespace, cfg: ReportConfig) -> int:
    _check_d(args.d)
    max_rank = cfg.max_rank if cfg.max_rank is not None else default_max_rank(args.d)
    max_rank = max(max_rank, 1)
    records = build_ledger(args.d, max_rank)
    if cfg.format == "svg":
        _emit(render_svg([r.wall for r in records], cfg.svg_scale), cfg)
    elif cfg.format == "csv":
        _emit(ledger_to_csv(records), cfg)
    elif cfg.format == "json":
        _emit(dumps(ledger_to_json(args.d, max_rank, records)), cfg)
    else:
        rows = [
            f"radius_sq={format_rational(r.wall.radius_sq)} destabilizer={r.destabilizer} "
            f"components={len(r.components)} tags={','.join(r.wall.tags)}"
            for r in records
        ]
        _emit("\n".join(rows) + "\n", cfg)
    return EXIT_OK


def cmd_dualize(args: argparse.Namespace, cfg: ReportConfig) -> int:
    dv = dualize(args.v)
    if cfg.format == "json":
        _emit(dumps({"schema": SCHEMA, "v": str(args.v), "dual": str(dv)}), cfg)
    else:
        _emit(f"{dv}\n", cfg)
    return EXIT_OK


def cmd_quiver(args: argparse.Namespace, cfg: ReportConfig) -> int:
    ks = [args.k] if args.k is not None else sorted(quiver_regions_containing(args.p))
    if not ks:
        sys.stderr.write(f"wallforge: {args.p} lies in no quiver region\n")
        return EXIT_DEGENERATE
    results = []
    for k in ks:
        try:
            n = to_dimension_vector(args.v, k)
        except NonIntegralError as exc:
            sys.stderr.write(f"wallforge: {exc}\n")
            return EXIT_DEGENERATE
        results.append(n)
    if cfg.format == "json":
        _emit(dumps({"schema": SCHEMA, "v": str(args.v),
                     "vectors": [{"k": n.k, "n": list(n.as_tuple())} for n in results]}), cfg)
    elif args.k is not None:
        _emit(",".join(str(x) for x in results[0].as_tuple()) + "\n", cfg)
    else:
        _emit("".join(f"k={n.k} {','.join(str(x) for x in n.as_tuple())}\n" for n in results), cfg)
    return EXIT_OK


COMMANDS = {
    "charge": cmd_charge,
    "wall": cmd_wall,
    "scan": cmd_scan,
    "ledger": cmd_ledger,
    "dualize": cmd_dualize,
    "quiver": cmd_quiver,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"wallforge: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
