"""Exact Bridgeland stability bookkeeping on the projective plane."""

from wallforge.chern import ChernChar, dualize, euler_characteristic, euler_pairing, twist
from wallforge.stability import ChargeValue, StabPoint, central_charge, compare_slopes, slope
from wallforge.walls import Wall, WallKind, wall_from_pair

__all__ = [
    "ChernChar",
    "ChargeValue",
    "StabPoint",
    "Wall",
    "WallKind",
    "central_charge",
    "compare_slopes",
    "dualize",
    "euler_characteristic",
    "euler_pairing",
    "slope",
    "twist",
    "wall_from_pair",
]

SCHEMA = "wallforge/1"
