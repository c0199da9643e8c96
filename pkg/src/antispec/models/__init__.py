"""Model Hamiltonians and oracles."""

from .khare_mandal import KhareMandalModel, KhareMandalState, khare_mandal_verify
from .planted import BlockSpec, PlantedPlan, build_planted, random_plan, report_mismatches
from .square_well import (
    MatchingSolution,
    SquareWellModel,
    build_square_well,
    build_square_well_real,
    hermitean_limit_levels,
    matching_function,
    square_well_matching,
)

__all__ = [
    "KhareMandalModel",
    "KhareMandalState",
    "khare_mandal_verify",
    "BlockSpec",
    "PlantedPlan",
    "build_planted",
    "random_plan",
    "report_mismatches",
    "MatchingSolution",
    "SquareWellModel",
    "build_square_well",
    "build_square_well_real",
    "hermitean_limit_levels",
    "matching_function",
    "square_well_matching",
]
