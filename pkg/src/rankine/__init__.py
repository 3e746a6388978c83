"""Closed-form analysis of the Rankine vortex."""

from .dispersion import (
    RANKINE_COLUMNS,
    DispersionPoint,
    RankineRoot,
    count_unstable,
    dispersion,
    dispersion_point,
    find_rankine_roots,
)
from .mode import (
    JumpResiduals,
    RankineMode,
    jump_conditions,
    rankine_balance,
    rankine_identity,
    rankine_mode,
)

__all__ = [
    "RANKINE_COLUMNS",
    "DispersionPoint",
    "RankineRoot",
    "count_unstable",
    "dispersion",
    "dispersion_point",
    "find_rankine_roots",
    "JumpResiduals",
    "RankineMode",
    "jump_conditions",
    "rankine_balance",
    "rankine_identity",
    "rankine_mode",
]
