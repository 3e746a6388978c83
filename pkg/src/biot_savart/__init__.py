"""Biot-Savart law in a Fourier sector."""

from .fields import FIELD_COLUMNS, FourierSector, RadialField, SectorOperators, random_vorticity
from .solver import (
    EllipticSolver,
    check_divergence,
    elliptic_solver,
    energy_estimate_ratio,
    source_term,
    velocity_from_vorticity,
)

__all__ = [
    "FIELD_COLUMNS",
    "FourierSector",
    "RadialField",
    "SectorOperators",
    "random_vorticity",
    "EllipticSolver",
    "check_divergence",
    "elliptic_solver",
    "energy_estimate_ratio",
    "source_term",
    "velocity_from_vorticity",
]
