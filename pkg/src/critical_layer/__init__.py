"""Local analysis of the radial equation at the critical radius."""

from .connection import (
    ConnectionResult,
    LimitSequence,
    UpperSolutionReport,
    connection_coefficients,
    limit_sequence,
    upper_solution_check,
)
from .frobenius import (
    FrobeniusExpansion,
    RootCase,
    critical_radius,
    equation_residual,
    frobenius_series,
    indicial_roots,
    singular_solutions,
)

__all__ = [
    "ConnectionResult",
    "LimitSequence",
    "UpperSolutionReport",
    "connection_coefficients",
    "limit_sequence",
    "upper_solution_check",
    "FrobeniusExpansion",
    "RootCase",
    "critical_radius",
    "equation_residual",
    "frobenius_series",
    "indicial_roots",
    "singular_solutions",
]
