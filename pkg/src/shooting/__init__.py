"""Complex shooting for the radial eigenvalue equation."""

from .coefficients import CoefficientFunctions
from .contour import (
    ContourRoot,
    Rectangle,
    ScanResult,
    locate_zeros,
    robust_winding,
    scan_unstable,
    winding_number,
)
from .identities import (
    HGResult,
    HowardResiduals,
    RadialMode,
    TrialFunction,
    axisym_identity,
    hg_criterion,
    howard_identity_residuals,
    radial_nodes,
    twodim_identity,
    verify_b_lower_bound,
    weighted_identity,
)
from .integrate import (
    Branch,
    ShootingSolution,
    half_radius,
    infinity_seed,
    integrate_from_infinity,
    integrate_from_origin,
    matching_radius,
    on_essential_spectrum,
    origin_seed,
    outer_radius,
    propagate,
)
from .kelvin import KELVIN_COLUMNS, KelvinMode, find_axisymmetric_modes, find_kelvin_modes
from .miss import Eigenfunction, MissEvaluation, eigenfunction, evaluate_miss, miss

__all__ = [
    "CoefficientFunctions",
    "ContourRoot",
    "Rectangle",
    "ScanResult",
    "locate_zeros",
    "robust_winding",
    "scan_unstable",
    "winding_number",
    "HGResult",
    "HowardResiduals",
    "RadialMode",
    "TrialFunction",
    "axisym_identity",
    "hg_criterion",
    "howard_identity_residuals",
    "radial_nodes",
    "twodim_identity",
    "verify_b_lower_bound",
    "weighted_identity",
    "Branch",
    "ShootingSolution",
    "half_radius",
    "infinity_seed",
    "integrate_from_infinity",
    "integrate_from_origin",
    "matching_radius",
    "on_essential_spectrum",
    "origin_seed",
    "outer_radius",
    "propagate",
    "KELVIN_COLUMNS",
    "KelvinMode",
    "find_axisymmetric_modes",
    "find_kelvin_modes",
    "Eigenfunction",
    "MissEvaluation",
    "eigenfunction",
    "evaluate_miss",
    "miss",
]
