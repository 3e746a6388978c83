"""Vorticity profiles, Q-space reconstruction and admissibility checks."""

from .builtin import (
    KaufmannScullyProfile,
    LambOseenProfile,
    RankineProfile,
    ReferenceW1Profile,
    SampledVorticityProfile,
    lamb_oseen_j_prime,
    make_builtin,
)
from .grid import RadialGrid, barycentric_derivative, clenshaw_curtis_weights
from .models import ProfileKind, VortexProfile, j_of
from .qfunction import (
    LipschitzReport,
    QFunction,
    ReconstructedProfile,
    check_delta_bounds,
    homotopy,
    interpolate_q,
    lipschitz_check,
    mollify_q,
    profile_from_q,
    q_from_profile,
)
from .serialization import ProfileRecord, profile_from_json, profile_record, profile_to_json
from .validation import CheckResult, ValidationReport, validate_class_q, validate_class_w

__all__ = [
    "KaufmannScullyProfile",
    "LambOseenProfile",
    "RankineProfile",
    "ReferenceW1Profile",
    "SampledVorticityProfile",
    "lamb_oseen_j_prime",
    "make_builtin",
    "RadialGrid",
    "barycentric_derivative",
    "clenshaw_curtis_weights",
    "ProfileKind",
    "VortexProfile",
    "j_of",
    "LipschitzReport",
    "QFunction",
    "ReconstructedProfile",
    "check_delta_bounds",
    "homotopy",
    "interpolate_q",
    "lipschitz_check",
    "mollify_q",
    "profile_from_q",
    "q_from_profile",
    "ProfileRecord",
    "profile_from_json",
    "profile_record",
    "profile_to_json",
    "CheckResult",
    "ValidationReport",
    "validate_class_q",
    "validate_class_w",
]
