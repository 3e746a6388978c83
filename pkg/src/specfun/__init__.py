"""Modified Bessel functions and the critical-layer limit integral."""

from .bessel import (
    BesselEval,
    ascending_series_i,
    bessel_ik,
    bessel_ik_scaled,
    crossover_discrepancy,
    i_log_derivative,
    k_integral,
    k_log_derivative,
    reflection_residual,
)
from .limits import (
    angle_integral,
    angle_integral_exact,
    bessel_limit_integral,
    bessel_limit_value,
    small_z_constants,
)

__all__ = [
    "BesselEval",
    "ascending_series_i",
    "bessel_ik",
    "bessel_ik_scaled",
    "crossover_discrepancy",
    "i_log_derivative",
    "k_integral",
    "k_log_derivative",
    "reflection_residual",
    "angle_integral",
    "angle_integral_exact",
    "bessel_limit_integral",
    "bessel_limit_value",
    "small_z_constants",
]
