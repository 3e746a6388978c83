"""Complex shooting from the origin and from infinity.

The equation is integrated as the first-order system

    u' = p / A - u / r,    p' = B u,

in ``p = A (u' + u/r)``. Both branches start from unit values and carry their
normalization constant separately, so that neither the ``r^{|m|-1}`` factor at the origin
nor the ``exp(-k r)`` factor at infinity is represented in floating point during integration.
"""

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from src.biot_savart import FourierSector
from src.config import get_settings
from src.profiles import VortexProfile
from src.shooting.coefficients import CoefficientFunctions
from src.utils.exceptions import IntegrationError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class Branch(str, Enum):
    FROM_ORIGIN = "from_origin"
    FROM_INFINITY = "from_infinity"


@dataclass(frozen=True, eq=False)
class ShootingSolution:
    """Solution branch on ``[r_start, r_end]`` (or reversed) with dense output.

    The physical solution is ``normalization * (u, p)`` of the stored scaled solution.
    """

    branch: Branch
    coeffs: CoefficientFunctions
    s: complex
    r_start: float
    r_end: float
    normalization: complex
    dense: Callable[[np.ndarray], np.ndarray]
    r: np.ndarray
    u_scaled: np.ndarray
    p_scaled: np.ndarray

    @property
    def u(self) -> np.ndarray:
        return self.normalization * self.u_scaled

    @property
    def p(self) -> np.ndarray:
        return self.normalization * self.p_scaled

    def evaluate(self, r: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
        """Physical ``(u, p)`` inside the integration interval."""
        y = self.dense(np.atleast_1d(np.asarray(r, dtype=float)))
        return self.normalization * y[0], self.normalization * y[1]

    def end_state(self) -> tuple[complex, complex]:
        """Physical ``(u, p)`` at ``r_end``."""
        return complex(self.u[-1]), complex(self.p[-1])

    def residual(self, samples: int = 64) -> float:
        """Relative residual of ``u' = p/A - u/r`` and ``p' = B u`` along the trajectory.

        Derivatives of the dense output are taken by five-point central differences.
        """
        lo, hi = sorted((self.r_start, self.r_end))
        spacing = np.geomspace if lo > 0 else np.linspace
        r = spacing(lo, hi, samples + 2)[1:-1]
        h = 1e-3 * np.minimum(r, hi - r)
        h = np.minimum(h, 1e-3 * (r - lo))
        stencil = [self.dense(r + j * h) for j in (-2, -1, 1, 2)]
        dy = (stencil[0] - 8.0 * stencil[1] + 8.0 * stencil[2] - stencil[3]) / (12.0 * h)
        y = self.dense(r)
        A = self.coeffs.A(r)
        f_u = y[1] / A - y[0] / r
        f_p = self.coeffs.B(r, self.s) * y[0]
        scale = np.abs(f_u) + np.abs(f_p) + np.abs(y[0]) / r + np.abs(y[1]) / r
        return float(np.max((np.abs(dy[0] - f_u) + np.abs(dy[1] - f_p)) / scale))


def outer_radius(k: float) -> float:
    """``R_max = max(30, 12 / |k|)``; the floor alone for ``k = 0``."""
    floor = get_settings().outer_radius_floor
    return floor if k == 0 else max(floor, 12.0 / abs(k))


def on_essential_spectrum(m: int, s: complex) -> bool:
    """``s`` in ``{-i m b : b in [0, 1]}`` (the origin alone for ``m = 0``)."""
    if s.real != 0.0:
        return False
    if m == 0:
        return s == 0
    b = -s.imag / m
    return 0.0 <= b <= 1.0


def _rhs(coeffs: CoefficientFunctions, s: complex) -> Callable[[float, np.ndarray], np.ndarray]:
    def f(r: float, y: np.ndarray) -> np.ndarray:
        A = coeffs.A(r)
        return np.array([y[1] / A - y[0] / r, complex(coeffs.B(r, s)) * y[0]])

    return f


def propagate(
    coeffs: CoefficientFunctions,
    s: complex,
    r_start: float,
    state: tuple[complex, complex],
    r_end: float,
    *,
    branch: Branch,
    normalization: complex = 1.0,
) -> ShootingSolution:
    """Integrate the scaled system from ``r_start`` to ``r_end``.

    Raises:
        IntegrationError: If the integrator fails or produces non-finite values
    """
    settings = get_settings()
    y0 = np.array(state, dtype=complex)
    try:
        result = solve_ivp(
            _rhs(coeffs, s),
            (r_start, r_end),
            y0,
            method="DOP853",
            rtol=settings.ode_rtol,
            atol=settings.ode_atol,
            dense_output=True,
        )
    except (ValueError, ZeroDivisionError, FloatingPointError) as e:
        logger.error(
            "Shooting integration raised", s=str(s), r_start=r_start, r_end=r_end, error=str(e)
        )
        raise IntegrationError(
            "Shooting integration failed",
            details={"s": str(s), "m": coeffs.m, "k": coeffs.k, "r_start": r_start, "r_end": r_end},
        )
    if not result.success or not np.all(np.isfinite(result.y)):
        logger.error("Shooting integration failed", s=str(s), message=result.message)
        raise IntegrationError(
            "Shooting integration did not reach the end point",
            details={
                "s": str(s),
                "m": coeffs.m,
                "k": coeffs.k,
                "r_start": r_start,
                "r_end": r_end,
                "message": result.message,
            },
        )
    return ShootingSolution(
        branch=branch,
        coeffs=coeffs,
        s=s,
        r_start=r_start,
        r_end=r_end,
        normalization=complex(normalization),
        dense=result.sol,
        r=result.t,
        u_scaled=result.y[0],
        p_scaled=result.y[1],
    )


def origin_seed(
    coeffs: CoefficientFunctions, s: complex, r0: float
) -> tuple[tuple[complex, complex], float]:
    """Scaled ``(u, p)`` at ``r0`` of the regular solution ``u = r^e (1 + c r^2)`` and ``r0^e``."""
    e = coeffs.origin_exponent()
    c = coeffs.origin_correction(r0, s)
    u = 1.0 + c * r0**2
    du = (e / r0) * (1.0 + c * r0**2) + 2.0 * c * r0
    p = coeffs.A(r0) * (du + u / r0)
    return (complex(u), complex(p)), float(r0**e)


def infinity_seed(
    coeffs: CoefficientFunctions, s: complex, R: float
) -> tuple[tuple[complex, complex], float]:
    """Scaled ``(u, p)`` at ``R`` of the decaying solution and its normalization.

    For ``k != 0`` the decaying branch of ``(r^{1/2} u)'' ~ D r^{1/2} u`` gives
    ``u'/u = -1/(2R) - sqrt(D)`` with ``u(R) = R^{-1/2} exp(-k R)``; for ``k = 0`` the
    solution is ``u = r^{-|m|-1}``.
    """
    if coeffs.k == 0:
        n = abs(coeffs.m) + 1
        log_u = -n / R
        scale = float(R ** (-n))
    else:
        log_u = -0.5 / R - np.sqrt(coeffs.D_infinity(R, s))
        scale = float(R**-0.5 * np.exp(-abs(coeffs.k) * R))
    p = coeffs.A(R) * (log_u + 1.0 / R)
    return (1.0 + 0j, complex(p)), scale


def _check_sector(sector: FourierSector, s: complex, operation: str) -> None:
    if sector.m == 0 and sector.k == 0:
        raise ValidationError(f"{operation} requires m != 0 or k != 0", details={"s": str(s)})
    if on_essential_spectrum(sector.m, s):
        raise ValidationError(
            f"{operation} requires s off the essential spectrum",
            details={"m": sector.m, "k": sector.k, "s": str(s)},
        )


def integrate_from_origin(
    sector: FourierSector,
    profile: VortexProfile,
    s: complex,
    r_match: float,
    *,
    r0: float | None = None,
) -> ShootingSolution:
    """Regular solution with ``r^{1-|m|} u(r) -> 1`` as ``r -> 0``, advanced to ``r_match``.

    Raises:
        ValidationError: If ``s`` lies on the essential spectrum or ``r_match <= r0``
        IntegrationError: If the integrator fails
    """
    s = complex(s)
    _check_sector(sector, s, "integrate_from_origin")
    r0 = get_settings().origin_radius if r0 is None else r0
    if r_match <= r0:
        raise ValidationError(
            "r_match must exceed the seed radius", details={"r_match": r_match, "r0": r0}
        )
    coeffs = CoefficientFunctions(sector, profile)
    state, scale = origin_seed(coeffs, s, r0)
    return propagate(coeffs, s, r0, state, r_match, branch=Branch.FROM_ORIGIN, normalization=scale)


def integrate_from_infinity(
    sector: FourierSector,
    profile: VortexProfile,
    s: complex,
    r_match: float,
    *,
    r_max: float | None = None,
) -> ShootingSolution:
    """Decaying solution with ``r^{1/2} e^{k r} u(r) = 1`` at ``R_max``, integrated inward.

    Raises:
        ValidationError: If ``s`` lies on the essential spectrum or ``r_match >= R_max``
        IntegrationError: If the integrator fails
    """
    s = complex(s)
    _check_sector(sector, s, "integrate_from_infinity")
    R = outer_radius(sector.k) if r_max is None else r_max
    if r_match >= R:
        raise ValidationError(
            "r_match lies beyond the outer radius", details={"r_match": r_match, "r_max": R}
        )
    coeffs = CoefficientFunctions(sector, profile)
    state, scale = infinity_seed(coeffs, s, R)
    return propagate(coeffs, s, R, state, r_match, branch=Branch.FROM_INFINITY, normalization=scale)


@lru_cache(maxsize=64)
def half_radius(profile: VortexProfile) -> float:
    """Radius where ``Omega = 1/2``."""
    return profile.radius_where_omega(0.5)


def matching_radius(sector: FourierSector, profile: VortexProfile, s: complex) -> float:
    """``Omega(r_match) = 1/2``, moved at least ``critical_gap`` away from a near-critical radius."""
    r_match = half_radius(profile)
    if sector.m == 0:
        return r_match
    b = -complex(s).imag / sector.m
    if not 0.0 < b < 1.0:
        return r_match
    gap = get_settings().critical_gap
    r_bar = profile.radius_where_omega(b)
    if abs(r_match - r_bar) >= gap:
        return r_match
    candidates = [r for r in (r_bar - gap, r_bar + gap) if r > 0.25 * r_bar]
    return min(candidates, key=lambda r: abs(r - r_match))
