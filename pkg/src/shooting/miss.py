"""Wronskian matching of the two shooting branches and composite eigenfunctions."""

from dataclasses import dataclass

import numpy as np

from src.biot_savart import FourierSector
from src.profiles import VortexProfile
from src.shooting.coefficients import CoefficientFunctions
from src.shooting.integrate import (
    ShootingSolution,
    integrate_from_infinity,
    integrate_from_origin,
    matching_radius,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class MissEvaluation:
    """``u_0 p_inf - u_inf p_0 = A (u_0 u_inf' - u_0' u_inf)`` at the matching radius.

    The value scales like ``1 / r_match``; ``invariant`` multiplies it back by the radius and
    does not depend on ``r_match``. ``relative`` divides by the size of the two products.
    """

    s: complex
    r_match: float
    value: complex
    scale: float

    @property
    def invariant(self) -> complex:
        return self.r_match * self.value

    @property
    def relative(self) -> float:
        return abs(self.value) / self.scale if self.scale > 0 else float("inf")


def _branches(
    sector: FourierSector,
    profile: VortexProfile,
    s: complex,
    r_match: float | None,
) -> tuple[ShootingSolution, ShootingSolution, float]:
    r_match = matching_radius(sector, profile, s) if r_match is None else r_match
    origin = integrate_from_origin(sector, profile, s, r_match)
    infinity = integrate_from_infinity(sector, profile, s, r_match)
    return origin, infinity, r_match


def evaluate_miss(
    sector: FourierSector,
    profile: VortexProfile,
    s: complex,
    r_match: float | None = None,
) -> MissEvaluation:
    """Miss function with its scale.

    Raises:
        ValidationError: If ``s`` lies on the essential spectrum
        IntegrationError: If either branch fails
    """
    s = complex(s)
    origin, infinity, r_match = _branches(sector, profile, s, r_match)
    u0, p0 = origin.end_state()
    ui, pi = infinity.end_state()
    value = u0 * pi - ui * p0
    scale = abs(u0 * pi) + abs(ui * p0)
    logger.debug("Miss evaluated", m=sector.m, k=sector.k, s=str(s), value=abs(value))
    return MissEvaluation(s=s, r_match=r_match, value=complex(value), scale=float(scale))


def miss(
    sector: FourierSector, profile: VortexProfile, s: complex, r_match: float | None = None
) -> complex:
    """Zero exactly at eigenvalues of the sector operator."""
    return evaluate_miss(sector, profile, s, r_match).value


@dataclass(frozen=True, eq=False)
class Eigenfunction:
    """Composite radial velocity on ``(0, inf)``.

    Below the seed radius the two-term origin expansion is used, between the seed radius and
    ``r_match`` the origin branch, up to ``R_max`` the infinity branch rescaled to be
    continuous at ``r_match``, and beyond ``R_max`` the decaying asymptotics.
    """

    coeffs: CoefficientFunctions
    s: complex
    origin: ShootingSolution
    infinity: ShootingSolution
    r_match: float
    scale_infinity: complex

    @property
    def r0(self) -> float:
        return self.origin.r_start

    @property
    def r_max(self) -> float:
        return self.infinity.r_start

    def evaluate(self, r: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
        """``(u, p)`` with ``p = A (u' + u/r)``."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        u = np.zeros(r.shape, dtype=complex)
        p = np.zeros(r.shape, dtype=complex)

        inner = r < self.r0
        if np.any(inner):
            e = self.coeffs.origin_exponent()
            c = self.coeffs.origin_correction(self.r0, self.s)
            ri = r[inner]
            u[inner] = ri**e * (1.0 + c * ri**2)
            du = e * ri ** (e - 1) * (1.0 + c * ri**2) + 2.0 * c * ri ** (e + 1)
            p[inner] = self.coeffs.A(ri) * (du + u[inner] / ri)

        mid = (r >= self.r0) & (r <= self.r_match)
        if np.any(mid):
            u[mid], p[mid] = self.origin.evaluate(r[mid])

        outer = (r > self.r_match) & (r <= self.r_max)
        if np.any(outer):
            ui, pi = self.infinity.evaluate(r[outer])
            u[outer], p[outer] = self.scale_infinity * ui, self.scale_infinity * pi

        far = r > self.r_max
        if np.any(far):
            u_end, p_end = self.infinity.evaluate(self.r_max)
            k = abs(self.coeffs.k)
            rf = r[far]
            if k == 0:
                n = abs(self.coeffs.m) + 1
                decay = (self.r_max / rf) ** n
            else:
                decay = np.sqrt(self.r_max / rf) * np.exp(-k * (rf - self.r_max))
            u[far] = self.scale_infinity * u_end[0] * decay
            p[far] = self.scale_infinity * p_end[0] * decay
        return u, p

    def values(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``(u, u' + u/r)``."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        u, p = self.evaluate(r)
        return u, p / self.coeffs.A(r)

    def d_star(self, r: np.ndarray) -> np.ndarray:
        """``u' + u/r = p / A``."""
        return self.values(r)[1]


def eigenfunction(
    sector: FourierSector,
    profile: VortexProfile,
    s: complex,
    r_match: float | None = None,
) -> Eigenfunction:
    """Composite eigenfunction at ``s``; continuous at ``r_match`` for any ``s``.

    Its derivative is continuous only where ``s`` is an eigenvalue.
    """
    s = complex(s)
    origin, infinity, r_match = _branches(sector, profile, s, r_match)
    u0, _ = origin.end_state()
    ui, _ = infinity.end_state()
    return Eigenfunction(
        coeffs=CoefficientFunctions(sector, profile),
        s=s,
        origin=origin,
        infinity=infinity,
        r_match=r_match,
        scale_infinity=u0 / ui,
    )
