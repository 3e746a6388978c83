"""Explicit Bessel modes of the Rankine vortex and their energy identities."""

from dataclasses import dataclass
from typing import Any

import numpy as np
from pydantic import BaseModel
from scipy import special

from src.biot_savart import FourierSector
from src.shooting import RadialMode, outer_radius, radial_nodes
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

MATCHING_TOLERANCE = 1e-8


def _inner_ratios(order: int, beta: complex, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``I(beta r) / I(beta)`` and ``I'(beta r) / I(beta)`` from exponentially scaled values."""
    z = beta * r
    norm = special.ive(order, beta)
    factor = np.exp(abs(beta.real) * (r - 1.0)) / norm
    value = special.ive(order, z) * factor
    derivative = 0.5 * (special.ive(order - 1, z) + special.ive(order + 1, z)) * factor
    return value, derivative


def _outer_ratios(order: int, k: float, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``K(k r) / K(k)`` and ``K'(k r) / K(k)``."""
    z = k * r
    factor = np.exp(-k * (r - 1.0)) / special.kve(order, k)
    value = special.kve(order, z) * factor
    derivative = -0.5 * (special.kve(order - 1, z) + special.kve(order + 1, z)) * factor
    return value, derivative


@dataclass(frozen=True)
class RankineMode:
    """``u_z = I_m(beta r)/I_m(beta)`` inside the core, ``K_m(|k| r)/K_m(|k|)`` outside.

    ``u_z(1) = 1`` on both sides; ``u_r`` follows from the momentum equations in each region.
    Continuity of ``u_r`` at ``r = 1`` holds exactly at roots of the dispersion relation.
    """

    m: int
    k: float
    s: complex
    r0: float = 1e-3
    r_match: float = 1.0
    r_max: float = 30.0

    @property
    def gamma(self) -> complex:
        return self.s + 1j * self.m

    @property
    def beta(self) -> complex:
        return complex(np.sqrt(self.k**2 * (1.0 + 4.0 / self.gamma**2)))

    @property
    def _inner_factor(self) -> complex:
        g2 = self.gamma**2
        return g2 / (1j * self.k * (g2 + 4.0))

    def _split(self, r: Any) -> tuple[np.ndarray, np.ndarray]:
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r <= 0):
            raise ValidationError(
                "Rankine modes are evaluated at r > 0", details={"r_min": float(np.min(r))}
            )
        return r, r <= 1.0

    def u_z(self, r: Any, side: str | None = None) -> tuple[np.ndarray, np.ndarray]:
        """``(u_z, u_z')``; ``side`` forces the inner or outer formula."""
        r, inner = self._split(r)
        if side is not None:
            inner = np.full(r.shape, side == "inner")
        order, ka = abs(self.m), abs(self.k)
        value = np.zeros(r.shape, dtype=complex)
        derivative = np.zeros(r.shape, dtype=complex)
        if np.any(inner):
            v, dv = _inner_ratios(order, self.beta, r[inner])
            value[inner], derivative[inner] = v, self.beta * dv
        if np.any(~inner):
            v, dv = _outer_ratios(order, ka, r[~inner])
            value[~inner], derivative[~inner] = v, ka * dv
        return value, derivative

    def u_r(self, r: Any, side: str | None = None) -> tuple[np.ndarray, np.ndarray]:
        """``(u_r, u_r')``; ``side`` forces the inner or outer formula."""
        r, inner = self._split(r)
        if side is not None:
            inner = np.full(r.shape, side == "inner")
        order, ka, beta, m = abs(self.m), abs(self.k), self.beta, self.m
        value = np.zeros(r.shape, dtype=complex)
        derivative = np.zeros(r.shape, dtype=complex)
        swirl = 2j * m / self.gamma
        if np.any(inner):
            ri = r[inner]
            v, dv = _inner_ratios(order, beta, ri)
            d2v = v * (1.0 + order**2 / (beta * ri) ** 2) - dv / (beta * ri)
            c = self._inner_factor
            value[inner] = c * (beta * dv + swirl * v / ri)
            derivative[inner] = c * (beta**2 * d2v + swirl * (beta * dv / ri - v / ri**2))
        if np.any(~inner):
            ro = r[~inner]
            v, dv = _outer_ratios(order, ka, ro)
            d2v = v * (1.0 + order**2 / (ka * ro) ** 2) - dv / (ka * ro)
            value[~inner] = ka * dv / (1j * self.k)
            derivative[~inner] = ka**2 * d2v / (1j * self.k)
        return value, derivative

    def values(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``(u_r, u_r' + u_r / r)``."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        u, du = self.u_r(r)
        return u, du + u / r


def rankine_mode(m: int, k: float, s: complex) -> RankineMode:
    """Bessel mode at ``s``.

    Raises:
        ValidationError: If ``m = 0``, ``k = 0``, ``s = 0``, ``s = -i m`` or ``gamma^2 = -4``
    """
    s = complex(s)
    if m == 0 or k == 0:
        raise ValidationError("Rankine modes require m != 0 and k != 0", details={"m": m, "k": k})
    gamma = s + 1j * m
    if s == 0 or gamma == 0 or gamma**2 == -4:
        raise ValidationError("Excluded spectral parameter", details={"m": m, "k": k, "s": str(s)})
    return RankineMode(m=m, k=k, s=s, r_max=outer_radius(k))


class JumpResiduals(BaseModel):
    """Relative residuals of the interface conditions at ``r = 1``."""

    u_r_continuity: float
    radial_jump: float
    axial_jump: float
    axial_radial: float

    def worst(self) -> float:
        return max(self.u_r_continuity, self.radial_jump, self.axial_jump, self.axial_radial)


def jump_conditions(mode: RankineMode) -> JumpResiduals:
    """Continuity of ``u_r`` and the jumps of ``u_r'`` and ``u_z'`` across the core boundary."""
    one = np.array([1.0])
    ur_in, dur_in = (x[0] for x in mode.u_r(one, "inner"))
    ur_out, dur_out = (x[0] for x in mode.u_r(one, "outer"))
    uz_in, duz_in = (x[0] for x in mode.u_z(one, "inner"))
    _, duz_out = (x[0] for x in mode.u_z(one, "outer"))
    gamma = mode.gamma
    swirl = 2j * mode.m / gamma
    scale_r = abs(ur_in) + abs(ur_out)
    scale_dr = abs(dur_in) + abs(dur_out) + abs(swirl * ur_in)
    rhs_z = gamma**2 / (gamma**2 + 4.0) * (duz_in + swirl * uz_in)
    scale_z = abs(duz_out) + abs(rhs_z)
    result = JumpResiduals(
        u_r_continuity=abs(ur_in - ur_out) / scale_r,
        radial_jump=abs(dur_out - dur_in + swirl * ur_in) / scale_dr,
        axial_jump=abs(duz_out - rhs_z) / scale_z,
        axial_radial=abs(duz_out - 1j * mode.k * ur_out) / (abs(duz_out) + abs(mode.k * ur_out)),
    )
    logger.debug("Rankine jump conditions", m=mode.m, k=mode.k, s=str(mode.s), worst=result.worst())
    return result


def _quadrature(u: RadialMode) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    r, w = radial_nodes(float(u.r0), 1.0, float(u.r_max))
    values, d_star = u.values(r)
    return r, w * r, values, d_star


def rankine_balance(m: int, k: float, s: complex, u: RadialMode) -> complex:
    """Energy balance of the eigenvalue equation restricted to the core and its exterior.

    ``int (A|d*u|^2 + |u|^2) r dr + int_0^1 {-4k^2 A/(m^2 gamma_*^2) + (2r/gamma_*)(1/(m^2+k^2r^2))'}
    |u|^2 r dr - 2 A(1) |u(1)|^2 / gamma_*``, zero for eigenmodes.
    """
    sector = FourierSector(m, k)
    s = complex(s)
    a, b = s.real / m, -s.imag / m
    gs = 1.0 - b - 1j * a
    r, w, values, d_star = _quadrature(u)
    A = sector.A(r)
    u2 = np.abs(values) ** 2
    core = r <= 1.0
    den = m**2 + k**2 * r**2
    bracket = -4.0 * k**2 * A / (m**2 * gs**2) + (2.0 * r / gs) * (-2.0 * k**2 * r / den**2)
    total = np.sum(w * (A * np.abs(d_star) ** 2 + u2)) + np.sum((w * bracket * u2)[core])
    u_one = u.values(np.array([1.0]))[0][0]
    return complex(total - 2.0 * sector.A(1.0) * abs(u_one) ** 2 / gs)


def rankine_identity(m: int, k: float, s: complex, u: RadialMode) -> float:
    """``a [int (A|d*u|^2 + |u|^2) r dr + int_0^1 (4k^2/m^2) A / ((1-b)^2 + a^2) |u|^2 r dr]``.

    Equals ``-Im(gamma_* * rankine_balance)`` for every ``u``; for ``a != 0`` and a genuine
    eigenmode it would force ``u = 0``.

    Raises:
        ValidationError: If ``u`` is a Rankine mode whose radial velocity jumps at ``r = 1``
    """
    if isinstance(u, RankineMode):
        mismatch = jump_conditions(u).u_r_continuity
        if mismatch > MATCHING_TOLERANCE:
            raise ValidationError(
                "The Bessel mode does not satisfy the matching relations",
                details={"m": m, "k": k, "s": str(s), "mismatch": mismatch},
            )
    sector = FourierSector(m, k)
    s = complex(s)
    a, b = s.real / m, -s.imag / m
    if a == 0:
        return 0.0
    r, w, values, d_star = _quadrature(u)
    A = sector.A(r)
    u2 = np.abs(values) ** 2
    core = r <= 1.0
    whole = np.sum(w * (A * np.abs(d_star) ** 2 + u2))
    inner = np.sum((w * (4.0 * k**2 / m**2) * A / ((1.0 - b) ** 2 + a**2) * u2)[core])
    return float(a * (whole + inner))
