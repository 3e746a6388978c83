"""Integral identities satisfied by eigenfunctions of the radial equation.

For a solution of ``(A d*u)' = B u`` decaying at both ends, multiplying by ``q v`` with
``u = q v`` and integrating by parts gives

    int (q^2 A |d*v|^2 + E_q |v|^2) r dr = 0,
    E_q = q^2 B - A q q'' + q q' (A/r - A').

``q = 1`` is the basic identity, whose imaginary part is written out separately. For
``q = gamma_*`` and ``q = gamma_*^{1/2}`` the imaginary parts have integrands of one sign
in parts of the spectral plane, which is how eigenvalues are excluded there.
"""

from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache
from typing import Protocol

import numpy as np
from numpy.polynomial import legendre
from pydantic import BaseModel, Field
from scipy import optimize

from src.biot_savart import FourierSector
from src.operator import SpectralParameter
from src.profiles import ProfileKind, VortexProfile, j_of
from src.shooting.coefficients import CoefficientFunctions
from src.utils.exceptions import ClassViolationError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

HG_SLACK = 1e-12
GAUSS_ORDER = 16


class RadialMode(Protocol):
    """Radial velocity with ``d*u = u' + u/r``, known on ``(0, inf)``."""

    r0: float
    r_match: float
    r_max: float

    def values(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...


@dataclass(frozen=True)
class TrialFunction:
    """Arbitrary radial function given with its derivative."""

    u: Callable[[np.ndarray], np.ndarray]
    du: Callable[[np.ndarray], np.ndarray]
    r0: float = 1e-3
    r_match: float = 1.0
    r_max: float = 30.0

    def values(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        r = np.atleast_1d(np.asarray(r, dtype=float))
        u = np.asarray(self.u(r), dtype=complex)
        return u, np.asarray(self.du(r), dtype=complex) + u / r


@lru_cache(maxsize=32)
def radial_nodes(r0: float, r_match: float, r_max: float) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on ``(0, 20 r_max)``.

    Panels: one on ``[0, r0]``, geometric on ``[r0, r_match]``, uniform on ``[r_match, r_max]``
    and geometric beyond ``r_max``.
    """
    x, w = legendre.leggauss(GAUSS_ORDER)
    edges = np.unique(
        np.concatenate(
            [
                [0.0],
                np.geomspace(r0, r_match, 24),
                np.linspace(r_match, r_max, 64),
                np.geomspace(r_max, 20.0 * r_max, 16),
            ]
        )
    )
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (hi - lo) * x[None, :] + 0.5 * (hi + lo)
    weights = 0.5 * (hi - lo) * w[None, :]
    return nodes.ravel(), weights.ravel()


def _quadrature(u: RadialMode) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    r, w = radial_nodes(float(u.r0), float(u.r_match), float(u.r_max))
    values, d_star = u.values(r)
    with np.errstate(under="ignore"):
        values = np.where(np.abs(values) < 1e-250, 0.0, values)
        d_star = np.where(np.abs(d_star) < 1e-250, 0.0, d_star)
    return r, w * r, values, d_star


def weighted_identity(
    coeffs: CoefficientFunctions,
    s: complex,
    u: RadialMode,
    q: np.ndarray,
    dq: np.ndarray,
    d2q: np.ndarray,
) -> complex:
    """``int (q^2 A |d*v|^2 + E_q |v|^2) r dr`` with ``v = u / q``, on the nodes of ``u``."""
    r, w, values, d_star = _quadrature(u)
    A = coeffs.A(r)
    v = values / q
    dv = d_star / q - values * dq / q**2
    E = q**2 * coeffs.B(r, s) - A * q * d2q + q * dq * (A / r - coeffs.A_prime(r))
    return complex(np.sum(w * (q**2 * A * np.abs(dv) ** 2 + E * np.abs(v) ** 2)))


class HowardResiduals(BaseModel):
    """Values of the integral identities at one ``s`` for one radial function."""

    m: int
    k: float
    a: float
    b: float
    hg0_re: float = Field(..., description="Real part of int (A|d*u|^2 + B|u|^2) r dr")
    hg0_im: float = Field(..., description="Imaginary part of the same integral")
    hg0_imaginary: float = Field(..., description="Imaginary part written as a * int(...); 0 at a = 0")
    hg1: float = Field(
        ...,
        description="2a int((b-Omega)(A|d*v|^2+|v|^2) - r(Omega/(m^2+k^2r^2))'|v|^2), v=u/gamma_*",
    )
    hg1_full_re: float
    hg1_full_im: float
    hg_half: float = Field(..., description="-a int(A|d*v|^2 + |v|^2 + ...|v|^2), v=u/gamma_*^(1/2)")
    hg_half_full_re: float
    hg_half_full_im: float
    norm_sq: float = Field(..., description="int |u|^2 r dr")

    def worst(self) -> float:
        """Largest identity value relative to ``norm_sq``."""
        values = [
            abs(complex(self.hg0_re, self.hg0_im)),
            abs(self.hg0_imaginary),
            abs(self.hg1),
            abs(complex(self.hg1_full_re, self.hg1_full_im)),
            abs(self.hg_half),
            abs(complex(self.hg_half_full_re, self.hg_half_full_im)),
        ]
        return max(values) / self.norm_sq if self.norm_sq > 0 else 0.0


def howard_identity_residuals(
    sector: FourierSector,
    profile: VortexProfile,
    s: complex,
    u: RadialMode,
) -> HowardResiduals:
    """Evaluate all identities for ``u`` at ``s = m (a - i b)``.

    Large values mean ``u`` is not an eigenfunction at ``s``; they are reported, not raised.

    Raises:
        ValidationError: If ``m = 0``
    """
    if sector.m == 0:
        raise ValidationError("Use axisym_identity for m = 0", details={"k": sector.k})
    param = SpectralParameter(complex(s), sector.m)
    a, b = param.a, param.b
    coeffs = CoefficientFunctions(sector, profile)
    r, w, values, d_star = _quadrature(u)
    A = coeffs.A(r)
    u2 = np.abs(values) ** 2
    norm_sq = float(np.sum(w * u2))

    hg0 = complex(np.sum(w * (A * np.abs(d_star) ** 2 + coeffs.B(r, param.s) * u2)))

    omega = profile.omega(r)
    d_omega = profile.omega_prime(r)
    d2_omega = profile.omega_second(r)
    den = sector.m**2 + sector.k**2 * r**2
    gap = omega - b
    mod2 = a**2 + gap**2
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = (
            2.0 * (b - omega) / mod2**2 * sector.mk_ratio_sq * A * profile.phi(r)
            + r * coeffs.g(r) / mod2
        ) * u2
    hg0_imaginary = 0.0 if a == 0 else a * float(np.sum(w * integrand))

    gs = coeffs.gamma_star(r, a, b)
    omega_over_den_prime = d_omega / den - 2.0 * sector.k**2 * r * omega / den**2

    v1 = values / gs
    dv1 = d_star / gs - values * d_omega / gs**2
    hg1 = 2.0 * a * float(
        np.sum(
            w
            * (
                (b - omega) * (A * np.abs(dv1) ** 2 + np.abs(v1) ** 2)
                - r * omega_over_den_prime * np.abs(v1) ** 2
            )
        )
    )
    hg1_full = weighted_identity(coeffs, param.s, u, gs, d_omega, d2_omega)

    root = np.sqrt(gs)
    d_root = d_omega / (2.0 * root)
    d2_root = d2_omega / (2.0 * root) - d_omega**2 / (4.0 * root**3)
    v_half = values / root
    dv_half = d_star / root - values * d_root / root**2
    hg_half = -a * float(
        np.sum(
            w
            * (
                A * np.abs(dv_half) ** 2
                + np.abs(v_half) ** 2
                + A
                / mod2
                * (sector.mk_ratio_sq * profile.phi(r) - 0.25 * d_omega**2)
                * np.abs(v_half) ** 2
            )
        )
    )
    hg_half_full = weighted_identity(coeffs, param.s, u, root, d_root, d2_root)

    result = HowardResiduals(
        m=sector.m,
        k=sector.k,
        a=a,
        b=b,
        hg0_re=hg0.real,
        hg0_im=hg0.imag,
        hg0_imaginary=hg0_imaginary,
        hg1=hg1,
        hg1_full_re=hg1_full.real,
        hg1_full_im=hg1_full.imag,
        hg_half=hg_half,
        hg_half_full_re=hg_half_full.real,
        hg_half_full_im=hg_half_full.imag,
        norm_sq=norm_sq,
    )
    logger.debug(
        "Howard identities evaluated", m=sector.m, k=sector.k, s=str(s), worst=result.worst()
    )
    return result


def axisym_identity(profile: VortexProfile, k: float, s: complex, u: RadialMode) -> complex:
    """``int (|d*u|^2 + k^2 (1 + Phi/s^2) |u|^2) r dr``.

    Its imaginary part is ``k^2 Im(1/s^2) int Phi |u|^2 r dr``, so a vanishing value with
    ``Phi > 0`` forces ``s^2`` real.

    Raises:
        ValidationError: If ``s = 0``
    """
    s = complex(s)
    if s == 0:
        raise ValidationError("axisym_identity requires s != 0", details={"k": k})
    r, w, values, d_star = _quadrature(u)
    integrand = np.abs(d_star) ** 2 + k**2 * (1.0 + profile.phi(r) / s**2) * np.abs(values) ** 2
    return complex(np.sum(w * integrand))


def twodim_identity(profile: VortexProfile, m: int, s: complex, u: RadialMode) -> complex:
    """``int (|r d*u|^2 + (m^2 + i m r W' / gamma) |u|^2) r dr`` with ``gamma = s + i m Omega``.

    Its imaginary part is ``m Re(s) int W' |u|^2 r^2 / |gamma|^2 dr``.

    Raises:
        ValidationError: If ``m = 0``
    """
    if m == 0:
        raise ValidationError("twodim_identity requires m != 0")
    s = complex(s)
    r, w, values, d_star = _quadrature(u)
    gamma = s + 1j * m * profile.omega(r)
    potential = m**2 + 1j * m * r * profile.W_prime(r) / gamma
    integrand = np.abs(r * d_star) ** 2 + potential * np.abs(values) ** 2
    return complex(np.sum(w * integrand))


class HGResult(BaseModel):
    """Outcome of the sufficient stability condition ``(k^2/m^2) J >= 1/4``."""

    m: int
    k: float
    satisfied: bool
    infimum: float = Field(..., description="inf over r of (k^2/m^2) J(r)")
    r_star: float = Field(..., description="Radius where (k^2/m^2) J = 1/4; inf when the condition holds")


def _j_scaled(sector: FourierSector, profile: VortexProfile, r: float) -> float:
    return sector.mk_ratio_sq * float(j_of(profile, r))


def hg_criterion(sector: FourierSector, profile: VortexProfile) -> HGResult:
    """Check ``inf_r (k^2/m^2) J(r) >= 1/4`` and locate ``r_*``.

    For admissible profiles ``J`` decreases, so the infimum is the limit at infinity and
    ``r_*`` is the unique crossing of the level ``1/4``.

    Raises:
        ValidationError: If ``m = 0`` or ``k = 0``
        ClassViolationError: For the Rankine vortex
    """
    if sector.m == 0:
        raise ValidationError("hg_criterion requires m != 0", details={"k": sector.k})
    sector.require_k("hg_criterion")
    if profile.kind == ProfileKind.RANKINE:
        raise ClassViolationError(
            "hg_criterion is undefined for the Rankine vortex", details={"m": sector.m}
        )
    samples = np.geomspace(1e-3, 1e3, 2001)
    sampled = sector.mk_ratio_sq * np.asarray(j_of(profile, samples))
    infimum = float(np.nanmin(sampled))
    limit = sector.mk_ratio_sq * profile.j_infinity
    if profile.class_w and np.isfinite(limit):
        infimum = min(infimum, float(limit))
    satisfied = infimum >= 0.25 - HG_SLACK

    r_star = float("inf")
    if not satisfied:
        below = np.nonzero(sampled < 0.25)[0]
        if below.size and below[0] > 0:
            i = below[0]
            r_star = float(
                optimize.brentq(
                    lambda x: _j_scaled(sector, profile, x) - 0.25,
                    samples[i - 1],
                    samples[i],
                    xtol=1e-14,
                )
            )
        elif below.size:
            r_star = float(samples[0])
        else:
            # The crossing lies beyond the sampled range.
            hi = samples[-1]
            while _j_scaled(sector, profile, hi) >= 0.25 and hi < 1e12:
                hi *= 10.0
            r_star = float(
                optimize.brentq(
                    lambda x: _j_scaled(sector, profile, x) - 0.25, hi / 10.0, hi, xtol=1e-10
                )
            )

    logger.info(
        "Stability criterion evaluated",
        m=sector.m,
        k=sector.k,
        satisfied=satisfied,
        infimum=infimum,
        r_star=r_star,
    )
    return HGResult(m=sector.m, k=sector.k, satisfied=satisfied, infimum=infimum, r_star=r_star)


def verify_b_lower_bound(
    profile: VortexProfile,
    m: int,
    k: float,
    r_grid: np.ndarray,
    b_values: list[float],
) -> float:
    """Minimum of ``B(r) - (1 - 4/m^2)`` at ``a = 0`` over ``r_grid`` and ``b_values``.

    Raises:
        ValidationError: If ``|m| < 2``, some ``b > 0`` or some radius is not positive
    """
    if abs(m) < 2:
        raise ValidationError("The lower bound on B holds for |m| >= 2", details={"m": m})
    if any(b > 0 for b in b_values):
        raise ValidationError(
            "The lower bound on B holds for b <= 0", details={"b_values": list(b_values)}
        )
    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0):
        raise ValidationError("Radii must be positive", details={"r_min": float(np.min(r_grid))})
    coeffs = CoefficientFunctions(FourierSector(m, k), profile)
    bound = 1.0 - 4.0 / m**2
    worst = min(float(np.min(coeffs.B_real(r_grid, b))) for b in b_values) - bound
    logger.info("B lower bound checked", kind=profile.kind.value, m=m, k=k, margin=worst)
    return worst
