"""Frobenius expansions at the critical radius.

On the imaginary axis ``s = -i m b`` with ``0 < b < 1`` the radial equation has a regular
singular point at ``r_bar``, where ``Omega(r_bar) = b``. Written as

    u'' + P u' + Q u = 0,    P = A'/A + 1/r,    Q = A'/(A r) - 1/r^2 - B/A,

with ``z = r - r_bar``, the functions ``z P`` and ``z^2 Q`` are analytic at ``z = 0`` and
``z^2 Q -> (k^2/m^2) J(r_bar)``.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from src.biot_savart import FourierSector
from src.config import get_settings
from src.profiles import VortexProfile, j_of
from src.shooting import CoefficientFunctions
from src.utils.exceptions import CriticalLayerError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

DOUBLE_ROOT_TOLERANCE = 1e-12
FFT_POINTS = 64
CHEBYSHEV_DEGREE = 31


class RootCase(str, Enum):
    REAL_DISTINCT = "real_distinct"
    COMPLEX_CONJUGATE = "complex_conjugate"
    DOUBLE_ROOT = "double_root"


def indicial_roots(j_at_rbar: float, m: int, k: float) -> tuple[complex, complex, RootCase]:
    """Roots ``d_+, d_-`` of ``d (d - 1) + (k^2/m^2) J = 0`` and their case.

    Raises:
        ValidationError: If ``J < 0`` or ``m = 0``
    """
    if m == 0:
        raise ValidationError("The indicial equation requires m != 0", details={"k": k})
    if j_at_rbar < 0:
        raise ValidationError("The indicial equation requires J >= 0", details={"J": j_at_rbar})
    disc = 0.25 - (k**2 / m**2) * j_at_rbar
    if abs(disc) <= DOUBLE_ROOT_TOLERANCE:
        return 0.5 + 0j, 0.5 + 0j, RootCase.DOUBLE_ROOT
    if disc > 0:
        root = np.sqrt(disc)
        return complex(0.5 + root), complex(0.5 - root), RootCase.REAL_DISTINCT
    root = np.sqrt(-disc)
    return complex(0.5, root), complex(0.5, -root), RootCase.COMPLEX_CONJUGATE


def _pq(coeffs: CoefficientFunctions, b: float, r: Any) -> tuple[Any, Any]:
    A = coeffs.A(r)
    dA = coeffs.A_prime(r)
    P = dA / A + 1.0 / r
    Q = dA / (A * r) - 1.0 / r**2 - coeffs.B_real(r, b) / A
    return P, Q


def _zpow(z: Any, x: complex) -> Any:
    """``z^x`` continued to ``z < 0`` as ``|z|^x exp(i pi x)``."""
    z = np.asarray(z, dtype=float)
    return np.abs(z) ** x * np.where(z < 0, np.exp(1j * np.pi * x), 1.0)


def _zlog(z: Any) -> Any:
    z = np.asarray(z, dtype=float)
    return np.log(np.abs(z)) + np.where(z < 0, 1j * np.pi, 0.0)


def _series(c: np.ndarray, d: complex, z: Any) -> tuple[Any, Any, Any]:
    """``sum c_n z^{n+d}`` and its first two derivatives."""
    value = np.zeros(np.shape(z), dtype=complex)
    first = np.zeros_like(value)
    second = np.zeros_like(value)
    z = np.asarray(z, dtype=float)
    for n, cn in enumerate(c):
        e = n + d
        power = _zpow(z, e)
        value = value + cn * power
        first = first + cn * e * power / z
        second = second + cn * e * (e - 1) * power / z**2
    return value, first, second


@dataclass(frozen=True, eq=False)
class FrobeniusExpansion:
    """Two local solutions ``z^{d_+} S_+(z)`` and ``z^{d_-} S_-(z)`` at ``r_bar``.

    In the double-root case the second solution is ``phi_+ log z + z^{1/2} S_-(z)`` with
    ``S_-`` holding the derivative of the coefficients with respect to the exponent.
    """

    m: int
    k: float
    b: float
    r_bar: float
    j_at_rbar: float
    d_plus: complex
    d_minus: complex
    case: RootCase
    coeffs_plus: np.ndarray
    coeffs_minus: np.ndarray
    radius_estimate: float
    p_taylor: np.ndarray = field(repr=False)
    q_taylor: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.coeffs_plus.size - 1

    def evaluate(self, r: Any, branch: str) -> tuple[Any, Any, Any]:
        """``(phi, phi', phi'')`` of the ``"plus"`` or ``"minus"`` solution."""
        z = np.asarray(r, dtype=float) - self.r_bar
        if branch == "plus":
            return _series(self.coeffs_plus, self.d_plus, z)
        if branch != "minus":
            raise ValidationError("branch must be 'plus' or 'minus'", details={"branch": branch})
        if self.case != RootCase.DOUBLE_ROOT:
            return _series(self.coeffs_minus, self.d_minus, z)
        v, dv, d2v = _series(self.coeffs_plus, self.d_plus, z)
        t, dt, d2t = _series(self.coeffs_minus, self.d_plus, z)
        log = _zlog(z)
        return (
            v * log + t,
            dv * log + v / z + dt,
            d2v * log + 2.0 * dv / z - v / z**2 + d2t,
        )

    def payload(self) -> dict[str, Any]:
        """JSON-ready description of the expansion."""

        def pairs(values: np.ndarray) -> list[list[float]]:
            return [[float(c.real), float(c.imag)] for c in values]

        return {
            "m": self.m,
            "k": self.k,
            "b": self.b,
            "r_bar": self.r_bar,
            "J": self.j_at_rbar,
            "d_plus": [self.d_plus.real, self.d_plus.imag],
            "d_minus": [self.d_minus.real, self.d_minus.imag],
            "case": self.case.value,
            "radius_estimate": self.radius_estimate,
            "coeffs_plus": pairs(self.coeffs_plus),
            "coeffs_minus": pairs(self.coeffs_minus),
        }


def _taylor_fft(f: Any, radius: float, order: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(FFT_POINTS) / FFT_POINTS
    values = f(radius * np.exp(1j * theta))
    coeffs = np.fft.fft(values) / FFT_POINTS
    return coeffs[: order + 1] / radius ** np.arange(order + 1)


def _taylor_chebyshev(f: Any, radius: float, order: int) -> np.ndarray:
    series = Chebyshev.interpolate(lambda z: np.real(f(z)), CHEBYSHEV_DEGREE, domain=[-radius, radius])
    coeffs = series.convert(kind=Polynomial).coef
    out = np.zeros(order + 1)
    out[: min(order + 1, coeffs.size)] = coeffs[: order + 1]
    return out


def _recursion(
    p: np.ndarray,
    q: np.ndarray,
    d: complex,
    order: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients ``c_n(d)`` and their derivatives ``dc_n/dd``."""

    def f(x: complex) -> complex:
        return x * (x - 1.0) + p[0] * x + q[0]

    def df(x: complex) -> complex:
        return 2.0 * x - 1.0 + p[0]

    c = np.zeros(order + 1, dtype=complex)
    dc = np.zeros(order + 1, dtype=complex)
    c[0] = 1.0
    for n in range(1, order + 1):
        denom = f(d + n)
        if abs(denom) < 1e-12:
            raise CriticalLayerError(
                "Indicial roots differ by an integer; the recursion is singular",
                details={"d": str(d), "n": n},
            )
        s = 0j
        ds = 0j
        for j in range(1, n + 1):
            weight = (d + n - j) * p[j] + q[j]
            s += weight * c[n - j]
            ds += p[j] * c[n - j] + weight * dc[n - j]
        c[n] = -s / denom
        dc[n] = (-ds - c[n] * df(d + n)) / denom
    return c, dc


def _radius_estimate(radius: float, *series: np.ndarray) -> float:
    estimate = radius
    for c in series:
        if c.size < 2 or abs(c[-2]) == 0:
            continue
        ratio = abs(c[-1]) / abs(c[-2])
        while ratio * estimate >= 0.5 and estimate > 1e-6:
            estimate *= 0.8
    return estimate


def critical_radius(profile: VortexProfile, b: float) -> float:
    """``r_bar`` with ``Omega(r_bar) = b``.

    Raises:
        ValidationError: If ``b`` is outside (0, 1)
    """
    return profile.radius_where_omega(b)


def frobenius_series(
    sector: FourierSector,
    profile: VortexProfile,
    b: float,
    order: int | None = None,
) -> FrobeniusExpansion:
    """Frobenius coefficients of both local solutions at ``r_bar = Omega^{-1}(b)``.

    Taylor coefficients of ``z P`` and ``z^2 Q`` come from a contour FFT for profiles
    that accept complex radii and from Chebyshev interpolation on the real axis otherwise.

    Raises:
        ValidationError: If ``m = 0``, ``k = 0`` or ``b`` is outside (0, 1)
        CriticalLayerError: For a non-analytic profile or an integer gap between the roots
    """
    settings = get_settings()
    order = settings.frobenius_order if order is None else order
    if sector.m == 0:
        raise ValidationError("Critical layers require m != 0", details={"k": sector.k})
    sector.require_k("frobenius_series")
    if not profile.real_analytic:
        logger.error("Frobenius expansion of a non-analytic profile", kind=profile.kind.value)
        raise CriticalLayerError(
            "Frobenius expansions require a real-analytic profile",
            details={"kind": profile.kind.value},
        )
    r_bar = critical_radius(profile, b)
    b_exact = float(np.real(profile.omega(r_bar)))
    j_bar = float(j_of(profile, r_bar))
    d_plus, d_minus, case = indicial_roots(j_bar, sector.m, sector.k)

    coeffs = CoefficientFunctions(sector, profile)
    radius = min(
        0.5 * settings.analyticity_radius,
        0.5 * r_bar,
        0.5 * float(np.hypot(r_bar, sector.m / sector.k)),
    )

    def zp(z: Any) -> Any:
        return z * _pq(coeffs, b_exact, r_bar + z)[0]

    def zq(z: Any) -> Any:
        return z**2 * _pq(coeffs, b_exact, r_bar + z)[1]

    if profile.complex_capable:
        p = np.real(_taylor_fft(zp, radius, order))
        q = np.real(_taylor_fft(zq, radius, order))
    else:
        p = _taylor_chebyshev(zp, radius, order)
        q = _taylor_chebyshev(zq, radius, order)
    p[0] = 0.0
    q[0] = sector.mk_ratio_sq * j_bar

    c_plus, dc_plus = _recursion(p, q, d_plus, order)
    if case == RootCase.DOUBLE_ROOT:
        c_minus = dc_plus
    else:
        c_minus, _ = _recursion(p, q, d_minus, order)
    if case == RootCase.REAL_DISTINCT:
        c_plus, c_minus = c_plus.real.astype(complex), c_minus.real.astype(complex)

    expansion = FrobeniusExpansion(
        m=sector.m,
        k=sector.k,
        b=b_exact,
        r_bar=r_bar,
        j_at_rbar=j_bar,
        d_plus=d_plus,
        d_minus=d_minus,
        case=case,
        coeffs_plus=c_plus,
        coeffs_minus=c_minus,
        radius_estimate=_radius_estimate(radius, c_plus, c_minus),
        p_taylor=p,
        q_taylor=q,
    )
    logger.info(
        "Frobenius expansion built",
        m=sector.m,
        k=sector.k,
        b=b_exact,
        r_bar=r_bar,
        case=case.value,
        radius=expansion.radius_estimate,
    )
    return expansion


def singular_solutions(expansion: FrobeniusExpansion, r: Any) -> tuple[Any, Any]:
    """``(phi_+, phi_-)`` at ``r``, continued below ``r_bar`` with the phase ``exp(i pi d)``.

    Raises:
        ValidationError: If some ``r`` is at ``r_bar`` or beyond the radius estimate
    """
    z = np.asarray(r, dtype=float) - expansion.r_bar
    if np.any(z == 0) or np.any(np.abs(z) > expansion.radius_estimate):
        raise ValidationError(
            "Radius outside the convergence region of the expansion",
            details={"r_bar": expansion.r_bar, "radius": expansion.radius_estimate},
        )
    return expansion.evaluate(r, "plus")[0], expansion.evaluate(r, "minus")[0]


def equation_residual(
    sector: FourierSector, profile: VortexProfile, expansion: FrobeniusExpansion, r: Any
) -> Any:
    """Relative residual ``|phi'' + P phi' + Q phi| / (|phi''| + |P phi'| + |Q phi|)`` of both solutions.

    Returns the larger of the two at every radius.
    """
    coeffs = CoefficientFunctions(sector, profile)
    r = np.asarray(r, dtype=float)
    P, Q = _pq(coeffs, expansion.b, r)
    worst = np.zeros(r.shape)
    for branch in ("plus", "minus"):
        v, dv, d2v = expansion.evaluate(r, branch)
        scale = np.abs(d2v) + np.abs(P * dv) + np.abs(Q * v)
        worst = np.maximum(worst, np.abs(d2v + P * dv + Q * v) / scale)
    return worst
