"""Modified Bessel functions of real order and complex argument.

Values come from ``scipy.special`` (AMOS). This module adds domain checks, scaled
variants, logarithmic derivatives that stay finite where ``I`` and ``K`` overflow,
and two independent oracles (ascending series and the integral representation of
``K``) used to cross-check the library.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from src.utils.exceptions import SpecialFunctionError, ValidationError
from src.utils.logger import get_logger
from src.utils.quadrature import integrate

logger = get_logger(__name__)


@dataclass(frozen=True)
class BesselEval:
    """Values of ``I_nu``, ``K_nu`` and their derivatives at a single point."""

    nu: float
    z: complex
    i_value: complex
    k_value: complex
    i_derivative: complex
    k_derivative: complex
    scaled: bool = False

    def wronskian_residual(self) -> float:
        """Relative deviation of ``I K' - I' K`` from ``-1/z``.

        Only meaningful for unscaled values.
        """
        w = self.i_value * self.k_derivative - self.i_derivative * self.k_value
        return float(abs(w + 1.0 / self.z) * abs(self.z))


def _check_argument(z: complex) -> complex:
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise SpecialFunctionError("Bessel argument must be finite", details={"z": str(z)})
    if z.imag == 0.0 and z.real <= 0.0:
        raise SpecialFunctionError(
            "Bessel argument lies on the branch cut (-inf, 0]",
            details={"z": str(z)},
        )
    return z


def _check_values(nu: float, z: complex, *values: complex) -> None:
    if not all(np.isfinite(v) for v in values):
        logger.error("Non-finite Bessel value", nu=nu, z=str(z))
        raise SpecialFunctionError(
            "Bessel evaluation overflowed; use the scaled variant",
            details={"nu": nu, "z": str(z)},
        )


def bessel_ik(nu: float, z: complex) -> BesselEval:
    """Evaluate ``I_nu(z)``, ``K_nu(z)`` and their derivatives.

    Negative orders are accepted: ``I_{-nu}`` is evaluated directly and ``K_{-nu} = K_nu``.

    Raises:
        SpecialFunctionError: If ``z`` is on the branch cut or a value overflows
    """
    z = _check_argument(z)
    iv = complex(special.iv(nu, z))
    kv = complex(special.kv(nu, z))
    ivp = complex(special.ivp(nu, z))
    kvp = complex(special.kvp(nu, z))
    _check_values(nu, z, iv, kv, ivp, kvp)
    return BesselEval(nu=nu, z=z, i_value=iv, k_value=kv, i_derivative=ivp, k_derivative=kvp)


def bessel_ik_scaled(nu: float, z: complex) -> BesselEval:
    """Exponentially scaled values ``e^{-|Re z|} I_nu`` and ``e^{z} K_nu``.

    Derivatives carry the same scaling factors as the corresponding values.
    """
    z = _check_argument(z)
    ive = complex(special.ive(nu, z))
    kve = complex(special.kve(nu, z))
    # I' = (I_{nu-1} + I_{nu+1}) / 2 and K' = -(K_{nu-1} + K_{nu+1}) / 2
    ivp = 0.5 * complex(special.ive(nu - 1.0, z) + special.ive(nu + 1.0, z))
    kvp = -0.5 * complex(special.kve(nu - 1.0, z) + special.kve(nu + 1.0, z))
    _check_values(nu, z, ive, kve, ivp, kvp)
    return BesselEval(
        nu=nu, z=z, i_value=ive, k_value=kve, i_derivative=ivp, k_derivative=kvp, scaled=True
    )


def i_log_derivative(nu: float, z: complex) -> complex:
    """``I_nu'(z) / I_nu(z)`` from scaled values."""
    z = _check_argument(z)
    num = special.ive(nu - 1.0, z) + special.ive(nu + 1.0, z)
    den = 2.0 * special.ive(nu, z)
    if den == 0:
        raise SpecialFunctionError(
            "I_nu vanishes at the evaluation point",
            details={"nu": nu, "z": str(z)},
        )
    value = complex(num / den)
    _check_values(nu, z, value)
    return value


def k_log_derivative(nu: float, z: complex) -> complex:
    """``K_nu'(z) / K_nu(z)`` from scaled values."""
    z = _check_argument(z)
    neighbours = special.kve(nu - 1.0, z) + special.kve(nu + 1.0, z)
    value = complex(-neighbours / (2.0 * special.kve(nu, z)))
    _check_values(nu, z, value)
    return value


def ascending_series_i(nu: float, z: complex, terms: int = 80) -> complex:
    """``I_nu(z)`` from its ascending power series.

    ``sum_j (z/2)^(2j+nu) / (j! Gamma(j+nu+1))`` with principal powers.
    """
    z = complex(z)
    half = z / 2.0
    if nu < 0 and float(nu).is_integer():
        nu = -nu
    term = half**nu / special.gamma(nu + 1.0) if z != 0 else (1.0 + 0j if nu == 0 else 0j)
    quarter = half * half
    total = term
    for j in range(1, terms):
        term = term * quarter / (j * (j + nu))
        total += term
        if abs(term) <= 1e-18 * abs(total):
            break
    return complex(total)


def k_integral(nu: float, z: complex) -> complex:
    """``K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt`` for ``Re z > 0``.

    Raises:
        ValidationError: If ``Re z <= 0``
    """
    z = complex(z)
    if z.real <= 0:
        raise ValidationError("Integral representation requires Re z > 0", details={"z": str(z)})
    # Truncate where exp(-Re z cosh t) is far below double precision.
    t_max = float(np.arccosh(1.0 + 60.0 / z.real)) + 1.0
    return integrate(
        lambda t: np.exp(-z * np.cosh(t)) * np.cosh(nu * t),
        0.0,
        t_max,
        complex_valued=True,
        epsabs=0.0,
        epsrel=1e-12,
    )


def crossover_discrepancy(
    nu: float, radii: tuple[float, ...] = (7.0, 8.0, 9.0), n_angles: int = 12
) -> float:
    """Maximum relative difference between the ascending series and the library value.

    Sampled on circles of the given radii, avoiding the branch cut.
    """
    worst = 0.0
    for radius in radii:
        for theta in np.linspace(-0.9 * np.pi, 0.9 * np.pi, n_angles):
            z = complex(radius * np.exp(1j * theta))
            library = bessel_ik(nu, z).i_value
            series = ascending_series_i(nu, z)
            worst = max(worst, abs(series - library) / abs(library))
    logger.debug("Series crossover discrepancy", nu=nu, worst=worst)
    return worst


def reflection_residual(nu: float, z: complex) -> float:
    """Relative residual of ``K_nu = (pi/2)(I_{-nu} - I_nu)/sin(nu pi)``.

    Raises:
        ValidationError: If ``nu`` is an integer
    """
    if float(nu).is_integer():
        raise ValidationError("Connection formula requires non-integer order", details={"nu": nu})
    ev = bessel_ik(nu, z)
    i_minus = bessel_ik(-nu, z).i_value
    k_connected = 0.5 * np.pi * (i_minus - ev.i_value) / np.sin(nu * np.pi)
    return float(abs(k_connected - ev.k_value) / abs(ev.k_value))
