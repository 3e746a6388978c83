"""Small-argument constants of ``K_nu`` and the critical-layer limit integral."""

import numpy as np
from scipy import special

from src.specfun.bessel import bessel_ik
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger
from src.utils.quadrature import integrate

logger = get_logger(__name__)


def _check_order(nu: float) -> None:
    if not 0.0 < nu < 0.5:
        raise ValidationError("Order must lie in (0, 1/2)", details={"nu": nu})


def small_z_constants(nu: float) -> tuple[float, float]:
    """Constants ``(c_nu, d_nu)`` of ``K_nu(z) = c_nu z^-nu (1 - d_nu z^(2 nu) + O(z^2))``."""
    c_nu = np.pi / np.sin(nu * np.pi) * 2.0 ** (nu - 1.0) / special.gamma(1.0 - nu)
    d_nu = special.gamma(1.0 - nu) / special.gamma(1.0 + nu) / 2.0 ** (2.0 * nu)
    return float(c_nu), float(d_nu)


def bessel_limit_value(nu: float) -> float:
    """Limit ``2 pi cos(nu pi) / (1 - 4 nu^2)`` of the integral as ``a -> 0``.

    The removable singularity at ``nu = 1/2`` evaluates to ``pi^2 / 2``.
    """
    if abs(nu - 0.5) < 1e-12:
        return float(np.pi**2 / 2.0)
    return float(2.0 * np.pi * np.cos(nu * np.pi) / (1.0 - 4.0 * nu * nu))


def bessel_limit_integral(nu: float, a: float, epsilon: float = 1.0) -> float:
    """Integrate ``-a x / (a^2 + x^2)^(3/2) |K_nu(x + i a)|^2`` over ``[-epsilon, epsilon]``.

    The weight is odd, so only the odd part of ``|K_nu|^2`` contributes; the integral is
    folded onto ``[0, epsilon]`` with break points at multiples of ``a``.

    Raises:
        ValidationError: If ``nu`` is outside (0, 1/2) or ``a``/``epsilon`` are not positive
        QuadratureError: If the quadrature does not converge
    """
    _check_order(nu)
    if a <= 0 or epsilon <= 0:
        raise ValidationError("a and epsilon must be positive", details={"a": a, "epsilon": epsilon})

    def integrand(x: float) -> float:
        upper = abs(bessel_ik(nu, complex(x, a)).k_value) ** 2
        lower = abs(bessel_ik(nu, complex(-x, a)).k_value) ** 2
        return -a * x / (a * a + x * x) ** 1.5 * (upper - lower)

    points = [p for p in (a, 10.0 * a, 100.0 * a) if p < epsilon]
    value = integrate(integrand, 0.0, epsilon, epsabs=0.0, epsrel=1e-10, points=points)
    logger.debug("Bessel limit integral", nu=nu, a=a, epsilon=epsilon, value=value)
    return float(value)


def angle_integral(nu: float) -> float:
    """Quadrature of ``2 int_0^{pi/2} sin(t) sin(2 nu t) dt``."""
    value = integrate(
        lambda t: np.sin(t) * np.sin(2.0 * nu * t), 0.0, np.pi / 2.0, epsabs=1e-14, epsrel=1e-13
    )
    return 2.0 * float(value)


def angle_integral_exact(nu: float) -> float:
    """Closed form ``4 nu cos(nu pi) / (1 - 4 nu^2)`` of :func:`angle_integral`."""
    if abs(nu - 0.5) < 1e-12:
        return float(np.pi / 2.0)
    return float(4.0 * nu * np.cos(nu * np.pi) / (1.0 - 4.0 * nu * nu))
