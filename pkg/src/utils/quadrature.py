"""Adaptive quadrature with convergence checks and retries."""

from collections.abc import Callable, Sequence
from typing import Any

import numpy as np
from scipy import integrate as sp_integrate
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.config import get_settings
from src.utils.exceptions import QuadratureError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class _NotConverged(Exception):
    """Internal signal for a quadrature attempt that should be retried."""

    def __init__(self, value: float, abserr: float, message: str) -> None:
        self.value = value
        self.abserr = abserr
        self.message = message
        super().__init__(message)


def _quad_once(
    f: Callable[[float], float],
    a: float,
    b: float,
    epsabs: float,
    epsrel: float,
    limit: int,
    points: Sequence[float] | None,
) -> float:
    kwargs: dict[str, Any] = {"epsabs": epsabs, "epsrel": epsrel, "limit": limit, "full_output": 1}
    if points is not None and np.isfinite(a) and np.isfinite(b):
        kwargs["points"] = [p for p in points if a < p < b]
    result = sp_integrate.quad(f, a, b, **kwargs)
    value, abserr = float(result[0]), float(result[1])
    if not np.isfinite(value):
        raise QuadratureError(
            "Quadrature produced a non-finite value",
            details={"a": a, "b": b, "value": value},
        )
    if len(result) > 3:
        # Roundoff-limited results are accepted when the error estimate is still small.
        if abserr <= max(1e3 * epsabs, 1e3 * epsrel * abs(value), 1e-9 * abs(value)):
            return value
        raise _NotConverged(value, abserr, str(result[3]))
    return value


def _quad_real(
    f: Callable[[float], float],
    a: float,
    b: float,
    epsabs: float,
    epsrel: float,
    limit: int,
    points: Sequence[float] | None,
    retries: int,
) -> float:
    try:
        for attempt in Retrying(
            retry=retry_if_exception_type(_NotConverged),
            stop=stop_after_attempt(retries),
            reraise=True,
        ):
            with attempt:
                scaled_limit = limit * 2 ** (attempt.retry_state.attempt_number - 1)
                return _quad_once(f, a, b, epsabs, epsrel, scaled_limit, points)
    except _NotConverged as e:
        logger.error("Quadrature did not converge", a=a, b=b, abserr=e.abserr, reason=e.message)
        raise QuadratureError(
            f"Quadrature did not converge on [{a}, {b}]: {e.message}",
            details={"a": a, "b": b, "value": e.value, "abserr": e.abserr},
        )
    raise QuadratureError("Quadrature retry loop exited without a result", details={"a": a, "b": b})


def integrate(
    f: Callable[[float], Any],
    a: float,
    b: float,
    *,
    complex_valued: bool = False,
    epsabs: float | None = None,
    epsrel: float | None = None,
    limit: int | None = None,
    points: Sequence[float] | None = None,
    retries: int = 3,
) -> Any:
    """Integrate ``f`` over ``[a, b]`` with adaptive Gauss-Kronrod quadrature.

    Infinite limits are allowed. Complex integrands are integrated as two real integrals.
    A non-converged attempt is retried with a doubled subinterval limit.

    Args:
        f: Integrand
        a: Lower limit
        b: Upper limit
        complex_valued: Whether ``f`` returns complex values
        epsabs: Absolute tolerance (settings default)
        epsrel: Relative tolerance (settings default)
        limit: Initial subinterval limit (settings default)
        points: Interior break points for finite intervals
        retries: Number of attempts

    Returns:
        Integral value (float or complex)

    Raises:
        QuadratureError: If quadrature fails to converge or returns a non-finite value
    """
    settings = get_settings()
    epsabs = settings.quad_epsabs if epsabs is None else epsabs
    epsrel = settings.quad_epsrel if epsrel is None else epsrel
    limit = settings.quad_limit if limit is None else limit

    if a == b:
        return 0j if complex_valued else 0.0

    if not complex_valued:
        return _quad_real(lambda x: float(f(x)), a, b, epsabs, epsrel, limit, points, retries)

    re = _quad_real(lambda x: float(np.real(f(x))), a, b, epsabs, epsrel, limit, points, retries)
    im = _quad_real(lambda x: float(np.imag(f(x))), a, b, epsabs, epsrel, limit, points, retries)
    return complex(re, im)
