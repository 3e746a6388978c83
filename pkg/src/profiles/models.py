"""Vortex profile abstractions."""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any

import numpy as np
from scipy import optimize

from src.utils.exceptions import ClassViolationError, ProfileError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class ProfileKind(str, Enum):
    """Built-in and derived vorticity profile families."""

    RANKINE = "rankine"
    KAUFMANN_SCULLY = "kaufmann-scully"
    LAMB_OSEEN = "lamb-oseen"
    REFERENCE_W1 = "reference-w1"
    FROM_Q = "from-q"
    FROM_VORTICITY = "from-vorticity"


class VortexProfile(ABC):
    """Axisymmetric vorticity profile ``W`` with angular velocity ``Omega``.

    Subclasses supply ``W``, ``W'``, ``Omega`` and ``Omega'``; the Rayleigh function
    ``Phi = 2 Omega W`` and ``J = Phi / Omega'^2`` follow. All methods accept scalars or
    numpy arrays. Closed forms flagged ``complex_capable`` also accept complex radii.

    Instances are immutable after construction and safe to share across threads.
    """

    def __init__(
        self,
        kind: ProfileKind,
        params: dict[str, float] | None = None,
        *,
        gamma: float,
        ell_inf: float,
        class_w: bool = True,
        real_analytic: bool = True,
        complex_capable: bool = False,
        closed_form: bool = True,
    ) -> None:
        self.kind = kind
        self.params: dict[str, float] = dict(params or {})
        self.gamma = float(gamma)
        self.ell_inf = float(ell_inf)
        self.class_w = class_w
        self.real_analytic = real_analytic
        self.complex_capable = complex_capable
        self.closed_form = closed_form

    def __repr__(self) -> str:
        return f"{type(self).__name__}(kind={self.kind.value!r}, params={self.params!r})"

    @abstractmethod
    def W(self, r: Any) -> Any:
        """Vorticity."""

    @abstractmethod
    def W_prime(self, r: Any) -> Any:
        """Radial derivative of the vorticity."""

    @abstractmethod
    def omega(self, r: Any) -> Any:
        """Angular velocity."""

    @abstractmethod
    def omega_prime(self, r: Any) -> Any:
        """Radial derivative of the angular velocity."""

    def omega_second(self, r: Any) -> Any:
        """``Omega'' = (W' - 3 Omega') / r``, from differentiating ``r Omega' + 2 Omega = W``."""
        return (self.W_prime(r) - 3.0 * self.omega_prime(r)) / r

    def phi(self, r: Any) -> Any:
        """Rayleigh function ``2 Omega W``."""
        return 2.0 * self.omega(r) * self.W(r)

    def phi_prime(self, r: Any) -> Any:
        return 2.0 * (self.omega_prime(r) * self.W(r) + self.omega(r) * self.W_prime(r))

    def j(self, r: Any) -> Any:
        """``J = Phi / Omega'^2`` without admissibility checks."""
        dO = self.omega_prime(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.phi(r) / (dO * dO)

    def j_prime(self, r: Any) -> Any:
        """``J' = Phi' / Omega'^2 - 2 Phi Omega'' / Omega'^3``."""
        dO = self.omega_prime(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.phi_prime(r) / (dO * dO) - 2.0 * self.phi(r) * self.omega_second(r) / dO**3

    @property
    def j_infinity(self) -> float:
        """Limit of ``J`` at infinity, ``ell_inf / (2 Gamma)``."""
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            return float("nan")
        return self.ell_inf / (2.0 * self.gamma)

    def velovort_residual(self, r: np.ndarray) -> np.ndarray:
        """Relative residual of ``r Omega' + 2 Omega - W`` at the given radii."""
        a = r * self.omega_prime(r)
        b = 2.0 * self.omega(r)
        w = self.W(r)
        scale = np.abs(a) + np.abs(b) + np.abs(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            res = np.abs(a + b - w) / scale
        return np.where(scale > 0, res, 0.0)

    def radius_where_omega(self, value: float) -> float:
        """Radius ``r`` with ``Omega(r) = value`` for ``value`` in (0, 1).

        Raises:
            ValidationError: If ``value`` is outside (0, 1)
            ProfileError: If no bracketing radius is found
        """
        if not 0.0 < value < 1.0:
            raise ValidationError(
                "Angular velocity level must lie in (0, 1)", details={"value": value}
            )
        upper = 1.0
        while float(np.real(self.omega(upper))) > value:
            upper *= 2.0
            if upper > 1e12:
                raise ProfileError(
                    "Angular velocity does not reach the requested level",
                    details={"value": value, "kind": self.kind.value},
                )
        lower = 0.0 if upper == 1.0 else upper / 2.0
        return float(
            optimize.brentq(
                lambda s: float(np.real(self.omega(s))) - value, lower, upper, xtol=1e-14, rtol=1e-14
            )
        )

    def require_class_w(self, operation: str) -> None:
        """Reject profiles outside the admissible class.

        Raises:
            ClassViolationError: If the profile is flagged non-admissible
        """
        if not self.class_w:
            logger.error("Non-admissible profile rejected", operation=operation, kind=self.kind.value)
            raise ClassViolationError(
                f"{operation} requires an admissible (class W) profile",
                details={"kind": self.kind.value, "operation": operation},
            )

    def describe(self) -> dict[str, Any]:
        """Summary used in output headers."""
        return {
            "kind": self.kind.value,
            "params": dict(sorted(self.params.items())),
            "gamma": self.gamma,
            "ell_inf": self.ell_inf,
            "class_w": self.class_w,
        }


def j_of(profile: VortexProfile, r: Any) -> Any:
    """Local Richardson-type number ``J = Phi / Omega'^2``.

    Raises:
        ClassViolationError: For the Rankine vortex
        ValidationError: If some radius is not positive
        ProfileError: If ``Omega'`` vanishes at some radius
    """
    if profile.kind == ProfileKind.RANKINE:
        raise ClassViolationError(
            "J is undefined for the Rankine vortex (Omega' vanishes inside the core)",
            details={"kind": profile.kind.value},
        )
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise ValidationError("J requires r > 0", details={"r_min": float(np.min(r_arr))})
    d_omega = profile.omega_prime(r_arr)
    if np.any(d_omega == 0):
        raise ProfileError(
            "Omega' vanishes; J is undefined",
            details={"r": float(r_arr.flat[int(np.argmin(np.abs(d_omega)))])},
        )
    value = profile.j(r_arr)
    return float(value) if np.ndim(value) == 0 else value
