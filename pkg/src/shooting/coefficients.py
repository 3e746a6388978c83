"""Coefficients of the radial eigenvalue equation.

With ``d*/dr = d/dr + 1/r`` the radial velocity solves

    -(A (u' + u/r))' + B u = 0,
    A = r^2 / (m^2 + k^2 r^2),
    B = 1 + k^2 A Phi / gamma^2 + (i m r / gamma) (W / (m^2 + k^2 r^2))',

where ``gamma = s + i m Omega``. For ``s = m (a - i b)`` this is ``gamma = i m gamma_*`` with
``gamma_* = Omega - b - i a``.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from src.biot_savart import FourierSector
from src.profiles import VortexProfile
from src.utils.exceptions import ValidationError


@dataclass(frozen=True, eq=False)
class CoefficientFunctions:
    """``A``, ``B`` and ``gamma_*`` of one sector and profile."""

    sector: FourierSector
    profile: VortexProfile

    @property
    def m(self) -> int:
        return self.sector.m

    @property
    def k(self) -> float:
        return self.sector.k

    def A(self, r: Any) -> Any:
        return self.sector.A(r)

    def A_prime(self, r: Any) -> Any:
        return self.sector.A_prime(r)

    def g(self, r: Any) -> Any:
        """``(W / (m^2 + k^2 r^2))'``."""
        r = np.asarray(r)
        den = self.m**2 + self.k**2 * r**2
        return self.profile.W_prime(r) / den - 2.0 * self.k**2 * r * self.profile.W(r) / den**2

    def gamma(self, r: Any, s: complex) -> Any:
        return s + 1j * self.m * self.profile.omega(r)

    def gamma_star(self, r: Any, a: float, b: float) -> Any:
        return self.profile.omega(r) - b - 1j * a

    def B(self, r: Any, s: complex) -> Any:
        """Zero-order coefficient; defined for ``gamma != 0``.

        Raises:
            ValidationError: If ``m = 0`` and ``s = 0``
        """
        if self.m == 0 and s == 0:
            raise ValidationError("The axisymmetric equation requires s != 0", details={"k": self.k})
        r = np.asarray(r)
        gam = self.gamma(r, s)
        value = 1.0 + self.k**2 * self.A(r) * self.profile.phi(r) / gam**2
        if self.m != 0:
            value = value + 1j * self.m * r * self.g(r) / gam
        return value

    def B_real(self, r: Any, b: float) -> Any:
        """``B`` on the imaginary axis ``a = 0``; real wherever ``Omega(r) != b``.

        ``1 - (k^2 / m^2) A Phi / (Omega - b)^2 + r g / (Omega - b)``.
        """
        r = np.asarray(r)
        gs = self.profile.omega(r) - b
        swirl = self.sector.mk_ratio_sq * self.A(r) * self.profile.phi(r) / gs**2
        return 1.0 - swirl + r * self.g(r) / gs

    def D_infinity(self, r: float, s: complex) -> complex:
        """``D = B/A + 3/(4 r^2) - A'/(2 r A)`` of the equation for ``r^{1/2} u``."""
        A = self.A(r)
        return complex(self.B(r, s) / A + 0.75 / r**2 - self.A_prime(r) / (2.0 * r * A))

    def origin_exponent(self) -> int:
        """``u ~ r^e`` at the origin: ``e = |m| - 1`` for ``m != 0`` and 1 for ``m = 0``."""
        return abs(self.m) - 1 if self.m != 0 else 1

    def origin_correction(self, r0: float, s: complex) -> complex:
        """Coefficient ``c`` of the two-term expansion ``u = r^e (1 + c r^2)``."""
        B0 = complex(self.B(r0, s))
        if self.m == 0:
            return self.k**2 * B0 / 8.0
        m = abs(self.m)
        beta2 = (B0 - 1.0) / r0**2
        return (beta2 * m**2 + (m + 2) * self.k**2 / m) / (4 * m + 4)
