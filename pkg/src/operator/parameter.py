"""Spectral parameter ``s = m (a - i b)``."""

from dataclasses import dataclass
from typing import Any

import numpy as np

from src.utils.exceptions import ValidationError


@dataclass(frozen=True)
class SpectralParameter:
    """Complex spectral parameter with its ``(a, b)`` coordinates for ``m != 0``."""

    s: complex
    m: int

    @classmethod
    def from_ab(cls, m: int, a: float, b: float) -> "SpectralParameter":
        """``s = m (a - i b)``.

        Raises:
            ValidationError: For ``m = 0``, where ``(a, b)`` is undefined
        """
        if m == 0:
            raise ValidationError(
                "The (a, b) parametrization requires m != 0", details={"a": a, "b": b}
            )
        return cls(complex(m * a, -m * b), m)

    @property
    def a(self) -> float:
        self._require_m()
        return self.s.real / self.m

    @property
    def b(self) -> float:
        self._require_m()
        return -self.s.imag / self.m

    def gamma_star(self, omega: Any) -> Any:
        """``Omega(r) - b - i a`` for angular velocity samples ``omega``."""
        return np.asarray(omega) - self.b - 1j * self.a

    def _require_m(self) -> None:
        if self.m == 0:
            raise ValidationError(
                "The (a, b) parametrization requires m != 0", details={"s": str(self.s)}
            )
