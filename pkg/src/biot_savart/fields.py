"""Fourier sectors and complex vector fields sampled on a radial grid."""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any

import numpy as np

from src.profiles.grid import RadialGrid
from src.utils.exceptions import ValidationError


@dataclass(frozen=True)
class FourierSector:
    """Perturbations proportional to ``exp(i m theta + i k z)``."""

    m: int
    k: float

    def require_k(self, operation: str) -> None:
        """Reject ``k = 0``, which lies outside the enstrophy space.

        Raises:
            ValidationError: If ``k == 0``
        """
        if self.k == 0:
            raise ValidationError(
                f"{operation} requires k != 0",
                details={"m": self.m, "k": self.k, "operation": operation},
            )

    @property
    def mk_ratio_sq(self) -> float:
        """``k^2 / m^2``; infinite for ``m = 0``."""
        return float("inf") if self.m == 0 else self.k**2 / self.m**2

    def A(self, r: Any) -> Any:
        """``A(r) = r^2 / (m^2 + k^2 r^2)``."""
        r = np.asarray(r)
        return r**2 / (self.m**2 + self.k**2 * r**2)

    def A_prime(self, r: Any) -> Any:
        r = np.asarray(r)
        return 2.0 * self.m**2 * r / (self.m**2 + self.k**2 * r**2) ** 2


@dataclass(frozen=True, eq=False)
class RadialField:
    """Complex vector field ``(f_r, f_theta, f_z)`` at the interior nodes of a grid."""

    grid: RadialGrid
    comp_r: np.ndarray
    comp_theta: np.ndarray
    comp_z: np.ndarray

    def __post_init__(self) -> None:
        n = self.grid.r.size
        for name in ("comp_r", "comp_theta", "comp_z"):
            values = np.asarray(getattr(self, name), dtype=complex)
            if values.shape != (n,):
                raise ValidationError(
                    "Field component does not match the grid",
                    details={"component": name, "shape": list(values.shape), "nodes": n},
                )
            object.__setattr__(self, name, values)

    @classmethod
    def zeros(cls, grid: RadialGrid) -> "RadialField":
        z = np.zeros(grid.r.size, dtype=complex)
        return cls(grid, z, z.copy(), z.copy())

    @classmethod
    def from_functions(cls, grid: RadialGrid, f_r: Any, f_theta: Any, f_z: Any) -> "RadialField":
        """Sample three callables of ``r`` on the grid."""
        r = grid.r
        return cls(grid, f_r(r), f_theta(r), f_z(r))

    @property
    def components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.comp_r, self.comp_theta, self.comp_z

    def norm(self) -> float:
        """``L^2(r dr)`` norm."""
        return self.grid.norm(*self.components)

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(c)) for c in self.components))

    def __add__(self, other: "RadialField") -> "RadialField":
        return RadialField(
            self.grid,
            self.comp_r + other.comp_r,
            self.comp_theta + other.comp_theta,
            self.comp_z + other.comp_z,
        )

    def __sub__(self, other: "RadialField") -> "RadialField":
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> "RadialField":
        return RadialField(
            self.grid, factor * self.comp_r, factor * self.comp_theta, factor * self.comp_z
        )

    def divergence(self, sector: FourierSector) -> np.ndarray:
        """``(1/r) d(r f_r)/dr + (i m / r) f_theta + i k f_z`` at the nodes."""
        ops = SectorOperators.of(sector, self.grid)
        return (
            ops.radial_div @ self.comp_r
            + ops.im_over_r * self.comp_theta
            + 1j * sector.k * self.comp_z
        )

    def curl(self, sector: FourierSector) -> "RadialField":
        """Discrete curl in the sector, built from the same derivative matrices as ``divergence``."""
        ops = SectorOperators.of(sector, self.grid)
        ik = 1j * sector.k
        return RadialField(
            self.grid,
            ops.im_over_r * self.comp_z - ik * self.comp_theta,
            ik * self.comp_r - self.grid.D @ self.comp_z,
            ops.radial_div @ self.comp_theta - ops.im_over_r * self.comp_r,
        )

    def rows(self) -> list[list[float]]:
        """``r`` followed by real and imaginary parts of each component."""
        return [
            [float(r), *(float(v) for c in (fr, ft, fz) for v in (c.real, c.imag))]
            for r, fr, ft, fz in zip(
                self.grid.r, self.comp_r, self.comp_theta, self.comp_z, strict=True
            )
        ]


FIELD_COLUMNS = ["r", "re_r", "im_r", "re_theta", "im_theta", "re_z", "im_z"]


@dataclass(frozen=True)
class SectorOperators:
    """Matrices shared by divergence, curl and the Biot-Savart solve."""

    sector: FourierSector
    grid: RadialGrid

    @classmethod
    def of(cls, sector: FourierSector, grid: RadialGrid) -> "SectorOperators":
        return _operators(sector.m, float(sector.k), grid)

    @cached_property
    def im_over_r(self) -> np.ndarray:
        return 1j * self.sector.m / self.grid.r

    @cached_property
    def radial_div(self) -> np.ndarray:
        """``(1/r) D r``."""
        r = self.grid.r
        return (self.grid.D * r[None, :]) / r[:, None]


@lru_cache(maxsize=128)
def _operators(m: int, k: float, grid: RadialGrid) -> SectorOperators:
    return SectorOperators(FourierSector(m, k), grid)


def random_vorticity(
    sector: FourierSector,
    grid: RadialGrid,
    rng: np.random.Generator,
    degree: int = 3,
) -> RadialField:
    """Random divergence-free vorticity, the discrete curl of a smooth decaying potential.

    Potential components are ``p(r^2) r^e exp(-r^2)`` with complex normal coefficients and
    origin exponents compatible with the azimuthal mode.
    """
    r = grid.r
    m = abs(sector.m)
    envelope = np.exp(-(r**2))
    exponents = (max(m - 1, 0) if m else 1, max(m - 1, 0) if m else 1, m)
    comps = []
    for e in exponents:
        coeffs = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        comps.append(np.polynomial.polynomial.polyval(r**2, coeffs) * r**e * envelope)
    return RadialField(grid, *comps).curl(sector)
