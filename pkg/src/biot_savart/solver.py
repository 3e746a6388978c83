"""Velocity recovery from a divergence-free vorticity field in one Fourier sector.

The vertical velocity solves

    (-d^2/dr^2 - (1/r) d/dr + m^2/r^2 + k^2) u_z = (1/r) d(r w_theta)/dr - (i m / r) w_r

by collocation on the full Lobatto set of the radial grid, with ``u_z = 0`` at infinity,
``u_z = 0`` at the origin for ``m != 0`` and ``u_z' = 0`` there for ``m = 0``. The other
components follow algebraically:

    u_r = (u_z' + w_theta) / (i k),    u_theta = ((i m / r) u_z - w_r) / (i k).
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy import linalg

from src.biot_savart.fields import FourierSector, RadialField, SectorOperators
from src.profiles.grid import RadialGrid
from src.utils.exceptions import BiotSavartError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

DIVERGENCE_TOLERANCE = 1e-8


@dataclass(frozen=True)
class EllipticSolver:
    """Factorized radial operator of one sector; immutable and shared through a cache."""

    m_sq: int
    k_sq: float
    grid: RadialGrid

    @cached_property
    def factor(self) -> tuple[np.ndarray, np.ndarray]:
        grid = self.grid
        n = grid.r.size
        D = grid.D_full
        r = grid.r
        M = np.zeros((n + 2, n + 2))
        inner = slice(1, n + 1)
        M[inner] = -(D @ D)[inner] - D[inner] / r[:, None]
        M[inner, inner] += np.diag(self.m_sq / r**2 + self.k_sq)
        if self.m_sq == 0:
            M[0] = D[0]
        else:
            M[0, 0] = 1.0
        M[-1, -1] = 1.0
        try:
            lu, piv = linalg.lu_factor(M)
        except (linalg.LinAlgError, ValueError) as e:
            logger.error("Elliptic factorization failed", m_sq=self.m_sq, k_sq=self.k_sq, n=n)
            raise BiotSavartError(
                "Elliptic operator could not be factorized",
                details={"m_sq": self.m_sq, "k_sq": self.k_sq, "nodes": n, "error": str(e)},
            )
        if np.any(np.abs(np.diag(lu)) == 0) or not np.all(np.isfinite(lu)):
            raise BiotSavartError(
                "Elliptic operator is singular; refine the grid",
                details={"m_sq": self.m_sq, "k_sq": self.k_sq, "nodes": n},
            )
        return lu, piv

    def solve_full(self, rhs: np.ndarray) -> np.ndarray:
        """Solution on the full Lobatto set for right-hand sides given at interior nodes.

        ``rhs`` may be a vector or a matrix whose columns are right-hand sides.
        """
        n = self.grid.r.size
        padded = np.zeros((n + 2,) + rhs.shape[1:], dtype=complex)
        padded[1 : n + 1] = rhs
        return linalg.lu_solve(self.factor, padded)

    @cached_property
    def green(self) -> tuple[np.ndarray, np.ndarray]:
        """Matrices mapping the interior right-hand side to ``u_z`` and ``u_z'`` at interior nodes."""
        n = self.grid.r.size
        full = linalg.lu_solve(self.factor, np.vstack([np.zeros(n), np.eye(n), np.zeros(n)]))
        inner = slice(1, n + 1)
        return full[inner], (self.grid.D_full @ full)[inner]


@lru_cache(maxsize=64)
def elliptic_solver(m: int, k: float, grid: RadialGrid) -> EllipticSolver:
    """Cached solver per ``(m^2, k^2, grid)``."""
    return EllipticSolver(m * m, float(k * k), grid)


def source_term(sector: FourierSector, omega: RadialField) -> np.ndarray:
    """``(1/r) d(r w_theta)/dr - (i m / r) w_r``."""
    ops = SectorOperators.of(sector, omega.grid)
    return ops.radial_div @ omega.comp_theta - ops.im_over_r * omega.comp_r


def check_divergence(sector: FourierSector, omega: RadialField) -> float:
    """Maximal discrete divergence, rejected above ``1e-8 * max(1, max |w|)``.

    Raises:
        ValidationError: If the field is not divergence-free
    """
    residual = float(np.max(np.abs(omega.divergence(sector))))
    scale = max(1.0, omega.max_abs())
    if residual > DIVERGENCE_TOLERANCE * scale:
        logger.error("Vorticity is not divergence-free", m=sector.m, k=sector.k, residual=residual)
        raise ValidationError(
            "Vorticity field is not divergence-free",
            details={"m": sector.m, "k": sector.k, "residual": residual, "scale": scale},
        )
    return residual


def velocity_from_vorticity(sector: FourierSector, omega: RadialField) -> RadialField:
    """Solve the Biot-Savart problem in the sector ``(m, k)``.

    Args:
        sector: Fourier sector with ``k != 0``
        omega: Divergence-free vorticity

    Returns:
        Velocity field on the same grid

    Raises:
        ValidationError: If ``k == 0`` or the vorticity is not divergence-free
        BiotSavartError: If the discrete elliptic problem is singular
    """
    sector.require_k("velocity_from_vorticity")
    check_divergence(sector, omega)

    grid = omega.grid
    solver = elliptic_solver(sector.m, sector.k, grid)
    u_full = solver.solve_full(source_term(sector, omega))
    inner = slice(1, grid.r.size + 1)
    u_z = u_full[inner]
    du_z = (grid.D_full @ u_full)[inner]

    ik = 1j * sector.k
    ops = SectorOperators.of(sector, grid)
    u_r = (du_z + omega.comp_theta) / ik
    u_theta = (ops.im_over_r * u_z - omega.comp_r) / ik
    logger.debug("Velocity recovered", m=sector.m, k=sector.k, nodes=grid.r.size)
    return RadialField(grid, u_r, u_theta, u_z)


def energy_estimate_ratio(sector: FourierSector, omega: RadialField) -> float:
    """Ratio of the velocity energy functional to the enstrophy ``||w||^2``.

    The numerator is ``sum ||u_i'||^2 + k^2 ||u||^2 + |m^2 - 1| (||u_r/r||^2 + ||u_theta/r||^2)
    + m^2 ||u_z/r||^2``. A vanishing vorticity gives 0.
    """
    enstrophy = omega.norm() ** 2
    if enstrophy == 0.0:
        return 0.0
    u = velocity_from_vorticity(sector, omega)
    grid = omega.grid
    r = grid.r
    D = grid.D
    m2 = sector.m**2
    numerator = (
        grid.norm(D @ u.comp_r, D @ u.comp_theta, D @ u.comp_z) ** 2
        + sector.k**2 * u.norm() ** 2
        + abs(m2 - 1) * grid.norm(u.comp_r / r, u.comp_theta / r) ** 2
        + m2 * grid.norm(u.comp_z / r) ** 2
    )
    ratio = float(numerator / enstrophy)
    logger.debug("Energy ratio measured", m=sector.m, k=sector.k, ratio=ratio)
    return ratio
