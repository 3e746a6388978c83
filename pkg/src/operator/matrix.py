"""Discretized linearized Euler operator on divergence-free vorticity fields.

The unknowns are the radial and azimuthal vorticity at the interior grid nodes; the
vertical component is slaved to them by the divergence constraint

    w_z = -(1 / (i k)) [(1/r) d(r w_r)/dr + (i m / r) w_theta],

so every vector of the reduced space is a discrete element of the enstrophy space.
The operator splits as ``L = A + B`` with the rotation multiplier

    A w = -i m Omega w + r Omega' w_r e_theta

and the Biot-Savart coupling ``B w = i k W u - W' u_r e_z``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import linalg

from src.biot_savart import FourierSector, RadialField, SectorOperators, elliptic_solver
from src.config import get_settings
from src.profiles import RadialGrid, VortexProfile
from src.utils.exceptions import ProfileError
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense matrices of ``A``, ``B`` and ``L`` acting on stacked ``(w_r, w_theta)``."""

    sector: FourierSector
    profile: VortexProfile
    grid: RadialGrid
    A: np.ndarray
    B: np.ndarray
    vertical: np.ndarray

    @cached_property
    def matrix(self) -> np.ndarray:
        return self.A + self.B

    @property
    def size(self) -> int:
        return self.A.shape[0]

    @cached_property
    def norm_factor(self) -> np.ndarray:
        """Upper-triangular ``R`` with ``||R v||_2`` the ``L^2(r dr)`` norm of the full field."""
        n = self.grid.r.size
        sqrt_w = np.sqrt(self.grid.weights)
        basis = np.vstack(
            [
                np.hstack([np.eye(n), np.zeros((n, n))]),
                np.hstack([np.zeros((n, n)), np.eye(n)]),
                self.vertical,
            ]
        )
        return linalg.qr(np.tile(sqrt_w, 3)[:, None] * basis, mode="r")[0][: 2 * n]

    def norm(self, v: np.ndarray) -> float:
        return float(np.linalg.norm(self.norm_factor @ v))

    def to_field(self, v: np.ndarray) -> RadialField:
        """Full vorticity field of a reduced vector."""
        n = self.grid.r.size
        return RadialField(self.grid, v[:n], v[n:], self.vertical @ v)

    def from_field(self, omega: RadialField) -> np.ndarray:
        return np.concatenate([omega.comp_r, omega.comp_theta])

    def apply(self, omega: RadialField) -> RadialField:
        """``L w`` for a divergence-free field."""
        return self.to_field(self.matrix @ self.from_field(omega))


def _profile_samples(
    profile: VortexProfile, r: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with np.errstate(all="ignore"):
        w = np.real(np.asarray(profile.W(r), dtype=complex))
        om = np.real(np.asarray(profile.omega(r), dtype=complex))
        dom = np.real(np.asarray(profile.omega_prime(r), dtype=complex))
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(om)) and np.all(np.isfinite(dom))):
        raise ProfileError(
            "Profile is not evaluable on the operator grid", details={"kind": profile.kind.value}
        )
    return w, om, dom


def build(
    sector: FourierSector,
    profile: VortexProfile,
    grid: RadialGrid | None = None,
) -> OperatorMatrix:
    """Assemble ``L_{m,k}`` on the grid.

    Args:
        sector: Fourier sector with ``k != 0``
        profile: Base vortex
        grid: Radial grid (``operator_nodes`` interior nodes by default)

    Raises:
        ValidationError: If ``k == 0``
        ProfileError: If the profile cannot be sampled
        BiotSavartError: If the elliptic operator is singular
    """
    sector.require_k("build")
    settings = get_settings()
    grid = grid or RadialGrid(settings.operator_nodes, settings.grid_scale)
    r = grid.r
    n = r.size
    m = sector.m
    w, om, dom = _profile_samples(profile, r)

    ops = SectorOperators.of(sector, grid)
    gz, gdz = elliptic_solver(m, sector.k, grid).green
    f_r = -ops.im_over_r
    f_theta = ops.radial_div
    im_r = ops.im_over_r[:, None]
    eye = np.eye(n)

    rot = np.diag(-1j * m * om)
    A = np.block([[rot, np.zeros((n, n))], [np.diag(r * dom), rot]])

    wc = w[:, None]
    B = np.block(
        [
            [wc * (gdz * f_r[None, :]), wc * (gdz @ f_theta + eye)],
            [wc * (im_r * (gz * f_r[None, :]) - eye), wc * (im_r * (gz @ f_theta))],
        ]
    )

    inv_ik = 1.0 / (1j * sector.k)
    vertical = -inv_ik * np.hstack([ops.radial_div, np.diag(ops.im_over_r)])

    logger.debug("Operator assembled", m=m, k=sector.k, nodes=n, kind=profile.kind.value)
    return OperatorMatrix(sector=sector, profile=profile, grid=grid, A=A, B=B, vertical=vertical)
