"""Algebraically mapped Chebyshev grid on the half line.

Nodes ``x_j = (1 - cos(j pi / N)) / 2`` on [0, 1] are mapped by ``r = L x / (1 - x)``.
The endpoints ``x = 0`` (``r = 0``) and ``x = 1`` (``r = inf``) belong to the full
Lobatto set used for boundary-value solves; sampled fields live on the interior nodes.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.utils.exceptions import ValidationError


def barycentric_derivative(x: np.ndarray) -> np.ndarray:
    """Differentiation matrix of the polynomial interpolant through the nodes ``x``.

    Barycentric weights ``1 / prod_{k != j} (x_j - x_k)`` are formed in log space so that
    several hundred nodes neither overflow nor underflow.
    """
    n = x.size
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    log_w = -np.sum(np.log(np.abs(diff)), axis=1)
    sign = np.prod(np.sign(diff), axis=1)
    w = sign * np.exp(log_w - log_w.max())
    D = (w[None, :] / w[:, None]) / diff
    D[np.arange(n), np.arange(n)] = 0.0
    D[np.arange(n), np.arange(n)] = -D.sum(axis=1)
    return D


def clenshaw_curtis_weights(N: int) -> np.ndarray:
    """Clenshaw-Curtis weights on [-1, 1] for the ``N + 1`` Lobatto points ``cos(j pi / N)``."""
    theta = np.pi * np.arange(N + 1) / N
    w = np.zeros(N + 1)
    interior = np.arange(1, N)
    v = np.ones(N - 1)
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N**2 - 1)
        for k in range(1, N // 2):
            v -= 2.0 * np.cos(2 * k * theta[interior]) / (4 * k * k - 1)
        v -= np.cos(N * theta[interior]) / (N**2 - 1)
    else:
        w[0] = w[N] = 1.0 / N**2
        for k in range(1, (N - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * theta[interior]) / (4 * k * k - 1)
    w[interior] = 2.0 * v / N
    return w


@dataclass(frozen=True)
class RadialGrid:
    """Mapped Chebyshev grid with ``n`` interior nodes and map scale ``scale``."""

    n: int = 400
    scale: float = 4.0

    def __post_init__(self) -> None:
        if self.n < 4:
            raise ValidationError("Grid needs at least 4 interior nodes", details={"n": self.n})
        if self.scale <= 0:
            raise ValidationError("Grid scale must be positive", details={"scale": self.scale})

    @cached_property
    def x_full(self) -> np.ndarray:
        """Lobatto nodes on [0, 1] including both endpoints."""
        N = self.n + 1
        return 0.5 * (1.0 - np.cos(np.pi * np.arange(N + 1) / N))

    @cached_property
    def x(self) -> np.ndarray:
        """Interior nodes on (0, 1)."""
        return self.x_full[1:-1]

    @cached_property
    def r(self) -> np.ndarray:
        """Interior radii, increasing."""
        return self.scale * self.x / (1.0 - self.x)

    @cached_property
    def dx_dr(self) -> np.ndarray:
        """Metric factor ``dx/dr = (1 - x)^2 / L`` at the interior nodes."""
        return (1.0 - self.x) ** 2 / self.scale

    @cached_property
    def dx_dr_full(self) -> np.ndarray:
        """Metric factor on the full Lobatto set (zero at infinity)."""
        return (1.0 - self.x_full) ** 2 / self.scale

    @cached_property
    def D(self) -> np.ndarray:
        """Radial derivative ``d/dr`` acting on interior samples."""
        return self.dx_dr[:, None] * barycentric_derivative(self.x)

    @cached_property
    def D_full(self) -> np.ndarray:
        """Radial derivative on the full Lobatto set; the row at infinity is zero."""
        return self.dx_dr_full[:, None] * barycentric_derivative(self.x_full)

    @cached_property
    def weights(self) -> np.ndarray:
        """Quadrature weights for ``int_0^inf f(r) r dr`` on the interior nodes."""
        cc = 0.5 * clenshaw_curtis_weights(self.n + 1)[1:-1]
        dr_dx = self.scale / (1.0 - self.x) ** 2
        return cc * self.r * dr_dx

    @cached_property
    def line_weights(self) -> np.ndarray:
        """Quadrature weights for ``int_0^inf f(r) dr`` on the interior nodes."""
        cc = 0.5 * clenshaw_curtis_weights(self.n + 1)[1:-1]
        return cc * self.scale / (1.0 - self.x) ** 2

    def integrate(self, values: np.ndarray) -> complex | float:
        """``int_0^inf f(r) r dr`` from interior samples."""
        result = np.sum(self.weights * values)
        return complex(result) if np.iscomplexobj(result) else float(result)

    def norm(self, *components: np.ndarray) -> float:
        """L2(r dr) norm of a vector field given by its components."""
        total = sum(np.sum(self.weights * np.abs(c) ** 2) for c in components)
        return float(np.sqrt(total))

    def refine(self, factor: float = 2.0) -> "RadialGrid":
        """Grid with ``factor`` times as many interior nodes and the same map."""
        return RadialGrid(n=int(round(self.n * factor)), scale=self.scale)

    def within(self, r_min: float, r_max: float) -> np.ndarray:
        """Boolean mask of interior nodes in ``[r_min, r_max]``."""
        return (self.r >= r_min) & (self.r <= r_max)
