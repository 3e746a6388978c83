"""Q-space description of admissible profiles.

An admissible profile is determined by ``Q = (1 + J)^{-1/2}``, an increasing function with
values in (0, 1]. The map back to the vorticity uses ``Delta = sqrt(4 + (r^2 - 4) Q^2)`` and
``S = r Q + Delta``:

    Omega = exp(-int_0^r 4 Q / S ds),    Omega' = -4 Omega Q / S,
    W = 8 Omega (1 - Q^2) / S^2.

``1 - Q^2`` is carried as ``c (2 - c)`` with the complement ``c = 1 - Q`` evaluated
separately, which keeps the vorticity accurate where ``Q`` is close to 1.
"""

from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np
from numpy.polynomial.legendre import leggauss
from pydantic import BaseModel, Field
from scipy import interpolate, special

from src.config import get_settings
from src.profiles.grid import RadialGrid
from src.profiles.models import ProfileKind, VortexProfile
from src.utils.exceptions import ProfileError, QuadratureError, ValidationError
from src.utils.logger import get_logger
from src.utils.quadrature import integrate

logger = get_logger(__name__)

ArrayFn = Callable[[Any], Any]

_GL_NODES, _GL_WEIGHTS = leggauss(16)


@dataclass(frozen=True)
class QFunction:
    """Auxiliary function ``Q`` with derivative and complement ``1 - Q``."""

    q: ArrayFn
    q_prime: ArrayFn
    complement: ArrayFn
    label: str = "q"
    real_analytic: bool = True

    def __call__(self, r: Any) -> Any:
        return self.q(r)

    def j(self, r: Any) -> Any:
        """``J = Q^-2 - 1 = c (2 - c) / Q^2``."""
        c = self.complement(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return c * (2.0 - c) / self.q(r) ** 2

    def seminorm(self, grid: RadialGrid) -> float:
        """``N(Q) = sup r |Q'(r)|`` over the grid."""
        return float(np.max(grid.r * np.abs(self.q_prime(grid.r))))

    @cached_property
    def seminorm_N(self) -> float:
        settings = get_settings()
        return self.seminorm(RadialGrid(settings.grid_nodes, settings.grid_scale))

    @classmethod
    def constant(cls, value: float) -> "QFunction":
        """Constant function, outside the class but useful for mollification checks."""
        return cls(
            q=lambda r: np.full_like(np.asarray(r, dtype=float), value)[()],
            q_prime=lambda r: np.zeros_like(np.asarray(r, dtype=float))[()],
            complement=lambda r: np.full_like(np.asarray(r, dtype=float), 1.0 - value)[()],
            label=f"constant({value})",
        )

    @classmethod
    def from_samples(cls, r: np.ndarray, q: np.ndarray, label: str = "samples") -> "QFunction":
        """Monotone cubic interpolant of sampled values, extended by its last value.

        Raises:
            ValidationError: If radii are not increasing or values are not increasing in (0, 1]
        """
        r = np.asarray(r, dtype=float)
        q = np.asarray(q, dtype=float)
        if r.size < 4 or np.any(np.diff(r) <= 0):
            raise ValidationError("Q samples need at least 4 strictly increasing radii")
        if np.any(np.diff(q) < 0) or np.any(q > 1.0) or np.any(q < 0.0):
            raise ValidationError("Q samples must be non-decreasing with values in [0, 1]")
        if r[0] > 0:
            r = np.concatenate([[0.0], r])
            q = np.concatenate([[0.0], q])
        spline = interpolate.PchipInterpolator(r, q, extrapolate=False)
        deriv = spline.derivative()
        r_last, q_last = float(r[-1]), float(q[-1])

        def q_fn(x: Any) -> Any:
            x = np.asarray(x, dtype=float)
            return np.where(x >= r_last, q_last, spline(np.clip(x, 0.0, r_last)))[()]

        def dq_fn(x: Any) -> Any:
            x = np.asarray(x, dtype=float)
            return np.where(x >= r_last, 0.0, deriv(np.clip(x, 0.0, r_last)))[()]

        return cls(
            q=q_fn,
            q_prime=dq_fn,
            complement=lambda x: (1.0 - np.asarray(q_fn(x)))[()],
            label=label,
            real_analytic=False,
        )


def q_from_profile(profile: VortexProfile) -> QFunction:
    """``Q = (1 + J)^{-1/2}`` of an admissible profile.

    Raises:
        ClassViolationError: If the profile is not admissible
    """
    profile.require_class_w("q_from_profile")

    def q(r: Any) -> Any:
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0, r, 1.0)
        with np.errstate(over="ignore"):
            val = 1.0 / np.sqrt(1.0 + profile.j(safe))
        return np.where(r > 0, val, 0.0)[()]

    def q_prime(r: Any) -> Any:
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0, r, 1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            jp1 = 1.0 + profile.j(safe)
            val = -profile.j_prime(safe) / (2.0 * jp1**1.5)
        # Limit at the origin: Q ~ r |Omega''(0)| / 2.
        origin = 0.5 * abs(float(np.real(profile.omega_second(1e-6))))
        return np.where(r > 0, val, origin)[()]

    def complement(r: Any) -> Any:
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0, r, 1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            j = profile.j(safe)
            s = np.sqrt(1.0 + j)
            val = np.where(np.isinf(j), 1.0, j / (s * (s + 1.0)))
        return np.where(r > 0, val, 1.0)[()]

    return QFunction(
        q=q,
        q_prime=q_prime,
        complement=complement,
        label=f"Q[{profile.kind.value}]",
        real_analytic=profile.real_analytic,
    )


class ReconstructedProfile(VortexProfile):
    """Profile rebuilt from its Q-function."""

    _KNOTS = np.concatenate([[0.0], np.geomspace(1e-8, 1e8, 321)])

    def __init__(self, qf: QFunction) -> None:
        self.qf = qf
        self._table: np.ndarray | None = None
        table = self._cumulative()
        r_far = float(self._KNOTS[-1])
        gamma = float(np.exp(2.0 * np.log(r_far) - table[-1]))
        c_far = float(qf.complement(r_far))
        q_far = float(qf.q(r_far))
        j_far = c_far * (2.0 - c_far) / q_far**2
        super().__init__(
            ProfileKind.FROM_Q,
            {},
            gamma=gamma,
            ell_inf=2.0 * gamma * j_far,
            real_analytic=qf.real_analytic,
            closed_form=False,
        )

    def _integrand(self, s: Any) -> Any:
        q = self.qf.q(s)
        delta = np.sqrt(4.0 + (np.asarray(s) ** 2 - 4.0) * q**2)
        return 4.0 * q / (np.asarray(s) * q + delta)

    def _cumulative(self) -> np.ndarray:
        if self._table is None:
            pieces = []
            for a, b in zip(self._KNOTS[:-1], self._KNOTS[1:], strict=True):
                try:
                    pieces.append(integrate(lambda s: float(self._integrand(s)), float(a), float(b)))
                except QuadratureError as e:
                    logger.error("Reconstruction integral failed", a=float(a), b=float(b))
                    raise ProfileError(
                        "Angular velocity integral diverges; Q is not admissible",
                        details={"a": float(a), "b": float(b), **e.details},
                    )
            self._table = np.concatenate([[0.0], np.cumsum(pieces)])
        return self._table

    def _log_omega(self, r: np.ndarray) -> np.ndarray:
        table = self._cumulative()
        knots = self._KNOTS
        r_far = knots[-1]
        inside = np.clip(r, 0.0, r_far)
        idx = np.clip(np.searchsorted(knots, inside, side="right") - 1, 0, knots.size - 2)
        a = knots[idx]
        half = 0.5 * (inside - a)
        nodes = a[:, None] + half[:, None] * (_GL_NODES[None, :] + 1.0)
        partial = half * (self._integrand(nodes) @ _GL_WEIGHTS)
        total = table[idx] + partial
        tail = 2.0 * np.log(np.maximum(r, r_far) / r_far)
        return -(total + tail)

    def omega(self, r: Any) -> Any:
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.exp(self._log_omega(r_arr))
        return out[0] if np.ndim(r) == 0 else out

    def _s_delta(self, r: Any) -> tuple[Any, Any, Any]:
        q = self.qf.q(r)
        delta = np.sqrt(4.0 + (np.asarray(r) ** 2 - 4.0) * q**2)
        return q, delta, np.asarray(r) * q + delta

    def omega_prime(self, r: Any) -> Any:
        q, _, s = self._s_delta(r)
        return -4.0 * self.omega(r) * q / s

    def W(self, r: Any) -> Any:
        c = self.qf.complement(r)
        _, _, s = self._s_delta(r)
        return 8.0 * self.omega(r) * c * (2.0 - c) / s**2

    def W_prime(self, r: Any) -> Any:
        r_arr = np.asarray(r, dtype=float)
        q, delta, s = self._s_delta(r_arr)
        dq = self.qf.q_prime(r_arr)
        c = self.qf.complement(r_arr)
        one_minus_q2 = c * (2.0 - c)
        d_delta = (r_arr * q**2 + (r_arr**2 - 4.0) * q * dq) / delta
        d_s = q + r_arr * dq + d_delta
        bracket = -4.0 * q * one_minus_q2 / s - 2.0 * q * dq - 2.0 * one_minus_q2 * d_s / s
        return 8.0 * self.omega(r_arr) / s**2 * bracket

    def j(self, r: Any) -> Any:
        return self.qf.j(r)

    def j_prime(self, r: Any) -> Any:
        with np.errstate(divide="ignore", invalid="ignore"):
            return -2.0 * self.qf.q_prime(r) / self.qf.q(r) ** 3


def profile_from_q(qf: QFunction) -> VortexProfile:
    """Reconstruct ``Omega``, ``W`` and ``W'`` from a Q-function.

    Raises:
        ProfileError: If the reconstruction integral diverges or Q is not increasing
    """
    grid = RadialGrid(64, get_settings().grid_scale)
    dq = np.asarray(qf.q_prime(grid.r))
    if np.any(dq < 0):
        raise ProfileError(
            "Q must be increasing",
            details={"r": float(grid.r[int(np.argmin(dq))]), "q_prime": float(np.min(dq))},
        )
    profile = ReconstructedProfile(qf)
    logger.debug("Profile reconstructed from Q", label=qf.label, gamma=profile.gamma)
    return profile


def _window_nodes(
    r: np.ndarray, half_width: float, panels: int = 8
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on ``[max(0, r - h), r + h]`` per radius."""
    lo = np.maximum(r - half_width, 0.0)
    hi = r + half_width
    edges = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, panels + 1)[None, :]
    a, b = edges[:, :-1], edges[:, 1:]
    half = 0.5 * (b - a)
    nodes = a[:, :, None] + half[:, :, None] * (_GL_NODES[None, None, :] + 1.0)
    nodes = nodes.reshape(r.size, -1)
    weights = (half[:, :, None] * _GL_WEIGHTS[None, None, :]).reshape(r.size, -1)
    return nodes, weights


def mollify_q(qf: QFunction, epsilon: float) -> QFunction:
    """Odd-extension heat-kernel smoothing at time ``epsilon / 4``.

    ``Q_eps(r) = (pi eps)^{-1/2} int_0^inf (e^{-(r-s)^2/eps} - e^{-(r+s)^2/eps}) Q(s) ds``.
    The derivative uses the even-extension kernel applied to ``Q'``; the complement is
    ``erfc(r / sqrt(eps))`` plus the smoothed complement. The Gaussian is truncated at
    ``mollify_cutoff * sqrt(eps)``.

    Raises:
        ValidationError: If ``epsilon`` is not positive
        QuadratureError: If the smoothed values are not finite
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive", details={"epsilon": epsilon})
    root = float(np.sqrt(epsilon))
    h = get_settings().mollify_cutoff * root
    norm = 1.0 / np.sqrt(np.pi * epsilon)

    def smooth(fn: ArrayFn, r: Any, sign: float) -> Any:
        r_in = np.asarray(r, dtype=float)
        r_arr = np.atleast_1d(r_in).ravel()
        s, w = _window_nodes(r_arr, h)
        rr = r_arr[:, None]
        if sign < 0:
            kernel = np.exp(-((rr - s) ** 2) / epsilon) * -np.expm1(-4.0 * rr * s / epsilon)
        else:
            kernel = np.exp(-((rr - s) ** 2) / epsilon) + np.exp(-((rr + s) ** 2) / epsilon)
        values = norm * np.sum(kernel * w * np.asarray(fn(s)), axis=1)
        if not np.all(np.isfinite(values)):
            raise QuadratureError("Mollified values are not finite", details={"epsilon": epsilon})
        return values[0] if r_in.ndim == 0 else values.reshape(r_in.shape)

    def q(r: Any) -> Any:
        return smooth(qf.q, r, -1.0)

    def q_prime(r: Any) -> Any:
        return smooth(qf.q_prime, r, 1.0)

    def complement(r: Any) -> Any:
        return special.erfc(np.asarray(r, dtype=float) / root) + smooth(qf.complement, r, -1.0)

    return QFunction(
        q=q,
        q_prime=q_prime,
        complement=complement,
        label=f"mollify({qf.label}, {epsilon:g})",
        real_analytic=True,
    )


def interpolate_q(q0: QFunction, q1: QFunction, t: float) -> QFunction:
    """Convex combination ``(1 - t) q0 + t q1``; the endpoints return the inputs themselves."""
    if not 0.0 <= t <= 1.0:
        raise ValidationError("t must lie in [0, 1]", details={"t": t})
    if t == 0.0:
        return q0
    if t == 1.0:
        return q1
    return QFunction(
        q=lambda r: (1.0 - t) * q0.q(r) + t * q1.q(r),
        q_prime=lambda r: (1.0 - t) * q0.q_prime(r) + t * q1.q_prime(r),
        complement=lambda r: (1.0 - t) * q0.complement(r) + t * q1.complement(r),
        label=f"({1.0 - t:g}*{q0.label} + {t:g}*{q1.label})",
        real_analytic=q0.real_analytic and q1.real_analytic,
    )


def homotopy(q0: QFunction, q1: QFunction, t: float) -> VortexProfile:
    """Profile of the interpolated Q-function ``Q_t = (1 - t) q0 + t q1``."""
    return profile_from_q(interpolate_q(q0, q1, t))


class LipschitzReport(BaseModel):
    """Measured constants of the Q-to-vorticity Lipschitz estimates."""

    ratio_w: float = Field(..., description="sup (1+r^4)|W1-W2| / ||Q1-Q2||")
    ratio_w_prime: float = Field(
        ..., description="sup (1+r^5)|W1'-W2'| / (N(Q1-Q2) + (1+N(Q2))||Q1-Q2||)"
    )
    sup_dq: float = Field(..., description="||Q1-Q2|| over the grid")
    seminorm_dq: float = Field(..., description="N(Q1-Q2) over the grid")
    delta: float = Field(..., description="delta used for the bounds at r = 1")


def check_delta_bounds(q0: QFunction, q1: QFunction, delta: float) -> None:
    """Check ``delta <= min Q_i(1) <= max Q_i(1) <= sqrt(1 - delta^2)``.

    Raises:
        ValidationError: Naming the violated side
    """
    values = [float(q0.q(1.0)), float(q1.q(1.0))]
    if min(values) < delta:
        raise ValidationError(
            "Lower delta bound violated at r = 1",
            details={"side": "lower", "q_at_1": values, "delta": delta},
        )
    if max(values) > np.sqrt(1.0 - delta**2):
        raise ValidationError(
            "Upper delta bound violated at r = 1",
            details={"side": "upper", "q_at_1": values, "delta": delta},
        )


def lipschitz_check(
    q0: QFunction,
    q1: QFunction,
    grid: RadialGrid | None = None,
    delta: float | None = None,
) -> LipschitzReport:
    """Measure the Lipschitz ratios between two Q-functions and their profiles.

    A vanishing numerator over a vanishing denominator counts as 0.
    """
    settings = get_settings()
    grid = grid or RadialGrid(settings.grid_nodes, settings.grid_scale)
    delta = settings.lipschitz_delta if delta is None else delta
    check_delta_bounds(q0, q1, delta)

    r = grid.r
    p0 = profile_from_q(q0)
    p1 = profile_from_q(q1)
    dq = np.asarray(q1.complement(r)) - np.asarray(q0.complement(r))
    d_dq = np.asarray(q0.q_prime(r)) - np.asarray(q1.q_prime(r))
    sup_dq = float(np.max(np.abs(dq)))
    n_dq = float(np.max(r * np.abs(d_dq)))
    n_q1 = q1.seminorm(grid)

    num_w = float(np.max((1.0 + r**4) * np.abs(p0.W(r) - p1.W(r))))
    num_wp = float(np.max((1.0 + r**5) * np.abs(p0.W_prime(r) - p1.W_prime(r))))

    def ratio(num: float, den: float) -> float:
        if num == 0.0:
            return 0.0
        return num / den if den > 0 else float("inf")

    report = LipschitzReport(
        ratio_w=ratio(num_w, sup_dq),
        ratio_w_prime=ratio(num_wp, n_dq + (1.0 + n_q1) * sup_dq),
        sup_dq=sup_dq,
        seminorm_dq=n_dq,
        delta=delta,
    )
    logger.info(
        "Lipschitz ratios measured", ratio_w=report.ratio_w, ratio_w_prime=report.ratio_w_prime
    )
    return report
