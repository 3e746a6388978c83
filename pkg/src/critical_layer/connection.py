"""Connection of the regular endpoint solutions to the local solutions at the critical radius."""

from dataclasses import dataclass
from typing import Any

import numpy as np

from src.biot_savart import FourierSector
from src.config import get_settings
from src.critical_layer.frobenius import FrobeniusExpansion, RootCase, frobenius_series
from src.profiles import VortexProfile
from src.shooting import (
    Branch,
    CoefficientFunctions,
    ShootingSolution,
    infinity_seed,
    integrate_from_origin,
    origin_seed,
    outer_radius,
    propagate,
)
from src.utils.exceptions import CriticalLayerError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

SINGULAR_CONDITION = 1e12


def _derivative(solution: ShootingSolution, r: float) -> tuple[complex, complex]:
    """``(u, u')`` with ``u' = p/A - u/r``."""
    u, p = solution.evaluate(r)
    u0, p0 = complex(u[0]), complex(p[0])
    return u0, p0 / complex(solution.coeffs.A(r)) - u0 / r


def _local_matrix(expansion: FrobeniusExpansion, r: float) -> np.ndarray:
    v_plus, dv_plus, _ = expansion.evaluate(r, "plus")
    v_minus, dv_minus, _ = expansion.evaluate(r, "minus")
    return np.array([[complex(v_minus), complex(v_plus)], [complex(dv_minus), complex(dv_plus)]])


def _connect(
    expansion: FrobeniusExpansion, r: float, state: tuple[complex, complex]
) -> tuple[np.ndarray, float]:
    matrix = _local_matrix(expansion, r)
    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > SINGULAR_CONDITION:
        logger.error("Singular connection matrix", r=r, condition=condition)
        raise CriticalLayerError(
            "Connection matrix is singular",
            details={"r": r, "condition": condition, "r_bar": expansion.r_bar},
        )
    return np.linalg.solve(matrix, np.array(state)), condition


@dataclass(frozen=True, eq=False)
class ConnectionResult:
    """``psi_0 = a0_- phi_- + a0_+ phi_+`` below ``r_bar`` and ``psi_inf = ainf_- phi_- + ainf_+ phi_+`` above.

    Both endpoint solutions are scaled to unit size at their matching radius.
    """

    expansion: FrobeniusExpansion
    delta: float
    alpha0_minus: complex
    alpha0_plus: complex
    alpha_inf_minus: complex
    alpha_inf_plus: complex
    condition_origin: float
    condition_infinity: float
    consistency: float

    def payload(self) -> dict[str, Any]:
        def pair(z: complex) -> list[float]:
            return [z.real, z.imag]

        return {
            "r_bar": self.expansion.r_bar,
            "delta": self.delta,
            "case": self.expansion.case.value,
            "alpha0_minus": pair(self.alpha0_minus),
            "alpha0_plus": pair(self.alpha0_plus),
            "alpha_inf_minus": pair(self.alpha_inf_minus),
            "alpha_inf_plus": pair(self.alpha_inf_plus),
            "condition_origin": self.condition_origin,
            "condition_infinity": self.condition_infinity,
            "consistency": self.consistency,
        }


def _endpoint_branches(
    sector: FourierSector,
    profile: VortexProfile,
    expansion: FrobeniusExpansion,
    inner: float,
    outer: float,
) -> tuple[ShootingSolution, ShootingSolution]:
    """Regular solutions at ``a = 0`` from the origin up to ``inner`` and from ``R_max`` down to ``outer``."""
    settings = get_settings()
    coeffs = CoefficientFunctions(sector, profile)
    s = complex(0.0, -sector.m * expansion.b)
    r0 = settings.origin_radius
    state, scale = origin_seed(coeffs, s, r0)
    from_origin = propagate(
        coeffs, s, r0, state, inner, branch=Branch.FROM_ORIGIN, normalization=scale
    )
    R = outer_radius(sector.k)
    state, scale = infinity_seed(coeffs, s, R)
    from_infinity = propagate(
        coeffs, s, R, state, outer, branch=Branch.FROM_INFINITY, normalization=scale
    )
    return from_origin, from_infinity


def connection_coefficients(
    sector: FourierSector,
    profile: VortexProfile,
    b: float,
    expansion: FrobeniusExpansion | None = None,
) -> ConnectionResult:
    """Coefficients of the endpoint solutions in the basis ``(phi_-, phi_+)``.

    The endpoint solutions are matched at ``r_bar -+ delta`` with ``delta = 0.05 r_bar``
    (smaller when the expansion converges on a smaller disc).

    Raises:
        ValidationError: If the roots are complex (the endpoint solutions are then not real)
        CriticalLayerError: If a matching matrix is singular
    """
    expansion = expansion or frobenius_series(sector, profile, b)
    if expansion.case == RootCase.COMPLEX_CONJUGATE:
        raise ValidationError(
            "Connection coefficients are defined for real indicial roots",
            details={"m": sector.m, "k": sector.k, "b": b, "J": expansion.j_at_rbar},
        )
    r_bar = expansion.r_bar
    delta = min(0.05 * r_bar, 0.5 * expansion.radius_estimate)
    inner, outer = r_bar - delta, r_bar + delta

    from_origin, from_infinity = _endpoint_branches(sector, profile, expansion, inner, outer)
    psi0 = _derivative(from_origin, inner)
    psi_inf = _derivative(from_infinity, outer)
    scale0 = abs(psi0[0]) + delta * abs(psi0[1])
    scale_inf = abs(psi_inf[0]) + delta * abs(psi_inf[1])
    psi0 = (psi0[0] / scale0, psi0[1] / scale0)
    psi_inf = (psi_inf[0] / scale_inf, psi_inf[1] / scale_inf)

    alpha0, cond0 = _connect(expansion, inner, psi0)
    alpha_inf, cond_inf = _connect(expansion, outer, psi_inf)

    # Third radius for the overdetermined check.
    check = r_bar + min(1.5 * delta, 0.9 * expansion.radius_estimate)
    u_check, _ = from_infinity.evaluate(check)
    expected = complex(u_check[0]) / scale_inf
    v_minus = complex(expansion.evaluate(check, "minus")[0])
    v_plus = complex(expansion.evaluate(check, "plus")[0])
    combined = alpha_inf[0] * v_minus + alpha_inf[1] * v_plus
    consistency = abs(combined - expected) / max(abs(expected), 1e-300)

    result = ConnectionResult(
        expansion=expansion,
        delta=delta,
        alpha0_minus=complex(alpha0[0]),
        alpha0_plus=complex(alpha0[1]),
        alpha_inf_minus=complex(alpha_inf[0]),
        alpha_inf_plus=complex(alpha_inf[1]),
        condition_origin=cond0,
        condition_infinity=cond_inf,
        consistency=consistency,
    )
    logger.info(
        "Connection coefficients computed",
        m=sector.m,
        k=sector.k,
        b=expansion.b,
        r_bar=r_bar,
        consistency=consistency,
    )
    return result


@dataclass(frozen=True)
class UpperSolutionReport:
    """Samples of ``L(U)`` for ``U = (b - Omega)^d`` on ``(r_bar, inf)``."""

    r: np.ndarray
    values_plus: np.ndarray
    values_minus: np.ndarray
    gamma_plus: float
    gamma_minus: float

    @property
    def positive(self) -> bool:
        return bool(np.all(self.values_plus > 0) and np.all(self.values_minus > 0))


def _operator_on_power(
    sector: FourierSector, profile: VortexProfile, b: float, d: float, r: np.ndarray
) -> np.ndarray:
    """``-(A d*U)' + B U`` for ``U = (b - Omega)^d``, with ``B`` taken at ``a = 0``."""
    m2, k2 = float(sector.m**2), sector.k**2
    den = m2 + k2 * r**2
    A = r**2 / den
    omega, d_omega = profile.omega(r), profile.omega_prime(r)
    W, dW = profile.W(r), profile.W_prime(r)
    gap = b - omega
    j = profile.j(r)
    t1 = -A * d_omega**2 * (d * (d - 1.0) + sector.mk_ratio_sq * j)
    t2 = (1.0 - (m2 - k2 * r**2) / den**2) * gap**2
    t3 = A * gap * ((d - 1.0) * dW / r + 2.0 * k2 / den * (W - d * r * d_omega))
    return gap ** (d - 2.0) * (t1 + t2 + t3)


def upper_solution_check(
    sector: FourierSector,
    profile: VortexProfile,
    b: float,
    r: np.ndarray | None = None,
) -> UpperSolutionReport:
    """``L(U_+-)`` on a grid of ``(r_bar, inf)``, with ``gamma = min L(U) / U'``.

    Raises:
        ValidationError: If the indicial roots are not real
    """
    expansion = frobenius_series(sector, profile, b, order=1)
    if expansion.case == RootCase.COMPLEX_CONJUGATE:
        raise ValidationError(
            "Upper solutions are defined for real indicial roots", details={"J": expansion.j_at_rbar}
        )
    r_bar, b = expansion.r_bar, expansion.b
    r = np.geomspace(r_bar * 1.001, r_bar + 20.0, 400) if r is None else np.asarray(r, dtype=float)
    if np.any(r <= r_bar):
        raise ValidationError("Samples must lie above r_bar", details={"r_bar": r_bar})
    gaps = []
    values = []
    for d in (expansion.d_plus.real, expansion.d_minus.real):
        value = _operator_on_power(sector, profile, b, d, r)
        dU = -d * (b - profile.omega(r)) ** (d - 1.0) * profile.omega_prime(r)
        values.append(value)
        with np.errstate(divide="ignore", invalid="ignore"):
            gaps.append(float(np.nanmin(value / dU)))
    report = UpperSolutionReport(
        r=r,
        values_plus=values[0],
        values_minus=values[1],
        gamma_plus=gaps[0],
        gamma_minus=gaps[1],
    )
    logger.info("Upper solutions checked", m=sector.m, k=sector.k, b=b, positive=report.positive)
    return report


@dataclass(frozen=True)
class LimitSequence:
    """Regular solutions at ``s = m (a - i b)`` for decreasing ``a``, normalized at ``r_bar - offset``."""

    a_values: list[float]
    left: list[tuple[complex, complex]]
    right: list[tuple[complex, complex]]
    differences: list[float]

    @property
    def converging(self) -> bool:
        return all(later <= earlier for earlier, later in zip(self.differences, self.differences[1:]))


def limit_sequence(
    sector: FourierSector,
    profile: VortexProfile,
    b: float,
    a_values: tuple[float, ...] = (1e-3, 1e-4, 1e-5, 1e-6),
    offset: float = 0.3,
) -> LimitSequence:
    """Origin-regular solutions as ``a -> 0`` and their successive ``C^1`` differences at ``r_bar + offset``.

    Raises:
        ValidationError: If ``r_bar <= offset`` or some ``a <= 0``
    """
    if any(a <= 0 for a in a_values):
        raise ValidationError("a must be positive", details={"a_values": list(a_values)})
    r_bar = profile.radius_where_omega(b)
    if r_bar <= offset:
        raise ValidationError(
            "The critical radius is too close to the axis",
            details={"r_bar": r_bar, "offset": offset},
        )
    left_r, right_r = r_bar - offset, r_bar + offset
    left: list[tuple[complex, complex]] = []
    right: list[tuple[complex, complex]] = []
    for a in a_values:
        s = complex(sector.m * a, -sector.m * b)
        solution = integrate_from_origin(sector, profile, s, right_r)
        u_l, du_l = _derivative(solution, left_r)
        u_r, du_r = _derivative(solution, right_r)
        left.append((1.0 + 0j, du_l / u_l))
        right.append((u_r / u_l, du_r / u_l))
    differences = [
        abs(right[i + 1][0] - right[i][0])
        + abs(right[i + 1][1] - right[i][1])
        + abs(left[i + 1][1] - left[i][1])
        for i in range(len(a_values) - 1)
    ]
    logger.info("Limit sequence computed", m=sector.m, k=sector.k, b=b, differences=differences)
    return LimitSequence(a_values=list(a_values), left=left, right=right, differences=differences)
