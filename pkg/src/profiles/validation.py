"""Diagnostics for the admissible class of vorticity profiles."""

from typing import Any

import numpy as np
from pydantic import BaseModel, Field

from src.config import get_settings
from src.profiles.grid import RadialGrid
from src.profiles.models import VortexProfile
from src.profiles.qfunction import QFunction
from src.utils.logger import get_logger

logger = get_logger(__name__)

# Values below this are treated as underflowed tails and excluded from strict sign checks.
_UNDERFLOW = 1e-250


class CheckResult(BaseModel):
    """Outcome of one admissibility condition."""

    name: str = Field(..., description="Condition identifier")
    passed: bool = Field(..., description="Whether the condition holds on the grid")
    worst_radius: float | None = Field(default=None, description="Radius of the worst violation")
    worst_value: float | None = Field(default=None, description="Magnitude at the worst radius")


class ValidationReport(BaseModel):
    """Per-condition admissibility report."""

    subject: str = Field(..., description="Profile or Q-function label")
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _finite(x: Any) -> float | None:
    value = float(np.real(x))
    return value if np.isfinite(value) else None


def _worst(
    r: np.ndarray, bad: np.ndarray, magnitude: np.ndarray
) -> tuple[float | None, float | None]:
    if not np.any(bad):
        idx = int(np.nanargmax(np.abs(np.where(np.isfinite(magnitude), magnitude, 0.0))))
        return _finite(r[idx]), _finite(magnitude[idx])
    mag = np.where(bad, np.abs(np.nan_to_num(magnitude, nan=np.inf)), -np.inf)
    idx = int(np.argmax(mag))
    return _finite(r[idx]), _finite(magnitude[idx])


def _sign_check(
    name: str, r: np.ndarray, values: np.ndarray, mask: np.ndarray, sign: float
) -> CheckResult:
    bad = mask & ~(sign * values > 0)
    radius, value = _worst(r, bad, values)
    return CheckResult(
        name=name, passed=not bool(np.any(bad)), worst_radius=radius, worst_value=value
    )


def _tail_check(name: str, r: np.ndarray, deviation: np.ndarray, tol: float) -> CheckResult:
    """Deviation at the two outermost nodes below ``tol`` and not increasing outward."""
    outer = np.abs(deviation[-2:])
    ok = bool(np.all(np.isfinite(outer)) and np.all(outer <= tol) and outer[1] <= outer[0] + 1e-300)
    return CheckResult(
        name=name, passed=ok, worst_radius=_finite(r[-1]), worst_value=_finite(np.max(outer))
    )


def validate_class_w(profile: VortexProfile, grid: RadialGrid | None = None) -> ValidationReport:
    """Check normalization, H1, finite circulation and tails, H2 and the velocity-vorticity relation.

    Never raises; every failure is reported with the location and size of the worst violation.
    """
    settings = get_settings()
    grid = grid or RadialGrid(settings.grid_nodes, settings.grid_scale)
    r = grid.r
    tol = settings.tail_tolerance
    checks: list[CheckResult] = []

    with np.errstate(all="ignore"):
        try:
            w = np.real(np.asarray(profile.W(r), dtype=complex))
            dw = np.real(np.asarray(profile.W_prime(r), dtype=complex))
            om = np.real(np.asarray(profile.omega(r), dtype=complex))
            dom = np.real(np.asarray(profile.omega_prime(r), dtype=complex))
            jv = np.real(np.asarray(profile.j(r), dtype=complex))
            djv = np.real(np.asarray(profile.j_prime(r), dtype=complex))
            w0 = float(np.real(profile.W(0.0)))
            om0 = float(np.real(profile.omega(0.0)))
        except Exception as e:
            logger.warning("Profile evaluation failed during validation", error=str(e))
            return ValidationReport(
                subject=profile.kind.value,
                checks=[CheckResult(name="evaluable", passed=False)],
            )

        norm_dev = max(abs(w0 - 2.0), abs(om0 - 1.0))
        checks.append(
            CheckResult(
                name="normalization",
                passed=norm_dev <= 1e-8,
                worst_radius=0.0,
                worst_value=norm_dev,
            )
        )

        negative = w < 0
        radius, value = _worst(r, negative, w)
        checks.append(
            CheckResult(
                name="h1_positive",
                passed=not bool(np.any(negative)),
                worst_radius=radius,
                worst_value=value,
            )
        )

        live = w > _UNDERFLOW
        h1 = _sign_check("h1_monotone", r, np.minimum(-dw, -dom), live, 1.0)
        checks.append(h1)

        checks.append(_sign_check("phi_positive", r, 2.0 * om * w, live, 1.0))

        gamma_ok = bool(np.isfinite(profile.gamma) and profile.gamma > 0)
        circ_dev = np.abs(r[-2:] ** 2 * om[-2:] - profile.gamma) / max(profile.gamma, 1e-300)
        checks.append(
            CheckResult(
                name="finite_circulation",
                passed=gamma_ok and bool(np.all(circ_dev <= tol)),
                worst_radius=_finite(r[-1]),
                worst_value=_finite(profile.gamma),
            )
        )

        if np.isfinite(profile.ell_inf):
            tail_dev = np.abs(r**4 * w - profile.ell_inf) / max(1.0, profile.ell_inf)
        else:
            tail_dev = np.full_like(r, np.inf)
        checks.append(_tail_check("ell_inf_tail", r, tail_dev, tol))

        if profile.ell_inf > 0 and np.isfinite(profile.ell_inf):
            checks.append(_tail_check("tail_decay", r, r * dw / w + 4.0, tol))

        j_live = np.isfinite(jv) & (jv > _UNDERFLOW)
        checks.append(_sign_check("j_positive", r, jv, live & np.isfinite(jv), 1.0))
        checks.append(_sign_check("h2_monotone_j", r, -djv, j_live | ~np.isfinite(jv), 1.0))
        checks.append(_tail_check("h2_tail", r, np.where(np.isfinite(djv), r * djv, np.inf), tol))

        residual = profile.velovort_residual(r)
        velovort_tol = 1e-10 if profile.closed_form else 1e-6
        idx = int(np.nanargmax(residual))
        checks.append(
            CheckResult(
                name="velovort",
                passed=bool(np.nanmax(residual) <= velovort_tol),
                worst_radius=_finite(r[idx]),
                worst_value=_finite(residual[idx]),
            )
        )

    report = ValidationReport(subject=profile.kind.value, checks=checks)
    failed = [c.name for c in checks if not c.passed]
    logger.info("Profile validated", kind=profile.kind.value, passed=report.passed, failed=failed)
    return report


def validate_class_q(qf: QFunction, grid: RadialGrid | None = None) -> ValidationReport:
    """Check ``Q' > 0``, ``Q, r Q' -> 0`` at the origin and ``r Q' -> 0`` at infinity."""
    settings = get_settings()
    grid = grid or RadialGrid(settings.grid_nodes, settings.grid_scale)
    r = grid.r
    tol = settings.tail_tolerance
    with np.errstate(all="ignore"):
        q = np.asarray(qf.q(r), dtype=float)
        dq = np.asarray(qf.q_prime(r), dtype=float)
        c = np.asarray(qf.complement(r), dtype=float)
    checks = [
        _sign_check("q_increasing", r, dq, c > _UNDERFLOW, 1.0),
        CheckResult(
            name="q_range",
            passed=bool(np.all((q > 0) & (q <= 1.0))),
            worst_radius=_finite(r[int(np.argmin(q))]),
            worst_value=_finite(np.min(q)),
        ),
    ]
    inner_q = np.abs(q[:2])
    inner_rq = np.abs(r[:2] * dq[:2])
    origin_ok = bool(
        np.all(inner_q <= tol)
        and np.all(inner_rq <= tol)
        and inner_q[0] <= inner_q[1]
        and inner_rq[0] <= inner_rq[1]
    )
    checks.append(
        CheckResult(
            name="q_origin",
            passed=origin_ok,
            worst_radius=_finite(r[0]),
            worst_value=_finite(max(inner_q.max(), inner_rq.max())),
        )
    )
    checks.append(_tail_check("q_tail", r, r * dq, tol))
    return ValidationReport(subject=qf.label, checks=checks)
