"""Kelvin's dispersion relation for the Rankine vortex.

Inside the core ``u_z = A I_m(beta r)`` with ``beta^2 = k^2 (1 + 4/gamma^2)`` and
``gamma = s + i m``; outside ``u_z = B K_m(k r)``. A nontrivial ``(A, B)`` exists iff

    I_m'(beta) / (beta I_m(beta)) + 2 i m / (gamma beta^2) - K_m'(k) / (k K_m(k)) = 0.

The left side depends on ``beta^2`` only, so the branch of ``beta`` is immaterial.
"""

import numpy as np
from pydantic import BaseModel, Field
from scipy import optimize

from src.shooting import ContourRoot, Rectangle, ScanResult, locate_zeros, robust_winding
from src.specfun import i_log_derivative, k_log_derivative
from src.utils.exceptions import SpecialFunctionError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

RANKINE_COLUMNS = ["m", "k", "b", "residual"]
ROOT_XTOL = 1e-14


class DispersionPoint(BaseModel):
    """Dispersion function at one spectral parameter."""

    m: int
    k: float
    s_re: float
    s_im: float
    gamma_re: float
    gamma_im: float
    beta_sq_re: float
    beta_sq_im: float
    value_re: float
    value_im: float
    scale: float = Field(..., description="Sum of the moduli of the three terms")

    @property
    def value(self) -> complex:
        return complex(self.value_re, self.value_im)

    @property
    def relative(self) -> float:
        return abs(self.value) / self.scale if self.scale > 0 else float("inf")


class RankineRoot(BaseModel):
    m: int
    k: float
    b: float
    residual: float = Field(..., description="|D| at the refined root")

    def row(self) -> list[object]:
        return [self.m, self.k, self.b, self.residual]


def _check(m: int, k: float, s: complex) -> complex:
    if m == 0 or k == 0:
        raise ValidationError(
            "The dispersion relation requires m != 0 and k != 0", details={"m": m, "k": k}
        )
    gamma = s + 1j * m
    if s == 0 or gamma == 0:
        raise ValidationError(
            "s = 0 and s = -i m are excluded", details={"m": m, "k": k, "s": str(s)}
        )
    return gamma


def dispersion_point(m: int, k: float, s: complex) -> DispersionPoint:
    """Evaluate the dispersion function and its scale.

    Raises:
        ValidationError: If ``m = 0``, ``k = 0``, ``s = 0``, ``s = -i m`` or ``beta = 0``
        SpecialFunctionError: If ``I_m(beta) = 0`` (a pole of the dispersion function)
    """
    s = complex(s)
    gamma = _check(m, k, s)
    beta_sq = k**2 * (1.0 + 4.0 / gamma**2)
    if beta_sq == 0:
        raise ValidationError("beta vanishes at gamma^2 = -4", details={"m": m, "k": k, "s": str(s)})
    beta = complex(np.sqrt(beta_sq))
    order = abs(m)
    try:
        inner = i_log_derivative(order, beta) / beta
    except SpecialFunctionError as e:
        logger.error("Dispersion function has a pole", m=m, k=k, s=str(s), beta=str(beta))
        raise SpecialFunctionError(
            "I_m(beta) vanishes: pole of the dispersion function",
            details={"m": m, "k": k, "s": str(s), "beta": str(beta), "reason": e.message},
        )
    swirl = 2j * m / (gamma * beta_sq)
    outer = k_log_derivative(order, abs(k)) / abs(k)
    value = inner + swirl - outer
    return DispersionPoint(
        m=m,
        k=k,
        s_re=s.real,
        s_im=s.imag,
        gamma_re=gamma.real,
        gamma_im=gamma.imag,
        beta_sq_re=beta_sq.real,
        beta_sq_im=beta_sq.imag,
        value_re=value.real,
        value_im=value.imag,
        scale=abs(inner) + abs(swirl) + abs(outer),
    )


def dispersion(m: int, k: float, s: complex) -> complex:
    """Dispersion function ``D(s)``; zero exactly at eigenvalues of the Rankine vortex."""
    return dispersion_point(m, k, s).value


def _axis_value(m: int, k: float, b: float) -> float:
    try:
        return dispersion(m, k, complex(0.0, -m * b)).real
    except (SpecialFunctionError, ValidationError):
        return float("nan")


def _roots_along(m: int, k: float, b: np.ndarray) -> list[RankineRoot]:
    """Sign changes of ``D(-i m b)`` along ``b`` that are roots rather than poles."""
    values = np.array([_axis_value(m, k, x) for x in b])
    roots: list[RankineRoot] = []
    for i in range(b.size - 1):
        lo, hi = values[i], values[i + 1]
        if not (np.isfinite(lo) and np.isfinite(hi)) or lo * hi > 0:
            continue
        try:
            root = float(
                optimize.brentq(lambda x: _axis_value(m, k, x), b[i], b[i + 1], xtol=ROOT_XTOL)
            )
            point = dispersion_point(m, k, complex(0.0, -m * root))
        except (SpecialFunctionError, ValidationError, RuntimeError):
            # Refined onto an excluded point such as s = 0 or beta = 0.
            continue
        # Sign changes across poles of I_m(beta) refine to large |D|.
        if point.relative > 1e-6:
            continue
        roots.append(RankineRoot(m=m, k=k, b=root, residual=abs(point.value)))
    return roots


def find_rankine_roots(
    m: int,
    k: float,
    b_range: tuple[float, float] | None = None,
    *,
    y_max: float = 60.0,
    samples: int = 2000,
) -> list[RankineRoot]:
    """Purely imaginary roots ``s = -i m b``, sorted by ``b``.

    Without ``b_range`` both families accumulating at ``b = 1`` are scanned through
    ``y = |beta|`` in ``(0, y_max]``, where ``|1 - b| = 2 / (|m| sqrt(1 + y^2/k^2))``; a
    ``b_range`` is scanned uniformly with ``samples`` points.

    Raises:
        ValidationError: If ``m = 0`` or ``k = 0``
    """
    if m == 0 or k == 0:
        raise ValidationError("Rankine roots require m != 0 and k != 0", details={"m": m, "k": k})
    if b_range is not None:
        lo, hi = sorted(float(x) for x in b_range)
        grid = np.linspace(lo, hi, samples)
        grid = grid[(grid != 1.0) & (grid != 0.0)]
        roots = _roots_along(m, k, grid)
    else:
        y = np.linspace(y_max / samples, y_max, samples)
        eps = 2.0 / (abs(m) * np.sqrt(1.0 + y**2 / k**2))
        roots = _roots_along(m, k, np.sort(1.0 - eps)) + _roots_along(m, k, np.sort(1.0 + eps))
    roots.sort(key=lambda root: root.b)
    logger.info("Rankine roots found", m=m, k=k, roots=len(roots))
    return roots


def count_unstable(
    m: int,
    k: float,
    rect: Rectangle,
    *,
    panels: int | None = None,
) -> ScanResult:
    """Argument-principle count of zeros of ``D`` with ``s = m (a - i b)`` inside ``rect``.

    Poles of ``D`` lie on the imaginary axis, so for ``a_min > 0`` the count is the number
    of eigenvalues.

    Raises:
        ValidationError: If ``a_min <= 0``
        ContourError: If the boundary cannot be resolved
    """
    if rect.a_min <= 0:
        raise ValidationError(
            "The rectangle must lie off the imaginary axis", details={"rect": rect.model_dump()}
        )

    def normalized(s: complex) -> complex:
        point = dispersion_point(m, k, s)
        return point.value / point.scale

    count, used = robust_winding(normalized, rect, m, panels=panels, jobs=1)
    roots: list[ContourRoot] = []
    if count > 0:
        bounds = used.s_bounds(m)
        for s in locate_zeros(normalized, lambda z: dispersion(m, k, z), bounds, count, jobs=1):
            residual = dispersion_point(m, k, s).relative
            roots.append(ContourRoot(s=[s.real, s.imag], residual=residual))
    logger.info("Rankine contour count", m=m, k=k, rect=used.model_dump(), winding=count)
    return ScanResult(m=m, k=k, rect=used, winding=count, roots=roots)
