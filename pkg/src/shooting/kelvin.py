"""Neutral modes on the imaginary axis.

For ``s = -i m b`` with ``b`` outside ``[0, 1]`` the coefficients of the radial equation are
real, so the miss function is real up to rounding and its zeros are found by bracketing sign
changes along ``b``.
"""

from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, Field
from scipy import optimize

from src.biot_savart import FourierSector
from src.config import get_settings
from src.profiles import VortexProfile
from src.shooting.miss import evaluate_miss
from src.utils.exceptions import ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

KELVIN_COLUMNS = ["m", "k", "b", "residual"]
ROOT_XTOL = 1e-13


class KelvinMode(BaseModel):
    """Purely imaginary eigenvalue ``s = -i m b`` (``s = i omega`` in the axisymmetric sector)."""

    m: int
    k: float
    b: float = Field(..., description="Frequency parameter; omega for m = 0")
    residual: float = Field(..., description="Relative miss at the refined root")
    slope: float = Field(default=float("nan"), description="Relative derivative of the miss at the root")

    @property
    def s(self) -> complex:
        if self.m == 0:
            return complex(0.0, self.b)
        return complex(0.0, -self.m * self.b)

    def row(self) -> list[object]:
        return [self.m, self.k, self.b, self.residual]


def _scan_points(lo: float, hi: float, anchor: float, samples: int, offset: float) -> np.ndarray:
    """Points in ``[lo, hi]`` clustered geometrically toward ``anchor`` (one of the endpoints)."""
    far = hi if anchor == lo else lo
    span = abs(far - anchor)
    first = min(offset, span / samples)
    steps = np.geomspace(first, span, samples)
    direction = 1.0 if far > anchor else -1.0
    return np.sort(anchor + direction * steps)


def _bracket_roots(
    f: Callable[[float], float],
    points: np.ndarray,
    jobs: int,
) -> list[tuple[float, float]]:
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        values = np.array(list(pool.map(f, points)))
    brackets = []
    for i in range(points.size - 1):
        lo, hi = values[i], values[i + 1]
        if not (np.isfinite(lo) and np.isfinite(hi)):
            continue
        if lo == 0.0:
            brackets.append((points[i], points[i]))
        elif lo * hi < 0.0:
            brackets.append((points[i], points[i + 1]))
    return brackets


def _refine(
    f: Callable[[float], float],
    brackets: list[tuple[float, float]],
) -> list[float]:
    roots = []
    for lo, hi in brackets:
        if lo == hi:
            roots.append(lo)
            continue
        roots.append(float(optimize.brentq(f, lo, hi, xtol=ROOT_XTOL)))
    return roots


def _mode(
    sector: FourierSector, profile: VortexProfile, b: float, s: complex, step: complex
) -> KelvinMode:
    at = evaluate_miss(sector, profile, s)
    h = 1e-6 * max(abs(b), 1e-3)
    ahead = evaluate_miss(sector, profile, s + step * h, at.r_match).value
    behind = evaluate_miss(sector, profile, s - step * h, at.r_match).value
    slope = abs(ahead - behind) / (2.0 * h * at.scale) if at.scale > 0 else float("nan")
    return KelvinMode(m=sector.m, k=sector.k, b=b, residual=at.relative, slope=float(slope))


def find_kelvin_modes(
    sector: FourierSector,
    profile: VortexProfile,
    b_range: tuple[float, float],
    *,
    samples: int = 200,
    jobs: int | None = None,
) -> list[KelvinMode]:
    """Roots of ``b -> miss(-i m b)`` inside ``b_range``, sorted by ``b``.

    The range must lie in ``(1, inf)`` or in ``(-inf, 0]``; the scan clusters toward ``b = 1``
    (respectively ``b = 0``) where the modes accumulate. The point ``b = 0`` itself belongs to
    the essential spectrum and is never sampled.

    Raises:
        ValidationError: If ``m = 0`` or the range meets ``[0, 1]`` other than at ``b = 0``
    """
    if sector.m == 0:
        raise ValidationError("Kelvin modes with m = 0 are found by find_axisymmetric_modes")
    lo, hi = sorted(float(x) for x in b_range)
    if lo >= 1.0 and hi > 1.0:
        points = _scan_points(lo, hi, lo, samples, 2e-3)
    elif hi <= 0.0 and lo < min(hi, -1e-4):
        hi = min(hi, -1e-4)
        points = _scan_points(lo, hi, hi, samples, 1e-4)
    else:
        raise ValidationError(
            "b_range must lie in (1, inf) or (-inf, 0]",
            details={"b_range": [lo, hi], "m": sector.m, "k": sector.k},
        )
    m = sector.m
    jobs = get_settings().jobs if jobs is None else jobs

    def f(b: float) -> float:
        return float(evaluate_miss(sector, profile, complex(0.0, -m * b)).value.real)

    roots = _refine(f, _bracket_roots(f, points, jobs))
    modes = [_mode(sector, profile, b, complex(0.0, -m * b), complex(0.0, -m)) for b in roots]
    logger.info(
        "Kelvin scan finished",
        m=sector.m,
        k=sector.k,
        b_range=[lo, hi],
        roots=len(modes),
    )
    return modes


def find_axisymmetric_modes(
    k: float,
    profile: VortexProfile,
    omega_range: tuple[float, float],
    *,
    samples: int = 200,
    jobs: int | None = None,
) -> list[KelvinMode]:
    """Neutral axisymmetric modes ``s = i omega`` with ``omega`` in a range excluding 0.

    The equation depends on ``omega^2`` only, so the scan clusters toward the end of the range
    nearest to 0, where the modes accumulate.

    Raises:
        ValidationError: If ``k = 0`` or the range contains 0
    """
    sector = FourierSector(0, k)
    sector.require_k("find_axisymmetric_modes")
    lo, hi = sorted(float(x) for x in omega_range)
    if lo <= 0.0 <= hi:
        raise ValidationError("omega_range must not contain 0", details={"omega_range": [lo, hi]})
    anchor = lo if lo > 0 else hi
    points = _scan_points(lo, hi, anchor, samples, 1e-3 * abs(anchor))
    jobs = get_settings().jobs if jobs is None else jobs

    def f(omega: float) -> float:
        return float(evaluate_miss(sector, profile, complex(0.0, omega)).value.real)

    roots = _refine(f, _bracket_roots(f, points, jobs))
    modes = [_mode(sector, profile, w, complex(0.0, w), 1j) for w in roots]
    logger.info("Axisymmetric scan finished", k=k, omega_range=[lo, hi], roots=len(modes))
    return modes
