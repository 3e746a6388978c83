"""Argument-principle counts of eigenvalues inside rectangles of the spectral plane."""

from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy import optimize
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.biot_savart import FourierSector
from src.config import get_settings
from src.profiles import VortexProfile
from src.shooting.miss import evaluate_miss, miss
from src.utils.exceptions import ContourError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

MAX_BISECTIONS = 16
ZERO_TOLERANCE = 1e-8
ROOT_SIZE = 1e-3


class _Unresolved(Exception):
    """A boundary passes too close to a zero or the phase cannot be tracked."""

    def __init__(self, message: str, s: complex) -> None:
        self.s = s
        super().__init__(message)


class Rectangle(BaseModel):
    """``b_min <= b <= b_max``, ``a_min <= a <= a_max`` in ``s = m (a - i b)``."""

    b_min: float
    b_max: float
    a_min: float
    a_max: float

    @model_validator(mode="after")
    def _ordered(self) -> "Rectangle":
        if not (self.b_min < self.b_max and self.a_min < self.a_max):
            raise ValueError("rectangle bounds must satisfy b_min < b_max and a_min < a_max")
        return self

    @classmethod
    def parse(cls, text: str) -> "Rectangle":
        """From ``"b_min,b_max,a_min,a_max"``."""
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValidationError(
                "A rectangle needs four comma-separated bounds", details={"rect": text}
            )
        return cls(b_min=parts[0], b_max=parts[1], a_min=parts[2], a_max=parts[3])

    def s_bounds(self, m: int) -> tuple[float, float, float, float]:
        """``(re_lo, re_hi, im_lo, im_hi)`` of the image in the ``s``-plane."""
        re = sorted((m * self.a_min, m * self.a_max))
        im = sorted((-m * self.b_min, -m * self.b_max))
        return re[0], re[1], im[0], im[1]

    def perturbed(self, attempt: int) -> "Rectangle":
        """Slightly enlarged copy; ``attempt = 0`` returns the rectangle itself."""
        if attempt == 0:
            return self
        db = 1e-3 * attempt * (self.b_max - self.b_min)
        da = 1e-3 * attempt * (self.a_max - self.a_min)
        return Rectangle(
            b_min=self.b_min - db,
            b_max=self.b_max + db,
            a_min=self.a_min * (1.0 - 1e-2 * attempt),
            a_max=self.a_max + da,
        )


class ContourRoot(BaseModel):
    s: list[float] = Field(..., description="[Re s, Im s]")
    residual: float = Field(..., description="Relative miss at the refined root")

    @property
    def value(self) -> complex:
        return complex(self.s[0], self.s[1])


class ScanResult(BaseModel):
    """Winding number of the miss function around one rectangle, with refined zeros."""

    m: int
    k: float
    rect: Rectangle
    winding: int
    roots: list[ContourRoot] = Field(default_factory=list)


def _boundary(bounds: tuple[float, float, float, float], panels: int) -> np.ndarray:
    """Counterclockwise closed polygon of nodes, panels spread by side length."""
    re_lo, re_hi, im_lo, im_hi = bounds
    corners = [
        complex(re_lo, im_lo),
        complex(re_hi, im_lo),
        complex(re_hi, im_hi),
        complex(re_lo, im_hi),
    ]
    lengths = np.array([abs(corners[(i + 1) % 4] - corners[i]) for i in range(4)])
    counts = np.maximum(2, np.round(panels * lengths / lengths.sum()).astype(int))
    nodes = []
    for i in range(4):
        start, end = corners[i], corners[(i + 1) % 4]
        t = np.arange(counts[i]) / counts[i]
        nodes.extend(start + t * (end - start))
    nodes.append(corners[0])
    return np.array(nodes)


def winding_number(
    f: Callable[[complex], complex],
    bounds: tuple[float, float, float, float],
    *,
    panels: int | None = None,
    zero_tolerance: float = ZERO_TOLERANCE,
    jobs: int | None = None,
) -> int:
    """Number of zeros of ``f`` inside the ``s``-plane rectangle ``bounds``.

    The phase is tracked panel by panel; a panel whose phase jump exceeds ``pi/2`` is bisected.
    ``f`` is expected to be normalized so that ``|f| < zero_tolerance`` signals a nearby zero.

    Raises:
        _Unresolved: If the boundary passes within tolerance of a zero or bisection stalls
    """
    settings = get_settings()
    panels = settings.contour_panels if panels is None else panels
    jobs = settings.jobs if jobs is None else jobs

    def checked(s: complex) -> complex:
        value = complex(f(s))
        if not np.isfinite(value) or abs(value) < zero_tolerance:
            raise _Unresolved("Contour passes too close to a zero", s)
        return value

    nodes = _boundary(bounds, panels)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        values = list(pool.map(checked, nodes))

    def phase_change(s0: complex, f0: complex, s1: complex, f1: complex, depth: int) -> float:
        jump = float(np.angle(f1 / f0))
        if abs(jump) <= np.pi / 2:
            return jump
        if depth >= MAX_BISECTIONS:
            raise _Unresolved("Phase jump unresolved after bisection", 0.5 * (s0 + s1))
        mid = 0.5 * (s0 + s1)
        fm = checked(mid)
        return phase_change(s0, f0, mid, fm, depth + 1) + phase_change(mid, fm, s1, f1, depth + 1)

    total = sum(
        phase_change(nodes[i], values[i], nodes[i + 1], values[i + 1], 0)
        for i in range(nodes.size - 1)
    )
    turns = total / (2.0 * np.pi)
    if abs(turns - round(turns)) > 0.1:
        raise _Unresolved("Accumulated phase is not a whole number of turns", nodes[0])
    return int(round(turns))


def robust_winding(
    f: Callable[[complex], complex],
    rect: Rectangle,
    m: int,
    *,
    panels: int | None = None,
    zero_tolerance: float = ZERO_TOLERANCE,
    jobs: int | None = None,
) -> tuple[int, Rectangle]:
    """Winding number, retried on slightly perturbed rectangles.

    Returns the count and the rectangle it was obtained on.

    Raises:
        ContourError: If every attempt fails
    """
    retries = get_settings().contour_retries
    try:
        for attempt in Retrying(
            retry=retry_if_exception_type(_Unresolved),
            stop=stop_after_attempt(retries),
            reraise=True,
        ):
            with attempt:
                number = attempt.retry_state.attempt_number - 1
                current = rect.perturbed(number)
                if number > 0:
                    logger.warning(
                        "Retrying contour on perturbed rectangle",
                        attempt=number,
                        rect=current.model_dump(),
                    )
                count = winding_number(
                    f, current.s_bounds(m), panels=panels, zero_tolerance=zero_tolerance, jobs=jobs
                )
                return count, current
    except _Unresolved as e:
        logger.error("Contour unresolved", rect=rect.model_dump(), s=str(e.s), reason=str(e))
        raise ContourError(
            f"Contour could not be resolved: {e}",
            details={"rect": rect.model_dump(), "s": str(e.s), "attempts": retries},
        )
    raise ContourError(
        "Contour retry loop exited without a result", details={"rect": rect.model_dump()}
    )


def locate_zeros(
    f: Callable[[complex], complex],
    refine: Callable[[complex], complex],
    bounds: tuple[float, float, float, float],
    count: int,
    *,
    zero_tolerance: float = ZERO_TOLERANCE,
    jobs: int | None = None,
) -> list[complex]:
    """Zeros of ``f`` inside ``bounds`` by quadtree subdivision and secant refinement of ``refine``."""
    if count <= 0:
        return []
    re_lo, re_hi, im_lo, im_hi = bounds
    size = max(re_hi - re_lo, im_hi - im_lo)
    center = complex(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi))
    if count == 1 or size < ROOT_SIZE:
        root = optimize.newton(refine, center, x1=center + 1e-3 * size, tol=1e-13, maxiter=100)
        return [complex(root)]
    re_mid, im_mid = center.real, center.imag
    found: list[complex] = []
    for quad in (
        (re_lo, re_mid, im_lo, im_mid),
        (re_mid, re_hi, im_lo, im_mid),
        (re_lo, re_mid, im_mid, im_hi),
        (re_mid, re_hi, im_mid, im_hi),
    ):
        try:
            inner = winding_number(f, quad, panels=16, zero_tolerance=zero_tolerance, jobs=jobs)
        except _Unresolved as e:
            # A zero on the dividing line.
            root = optimize.newton(refine, e.s, x1=e.s + 1e-6, tol=1e-13, maxiter=100)
            found.append(complex(root))
            continue
        found.extend(locate_zeros(f, refine, quad, inner, zero_tolerance=zero_tolerance, jobs=jobs))
    unique: list[complex] = []
    for root in found:
        if all(abs(root - u) > 1e-8 * max(1.0, abs(u)) for u in unique):
            unique.append(root)
    return unique


def scan_unstable(
    sector: FourierSector,
    profile: VortexProfile,
    rect: Rectangle,
    *,
    panels: int | None = None,
    jobs: int | None = None,
) -> ScanResult:
    """Count and locate eigenvalues ``s = m (a - i b)`` with ``(a, b)`` inside ``rect``.

    Raises:
        ValidationError: If ``m = 0``, ``a_min <= 0`` or the ``b`` range leaves ``[0, 1]``
        ContourError: If the boundary cannot be resolved on any perturbed rectangle
    """
    if sector.m == 0:
        raise ValidationError(
            "scan_unstable requires m != 0; use axisym_identity for axisymmetric sectors",
            details={"k": sector.k},
        )
    if rect.a_min <= 0 or rect.b_min < 0 or rect.b_max > 1:
        raise ValidationError(
            "The scan rectangle must satisfy a_min > 0 and 0 <= b_min < b_max <= 1",
            details={"rect": rect.model_dump()},
        )

    def normalized(s: complex) -> complex:
        result = evaluate_miss(sector, profile, s)
        return result.value / result.scale if result.scale > 0 else complex("nan")

    count, used = robust_winding(normalized, rect, sector.m, panels=panels, jobs=jobs)

    roots: list[ContourRoot] = []
    if count > 0:
        bounds = used.s_bounds(sector.m)
        probe = complex(bounds[1], 0.5 * (bounds[2] + bounds[3]))
        r_fixed = evaluate_miss(sector, profile, probe).r_match

        def refine(s: complex) -> complex:
            return miss(sector, profile, s, r_fixed)

        for s in locate_zeros(normalized, refine, bounds, count, jobs=jobs):
            residual = evaluate_miss(sector, profile, s).relative
            roots.append(ContourRoot(s=[s.real, s.imag], residual=residual))

    logger.info(
        "Unstable scan finished",
        m=sector.m,
        k=sector.k,
        rect=used.model_dump(),
        winding=count,
        roots=len(roots),
    )
    return ScanResult(m=sector.m, k=sector.k, rect=used, winding=count, roots=roots)
