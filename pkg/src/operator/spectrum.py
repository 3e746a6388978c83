"""Eigenvalues, classification and resolvent norms of the discretized operator."""

from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev
from pydantic import BaseModel, Field
from scipy import linalg

from src.biot_savart import FourierSector
from src.config import get_settings
from src.operator.matrix import OperatorMatrix, build
from src.profiles import RadialGrid, VortexProfile
from src.utils.exceptions import EigensolverError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

DEGENERACY_GAP = 1e-6


class EigenClass(str, Enum):
    NEAR_ESSENTIAL = "near-essential"
    ISOLATED = "isolated"


class Eigenvalue(BaseModel):
    """One discrete eigenvalue with its quality indicators."""

    re: float = Field(..., description="Real part")
    im: float = Field(..., description="Imaginary part")
    residual: float = Field(..., description="||(L - lambda) v|| / ||v|| in the weighted norm")
    resolution: float = Field(..., description="Chebyshev tail ratio of the eigenvector")
    kind: EigenClass = Field(..., description="Position relative to the essential segment")
    near_degenerate: bool = Field(default=False, description="Another eigenvalue lies within 1e-6")

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def resolved(self, threshold: float | None = None) -> bool:
        threshold = get_settings().resolution_threshold if threshold is None else threshold
        return self.resolution <= threshold


class SpectrumReport(BaseModel):
    """Spectrum of one Fourier sector."""

    m: int
    k: float
    nodes: int
    band: float = Field(..., description="Half-width of the near-essential band")
    eigenvalues: list[Eigenvalue] = Field(default_factory=list)

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.eigenvalues])

    def isolated(self, resolved_only: bool = True) -> list[Eigenvalue]:
        return [
            e
            for e in self.eigenvalues
            if e.kind == EigenClass.ISOLATED and (e.resolved() or not resolved_only)
        ]

    def rows(self) -> list[list[object]]:
        return [[self.m, self.k, e.re, e.im, e.residual, e.kind.value] for e in self.eigenvalues]


SPECTRUM_COLUMNS = ["m", "k", "re", "im", "residual", "class"]


def essential_band(m: int) -> float:
    return get_settings().band_fraction * max(abs(m), 1)


def classify(value: complex, m: int, band: float) -> EigenClass:
    """Near-essential when within ``band`` of the segment ``{-i m b : b in [0, 1]}``."""
    lo, hi = sorted((0.0, -float(m)))
    if abs(value.real) <= band and lo - band <= value.imag <= hi + band:
        return EigenClass.NEAR_ESSENTIAL
    return EigenClass.ISOLATED


@lru_cache(maxsize=16)
def _chebyshev_analysis(grid: RadialGrid) -> np.ndarray:
    """Matrix mapping interior samples to Chebyshev coefficients of their interpolant."""
    t = 2.0 * grid.x - 1.0
    return np.linalg.inv(chebyshev.chebvander(t, grid.r.size - 1))


def _tail_ratio(grid: RadialGrid, vectors: np.ndarray) -> np.ndarray:
    n = grid.r.size
    analysis = _chebyshev_analysis(grid)
    tail = max(4, n // 10)
    ratios = np.zeros(vectors.shape[1])
    for block in (vectors[:n], vectors[n:]):
        coeffs = np.abs(analysis @ block)
        head = np.max(coeffs, axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(head > 0, np.max(coeffs[-tail:], axis=0) / head, 0.0)
        ratios = np.maximum(ratios, ratio)
    return ratios


def spectrum(op: OperatorMatrix) -> SpectrumReport:
    """Eigenvalues of the discretized operator with residuals and classification.

    Raises:
        EigensolverError: If the dense eigensolver does not converge
    """
    try:
        values, vectors = linalg.eig(op.matrix)
    except (linalg.LinAlgError, ValueError) as e:
        logger.error("Eigensolver failed", m=op.sector.m, k=op.sector.k, nodes=op.grid.r.size)
        raise EigensolverError(
            "Eigensolver did not converge",
            details={"m": op.sector.m, "k": op.sector.k, "nodes": op.grid.r.size, "error": str(e)},
        )
    if not np.all(np.isfinite(values)):
        raise EigensolverError(
            "Eigensolver returned non-finite values", details={"m": op.sector.m, "k": op.sector.k}
        )

    R = op.norm_factor
    weighted = R @ vectors
    residual_vecs = R @ (op.matrix @ vectors - vectors * values[None, :])
    residuals = np.linalg.norm(residual_vecs, axis=0) / np.linalg.norm(weighted, axis=0)
    resolution = _tail_ratio(op.grid, vectors)

    band = essential_band(op.sector.m)
    threshold = get_settings().resolution_threshold
    records: list[Eigenvalue] = []
    order = np.lexsort((values.real, values.imag))
    for idx in order:
        value = complex(values[idx])
        kind = classify(value, op.sector.m, band)
        near = False
        if kind == EigenClass.ISOLATED and resolution[idx] <= threshold:
            gaps = np.abs(values - value)
            gaps[idx] = np.inf
            near = bool(np.min(gaps) < DEGENERACY_GAP)
        records.append(
            Eigenvalue(
                re=value.real,
                im=value.imag,
                residual=float(residuals[idx]),
                resolution=float(resolution[idx]),
                kind=kind,
                near_degenerate=near,
            )
        )

    report = SpectrumReport(
        m=op.sector.m, k=op.sector.k, nodes=op.grid.r.size, band=band, eigenvalues=records
    )
    logger.info(
        "Spectrum computed",
        m=op.sector.m,
        k=op.sector.k,
        eigenvalues=len(records),
        isolated=len(report.isolated()),
    )
    return report


def resolvent_norm(op: OperatorMatrix, s: complex) -> float:
    """``||(s - L)^{-1}||`` in the discrete ``L^2(r dr)`` norm of the full vorticity.

    Returns ``inf`` when ``s - L`` is numerically singular.

    Raises:
        ValidationError: If ``Re(s) == 0``
    """
    s = complex(s)
    if s.real == 0.0:
        raise ValidationError(
            "Resolvent norms are evaluated off the imaginary axis", details={"s": str(s)}
        )
    R = op.norm_factor
    shifted = s * np.eye(op.size) - op.matrix
    conjugated = linalg.solve_triangular(R, (R @ shifted).T, trans="T").T
    sigma = linalg.svdvals(conjugated)
    smallest = float(sigma[-1])
    if smallest <= np.finfo(float).eps * float(sigma[0]):
        logger.warning(
            "Resolvent evaluated on the numerical spectrum",
            m=op.sector.m,
            k=op.sector.k,
            s=str(s),
        )
        return float("inf")
    return 1.0 / smallest


class ResolventCell(BaseModel):
    m: int
    k: float
    norm: float


def resolvent_scan(
    profile: VortexProfile,
    ms: list[int],
    ks: list[float],
    s: complex = 1.0,
    grid: RadialGrid | None = None,
    jobs: int | None = None,
) -> list[ResolventCell]:
    """Resolvent norms over a grid of sectors, in ``(m, k)`` order regardless of ``jobs``."""
    settings = get_settings()
    grid = grid or RadialGrid(settings.operator_nodes, settings.grid_scale)
    jobs = settings.jobs if jobs is None else jobs
    cells = [(m, k) for m in ms for k in ks]

    def evaluate(cell: tuple[int, float]) -> ResolventCell:
        m, k = cell
        op = build(FourierSector(m, k), profile, grid)
        return ResolventCell(m=m, k=k, norm=resolvent_norm(op, s))

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(evaluate, cells))
    sup = max((c.norm for c in results), default=0.0)
    logger.info("Resolvent scan finished", cells=len(results), sup=sup)
    return results
