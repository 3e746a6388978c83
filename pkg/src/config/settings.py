"""Application settings and numerical defaults."""

from collections.abc import Iterator
from contextlib import contextmanager
from functools import lru_cache
from typing import Any

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings with environment variable support.

    Every field can be overridden through an environment variable carrying the
    ``VORTEX_SPECTRA_`` prefix, e.g. ``VORTEX_SPECTRA_JOBS=4``.
    """

    model_config = SettingsConfigDict(
        env_prefix="VORTEX_SPECTRA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application Settings
    app_name: str = Field(default="vortex-spectra", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")
    environment: str = Field(default="development", description="Environment (development/test/production)")
    log_level: str = Field(default="INFO", description="Logging level")

    # Radial grid
    grid_nodes: int = Field(default=400, description="Interior nodes of the default radial grid")
    grid_scale: float = Field(default=4.0, description="Scale L of the algebraic map r = L x / (1 - x)")
    operator_nodes: int = Field(default=300, description="Interior nodes used for operator matrices")

    # Quadrature
    quad_epsabs: float = Field(default=1e-12, description="Absolute tolerance of adaptive quadrature")
    quad_epsrel: float = Field(default=1e-10, description="Relative tolerance of adaptive quadrature")
    quad_limit: int = Field(default=200, description="Subinterval limit of adaptive quadrature")

    # Shooting
    ode_rtol: float = Field(default=1e-10, description="Relative tolerance of the ODE integrator")
    ode_atol: float = Field(default=1e-14, description="Absolute tolerance of the ODE integrator")
    origin_radius: float = Field(default=1e-3, description="Seed radius r0 of the origin branch")
    outer_radius_floor: float = Field(default=30.0, description="Lower bound on R_max = max(30, 12/k)")
    critical_gap: float = Field(default=0.2, description="Minimal distance between r_match and the critical radius")

    # Argument principle
    contour_panels: int = Field(default=64, description="Initial boundary panels of a contour")
    contour_retries: int = Field(default=3, description="Perturbed retries of an unresolved contour")
    rect_a_max: float = Field(default=5.0, description="Default upper bound M on the growth parameter a")

    # Spectrum classification
    band_fraction: float = Field(default=0.05, description="Near-essential band half-width per unit |m|")
    resolution_threshold: float = Field(default=1e-6, description="Chebyshev tail ratio of resolved eigenvectors")

    # Critical layers
    frobenius_order: int = Field(default=12, description="Default truncation order N of Frobenius series")
    analyticity_radius: float = Field(default=0.5, description="Assumed analyticity radius rho at the critical radius")

    # Profiles
    mollify_cutoff: float = Field(default=8.0, description="Gaussian truncation in units of sqrt(epsilon)")
    lipschitz_delta: float = Field(default=0.1, description="Default delta of the Q(1) bounds")
    tail_tolerance: float = Field(default=1e-3, description="Tolerance of the r J'(r) -> 0 tail check")

    # Batch driver
    jobs: int = Field(default=1, description="Worker threads for (m, k) scans")
    seed: int = Field(default=42, description="Seed of randomized property checks")

    @field_validator("grid_nodes", "operator_nodes", "contour_panels", "frobenius_order")
    @classmethod
    def validate_counts(cls, v: int) -> int:
        """Validate node and panel counts."""
        if v < 4:
            raise ValueError("Node, panel and order counts must be at least 4")
        return v

    @field_validator(
        "grid_scale",
        "quad_epsabs",
        "quad_epsrel",
        "ode_rtol",
        "ode_atol",
        "origin_radius",
        "outer_radius_floor",
        "critical_gap",
        "rect_a_max",
        "band_fraction",
        "analyticity_radius",
        "mollify_cutoff",
        "lipschitz_delta",
        "tail_tolerance",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """Validate tolerances and scales are positive."""
        if v <= 0.0:
            raise ValueError("Tolerances and scales must be positive")
        return v

    @field_validator("jobs")
    @classmethod
    def validate_jobs(cls, v: int) -> int:
        """Validate the worker count."""
        if v < 1:
            raise ValueError("jobs must be at least 1")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v = v.upper()
        if v not in valid_levels:
            raise ValueError(f"Log level must be one of {valid_levels}")
        return v

    @property
    def is_production(self) -> bool:
        """Check if running in production environment."""
        return self.environment.lower() == "production"

    def tolerances(self) -> dict[str, float]:
        """Tolerance values embedded in output headers."""
        return {
            "quad_epsabs": self.quad_epsabs,
            "quad_epsrel": self.quad_epsrel,
            "ode_rtol": self.ode_rtol,
            "ode_atol": self.ode_atol,
        }


# Keyword overrides of the active override_settings block
_overrides: dict[str, Any] = {}


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings(**_overrides)


@contextmanager
def override_settings(**overrides: Any) -> Iterator[Settings]:
    """Make ``get_settings`` return ``Settings(**overrides)`` inside the block.

    Keyword values take precedence over the environment. The process environment is left
    untouched and the previous settings are restored on exit.

    Raises:
        pydantic.ValidationError: If an override is invalid
    """
    previous = dict(_overrides)
    _overrides.update(overrides)
    get_settings.cache_clear()
    try:
        yield get_settings()
    finally:
        _overrides.clear()
        _overrides.update(previous)
        get_settings.cache_clear()
