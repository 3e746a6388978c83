"""Pydantic models for batch configurations."""

import json
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from src.shooting import Rectangle
from src.utils.exceptions import ConfigurationError

OVERRIDABLE_TOLERANCES = ("quad_epsabs", "quad_epsrel", "ode_rtol", "ode_atol", "resolution_threshold")


class ScanConfig(BaseModel):
    """Resolved configuration of one command.

    Precedence is flags over the JSON config file over these defaults.
    """

    kind: str = Field(default="lamb-oseen", description="Built-in profile kind")
    params: dict[str, float] = Field(default_factory=dict, description="Profile parameters")
    profile_file: str | None = Field(default=None, description="Stored profile samples (JSON)")
    ms: list[int] = Field(default_factory=lambda: [2], description="Azimuthal wavenumbers")
    ks: list[float] = Field(default_factory=lambda: [1.0], description="Axial wavenumbers")
    rect: Rectangle | None = Field(default=None, description="Spectral rectangle in (b, a)")
    b: float = Field(default=0.5, description="Frequency parameter of critical-layer runs")
    b_range: tuple[float, float] | None = Field(default=None, description="Frequency window of root scans")
    s: tuple[float, float] = Field(default=(1.0, 0.0), description="Resolvent point (re, im)")
    nodes: int | None = Field(default=None, description="Interior nodes of the radial grid")
    grid_scale: float | None = Field(default=None, description="Map scale of the radial grid")
    samples: int | None = Field(default=None, description="Scan samples or random fields per cell")
    panels: int | None = Field(default=None, description="Initial contour panels")
    order: int | None = Field(default=None, description="Frobenius truncation order")
    check: Literal["bessel-limit", "angle-integral", "lamb-oseen-j", "b-bound"] = "bessel-limit"
    section: Literal["6.6", "6.7"] | None = Field(default=None, description="Check group; wins over check")
    nu: list[float] = Field(default_factory=lambda: [0.1, 0.25, 0.4], description="Bessel orders")
    validate_profile: bool = Field(default=False, description="Run the admissibility checks")
    tolerances: dict[str, float] = Field(default_factory=dict, description="Tolerance overrides")
    output: str | None = Field(default=None, description="Output path (stdout when absent)")
    format: Literal["csv", "json"] = "csv"
    jobs: int | None = Field(default=None, description="Worker threads")
    seed: int = Field(default=42, description="Seed of randomized checks")

    @field_validator("ms", "ks", "nu")
    @classmethod
    def validate_nonempty(cls, v: list[Any]) -> list[Any]:
        """Validate sector ranges are nonempty."""
        if not v:
            raise ValueError("Ranges must be nonempty")
        return v

    @field_validator("tolerances")
    @classmethod
    def validate_tolerances(cls, v: dict[str, float]) -> dict[str, float]:
        """Validate tolerance overrides are known and positive."""
        for name, value in v.items():
            if name not in OVERRIDABLE_TOLERANCES:
                raise ValueError(
                    f"Unknown tolerance {name}; expected one of {list(OVERRIDABLE_TOLERANCES)}"
                )
            if value <= 0:
                raise ValueError(f"Tolerance {name} must be positive")
        return v

    @field_validator("nodes", "panels", "order", "samples")
    @classmethod
    def validate_counts(cls, v: int | None) -> int | None:
        """Validate counts."""
        if v is not None and v < 4:
            raise ValueError("Node, panel, order and sample counts must be at least 4")
        return v

    @field_validator("jobs")
    @classmethod
    def validate_jobs(cls, v: int | None) -> int | None:
        """Validate the worker count."""
        if v is not None and v < 1:
            raise ValueError("jobs must be at least 1")
        return v

    @model_validator(mode="after")
    def validate_ranges(self) -> "ScanConfig":
        if self.b_range is not None and self.b_range[0] >= self.b_range[1]:
            raise ValueError("b_range must be increasing")
        if self.grid_scale is not None and self.grid_scale <= 0:
            raise ValueError("grid_scale must be positive")
        return self

    def provenance(self) -> dict[str, Any]:
        """Configuration entering the output hash; output routing and worker count excluded."""
        return self.model_dump(mode="json", exclude={"output", "format", "jobs"})


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read a JSON config file.

    Raises:
        ConfigurationError: If the file is missing, not JSON or not an object
    """
    target = Path(path)
    try:
        data = json.loads(target.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigurationError("Config file not found", details={"path": str(target)})
    except json.JSONDecodeError as e:
        raise ConfigurationError(
            "Config file is not valid JSON", details={"path": str(target), "error": str(e)}
        )
    if not isinstance(data, dict):
        raise ConfigurationError(
            "Config file must hold a JSON object", details={"path": str(target)}
        )
    return data
