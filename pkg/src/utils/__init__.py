"""Utility modules for Vortex Spectra."""

from .exceptions import (
    BiotSavartError,
    ClassViolationError,
    ConfigurationError,
    ContourError,
    CriticalLayerError,
    EigensolverError,
    IntegrationError,
    InvariantViolationError,
    ProfileError,
    QuadratureError,
    SpecialFunctionError,
    ValidationError,
    VortexSpectraError,
)
from .logger import get_logger, setup_logging
from .quadrature import integrate

__all__ = [
    "get_logger",
    "setup_logging",
    "integrate",
    "VortexSpectraError",
    "BiotSavartError",
    "ClassViolationError",
    "ConfigurationError",
    "ContourError",
    "CriticalLayerError",
    "EigensolverError",
    "IntegrationError",
    "InvariantViolationError",
    "ProfileError",
    "QuadratureError",
    "SpecialFunctionError",
    "ValidationError",
]
