"""Linearized operator, spectra and resolvent norms per Fourier sector."""

from .matrix import OperatorMatrix, build
from .parameter import SpectralParameter
from .spectrum import (
    SPECTRUM_COLUMNS,
    EigenClass,
    Eigenvalue,
    ResolventCell,
    SpectrumReport,
    classify,
    essential_band,
    resolvent_norm,
    resolvent_scan,
    spectrum,
)

__all__ = [
    "OperatorMatrix",
    "build",
    "SpectralParameter",
    "SPECTRUM_COLUMNS",
    "EigenClass",
    "Eigenvalue",
    "ResolventCell",
    "SpectrumReport",
    "classify",
    "essential_band",
    "resolvent_norm",
    "resolvent_scan",
    "spectrum",
]
