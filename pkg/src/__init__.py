"""Vortex Spectra - spectral stability toolkit for inviscid columnar vortices."""

__version__ = "1.0.0"
__author__ = "Vortex Spectra Team"
