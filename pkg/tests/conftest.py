"""Pytest configuration and fixtures."""

import os
from collections.abc import Iterator

import numpy as np
import pytest

# Set test environment
os.environ["ENVIRONMENT"] = "test"
os.environ["VORTEX_SPECTRA_ENVIRONMENT"] = "test"

from src.biot_savart import FourierSector  # noqa: E402
from src.config import get_settings  # noqa: E402
from src.profiles import (  # noqa: E402
    KaufmannScullyProfile,
    LambOseenProfile,
    RadialGrid,
    RankineProfile,
    VortexProfile,
)


@pytest.fixture(autouse=True)
def fresh_settings() -> Iterator[None]:
    """Clear cached settings around every test so env changes take effect."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def lamb_oseen() -> VortexProfile:
    """Lamb-Oseen vortex."""
    return LambOseenProfile()


@pytest.fixture
def kaufmann_scully() -> VortexProfile:
    """Kaufmann-Scully vortex."""
    return KaufmannScullyProfile()


@pytest.fixture
def rankine() -> VortexProfile:
    """Rankine vortex."""
    return RankineProfile()


@pytest.fixture
def grid() -> RadialGrid:
    """Default 400-node radial grid."""
    return RadialGrid(400, 4.0)


@pytest.fixture
def small_grid() -> RadialGrid:
    """Coarse grid for operator assembly."""
    return RadialGrid(80, 4.0)


@pytest.fixture
def sector() -> FourierSector:
    """Sector (m, k) = (2, 1)."""
    return FourierSector(2, 1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator."""
    return np.random.default_rng(42)
