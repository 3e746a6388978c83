"""Tests for modified Bessel functions and the limit integrals."""

import numpy as np
import pytest
from scipy import special

from src.specfun import (
    angle_integral,
    angle_integral_exact,
    ascending_series_i,
    bessel_ik,
    bessel_ik_scaled,
    bessel_limit_integral,
    bessel_limit_value,
    crossover_discrepancy,
    i_log_derivative,
    k_integral,
    k_log_derivative,
    reflection_residual,
    small_z_constants,
)
from src.utils.exceptions import SpecialFunctionError, ValidationError


class TestBessel:
    """Tests for I and K at complex arguments."""

    @pytest.mark.parametrize("nu", [0.0, 0.3, 1.0, 2.5])
    def test_wronskian(self, nu: float) -> None:
        """Test I K' - I' K = -1/z."""
        assert bessel_ik(nu, 2.0 + 1.0j).wronskian_residual() < 1e-12

    def test_scaled_values(self) -> None:
        """Test the exponential scaling factors."""
        z = 3.0 - 2.0j
        plain = bessel_ik(1.5, z)
        scaled = bessel_ik_scaled(1.5, z)

        assert scaled.scaled
        assert scaled.i_value * np.exp(abs(z.real)) == pytest.approx(plain.i_value, rel=1e-13)
        assert scaled.k_value * np.exp(-z) == pytest.approx(plain.k_value, rel=1e-13)
        growth = np.exp(abs(z.real))
        assert scaled.i_derivative * growth == pytest.approx(plain.i_derivative, rel=1e-12)

    def test_negative_order(self) -> None:
        """Test K_{-nu} = K_nu."""
        z = 1.0 + 0.5j

        assert bessel_ik(-0.4, z).k_value == pytest.approx(bessel_ik(0.4, z).k_value, rel=1e-13)

    def test_branch_cut_rejected(self) -> None:
        """Test arguments on (-inf, 0] are rejected."""
        with pytest.raises(SpecialFunctionError):
            bessel_ik(1.0, -1.0)
        with pytest.raises(SpecialFunctionError):
            bessel_ik(1.0, 0.0)

    def test_overflow_points_to_scaled(self) -> None:
        """Test overflow of unscaled values raises while log-derivatives stay finite."""
        with pytest.raises(SpecialFunctionError):
            bessel_ik(1.0, 800.0)

        assert i_log_derivative(1.0, 800.0) == pytest.approx(1.0, abs=1e-3)

    def test_log_derivatives(self) -> None:
        """Test logarithmic derivatives against ivp/iv and kvp/kv."""
        z = 1.7 + 0.9j

        expected_i = special.ivp(2.0, z) / special.iv(2.0, z)
        assert i_log_derivative(2.0, z) == pytest.approx(expected_i, rel=1e-12)
        expected_k = special.kvp(2.0, z) / special.kv(2.0, z)
        assert k_log_derivative(2.0, z) == pytest.approx(expected_k, rel=1e-12)

    def test_ascending_series(self) -> None:
        """Test the power series oracle."""
        z = 3.0 + 2.0j

        assert ascending_series_i(1.5, z) == pytest.approx(bessel_ik(1.5, z).i_value, rel=1e-12)
        assert ascending_series_i(0.0, 0.0) == 1.0

    def test_integral_representation(self) -> None:
        """Test the K integral oracle."""
        z = 1.5 + 0.5j

        assert k_integral(0.7, z) == pytest.approx(bessel_ik(0.7, z).k_value, rel=1e-10)
        with pytest.raises(ValidationError):
            k_integral(0.7, -1.0 + 1.0j)

    def test_crossover(self) -> None:
        """Test series and library agree across the switching radii."""
        assert crossover_discrepancy(1.0) < 1e-10

    def test_reflection(self) -> None:
        """Test the connection formula for non-integer orders."""
        assert reflection_residual(0.3, 2.0 + 1.0j) < 1e-10
        with pytest.raises(ValidationError):
            reflection_residual(2.0, 1.0 + 1.0j)


class TestLimits:
    """Tests for the small-argument constants and limit integrals."""

    def test_small_z_constants(self) -> None:
        """Test K_nu(z) ~ c z^-nu (1 - d z^(2 nu))."""
        nu, z = 0.25, 1e-3
        c, d = small_z_constants(nu)
        approx = c * z**-nu * (1.0 - d * z ** (2.0 * nu))

        assert approx == pytest.approx(float(special.kv(nu, z)), rel=1e-5)

    @pytest.mark.parametrize("nu", [0.1, 0.25, 0.4])
    def test_bessel_limit(self, nu: float) -> None:
        """Test the integral at a = 1e-3 is within 1% of its limit."""
        value = bessel_limit_integral(nu, 1e-3)
        limit = bessel_limit_value(nu)

        assert abs(value - limit) <= 0.01 * abs(limit)

    def test_limit_at_half(self) -> None:
        """Test the removable singularity at nu = 1/2."""
        assert bessel_limit_value(0.5) == pytest.approx(np.pi**2 / 2.0)
        assert bessel_limit_value(0.5 - 1e-9) == pytest.approx(np.pi**2 / 2.0, rel=1e-6)

    def test_limit_rejects_order(self) -> None:
        """Test the order must lie in (0, 1/2)."""
        with pytest.raises(ValidationError):
            bessel_limit_integral(0.6, 1e-3)
        with pytest.raises(ValidationError):
            bessel_limit_integral(0.25, 0.0)

    @pytest.mark.parametrize("nu", [0.1, 0.25, 0.4, 0.5])
    def test_angle_integral(self, nu: float) -> None:
        """Test the angular integral against its closed form."""
        assert angle_integral(nu) == pytest.approx(angle_integral_exact(nu), abs=1e-12)
