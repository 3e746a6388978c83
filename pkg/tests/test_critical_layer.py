"""Tests for the local analysis at the critical radius."""

import numpy as np
import pytest

from src.biot_savart import FourierSector
from src.critical_layer import (
    RootCase,
    connection_coefficients,
    critical_radius,
    equation_residual,
    frobenius_series,
    indicial_roots,
    limit_sequence,
    singular_solutions,
    upper_solution_check,
)
from src.profiles import VortexProfile
from src.utils.exceptions import CriticalLayerError, ValidationError


class TestIndicialRoots:
    """Tests for d (d - 1) + (k^2/m^2) J = 0."""

    def test_double_root(self) -> None:
        """Test (k^2/m^2) J = 1/4 gives the double root 1/2."""
        d_plus, d_minus, case = indicial_roots(1.0, 2, 1.0)

        assert case == RootCase.DOUBLE_ROOT
        assert d_plus == d_minus == 0.5

    def test_zero_j(self) -> None:
        """Test J = 0 gives the roots 0 and 1."""
        d_plus, d_minus, case = indicial_roots(0.0, 3, 2.0)

        assert case == RootCase.REAL_DISTINCT
        assert (d_plus, d_minus) == (1.0, 0.0)

    def test_complex_roots(self) -> None:
        """Test J = 2 at m = 2, k = 1 gives 1/2 +- i/2."""
        d_plus, d_minus, case = indicial_roots(2.0, 2, 1.0)

        assert case == RootCase.COMPLEX_CONJUGATE
        assert d_plus == pytest.approx(complex(0.5, 0.5))
        assert d_minus == pytest.approx(complex(0.5, -0.5))

    @pytest.mark.parametrize("j", [0.3, 1.0, 5.0])
    def test_vieta(self, j: float) -> None:
        """Test the roots sum to 1 and multiply to (k^2/m^2) J."""
        d_plus, d_minus, _ = indicial_roots(j, 3, 1.5)

        assert d_plus + d_minus == pytest.approx(1.0, abs=1e-12)
        assert d_plus * d_minus == pytest.approx(0.25 * j, abs=1e-12)

    def test_rejects(self) -> None:
        """Test m = 0 and J < 0 are rejected."""
        with pytest.raises(ValidationError):
            indicial_roots(1.0, 0, 1.0)
        with pytest.raises(ValidationError):
            indicial_roots(-1.0, 2, 1.0)


class TestFrobeniusSeries:
    """Tests for the series solutions."""

    def test_critical_radius(self, kaufmann_scully: VortexProfile) -> None:
        """Test Omega(1) = 1/2 for Kaufmann-Scully."""
        assert critical_radius(kaufmann_scully, 0.5) == pytest.approx(1.0, abs=1e-12)

    def test_normalization(self, kaufmann_scully: VortexProfile) -> None:
        """Test c_0 = 1 and the default order."""
        expansion = frobenius_series(FourierSector(2, 1.0), kaufmann_scully, 0.5)

        assert expansion.case == RootCase.COMPLEX_CONJUGATE
        assert expansion.coeffs_plus[0] == 1.0
        assert expansion.coeffs_minus[0] == 1.0
        assert expansion.order == 12

    def test_back_substitution(self, kaufmann_scully: VortexProfile) -> None:
        """Test both series satisfy the equation on either side of r_bar."""
        sector = FourierSector(2, 1.0)
        expansion = frobenius_series(sector, kaufmann_scully, 0.5)
        reach = min(0.05, 0.5 * expansion.radius_estimate)
        side = np.linspace(0.2 * reach, reach, 5)
        z = np.concatenate([-side, side])
        residual = equation_residual(sector, kaufmann_scully, expansion, expansion.r_bar + z)

        assert np.max(residual) < 1e-8

    def test_real_roots_real_coefficients(self, kaufmann_scully: VortexProfile) -> None:
        """Test real indicial roots give real coefficients."""
        expansion = frobenius_series(FourierSector(2, 0.5), kaufmann_scully, 0.5)

        assert expansion.case == RootCase.REAL_DISTINCT
        assert 0.0 < expansion.d_minus.real < 0.5 < expansion.d_plus.real < 1.0
        assert np.max(np.abs(expansion.coeffs_plus.imag)) <= 1e-12
        assert np.max(np.abs(expansion.coeffs_minus.imag)) <= 1e-12

    def test_branch_phases(self, kaufmann_scully: VortexProfile) -> None:
        """Test real solutions above r_bar and a constant phase below."""
        expansion = frobenius_series(FourierSector(2, 0.5), kaufmann_scully, 0.5)
        step = 0.5 * expansion.radius_estimate
        offsets = np.array([0.5 * step, step])
        above = singular_solutions(expansion, expansion.r_bar + offsets)
        below = singular_solutions(expansion, expansion.r_bar - offsets)

        for phi in above:
            assert np.all(np.abs(np.imag(phi)) <= 1e-12 * np.abs(phi))
        for phi, d in zip(below, (expansion.d_plus, expansion.d_minus), strict=True):
            rotated = phi * np.exp(-1j * np.pi * d.real)
            assert np.all(np.abs(np.imag(rotated)) <= 1e-10 * np.abs(phi))

    def test_singular_solutions_domain(self, kaufmann_scully: VortexProfile) -> None:
        """Test evaluation at r_bar or outside the disc is rejected."""
        expansion = frobenius_series(FourierSector(2, 1.0), kaufmann_scully, 0.5)

        with pytest.raises(ValidationError):
            singular_solutions(expansion, expansion.r_bar)
        with pytest.raises(ValidationError):
            singular_solutions(expansion, expansion.r_bar + 2.0 * expansion.radius_estimate)

    def test_non_analytic_profile(self, rankine: VortexProfile) -> None:
        """Test the Rankine vortex has no Frobenius expansion."""
        with pytest.raises(CriticalLayerError):
            frobenius_series(FourierSector(2, 1.0), rankine, 0.5)

    def test_payload(self, kaufmann_scully: VortexProfile) -> None:
        """Test the JSON description."""
        payload = frobenius_series(FourierSector(2, 1.0), kaufmann_scully, 0.5, order=6).payload()

        assert payload["case"] == "complex_conjugate"
        assert len(payload["coeffs_plus"]) == 7
        assert payload["d_plus"] == pytest.approx([0.5, 0.5])


class TestConnection:
    """Tests for the connection of the endpoint solutions."""

    def test_real_coefficients(self, kaufmann_scully: VortexProfile) -> None:
        """Test the coefficients at infinity are real and reproduce a third radius."""
        result = connection_coefficients(FourierSector(2, 0.5), kaufmann_scully, 0.5)

        assert abs(result.alpha_inf_minus.imag) <= 1e-6 * max(1.0, abs(result.alpha_inf_minus))
        assert abs(result.alpha_inf_plus.imag) <= 1e-6 * max(1.0, abs(result.alpha_inf_plus))
        assert result.consistency <= 1e-6
        assert result.payload()["delta"] == pytest.approx(result.delta)

    def test_rejects_complex_roots(self, kaufmann_scully: VortexProfile) -> None:
        """Test complex roots have no real connection coefficients."""
        with pytest.raises(ValidationError):
            connection_coefficients(FourierSector(2, 1.0), kaufmann_scully, 0.5)

    def test_upper_solutions(self, lamb_oseen: VortexProfile) -> None:
        """Test L(U) > 0 above a critical radius beyond r_*."""
        report = upper_solution_check(FourierSector(2, 1.0), lamb_oseen, 0.1)

        assert report.positive

    @pytest.mark.slow
    def test_limit_sequence(self, lamb_oseen: VortexProfile) -> None:
        """Test solutions at a = 1e-3 ... 1e-6 settle away from the layer."""
        sequence = limit_sequence(FourierSector(2, 1.0), lamb_oseen, 0.5)

        assert sequence.converging
        assert sequence.differences[-1] < sequence.differences[0]

    def test_limit_sequence_rejects(self, lamb_oseen: VortexProfile) -> None:
        """Test a must be positive."""
        with pytest.raises(ValidationError):
            limit_sequence(FourierSector(2, 1.0), lamb_oseen, 0.5, a_values=(1e-3, 0.0))
