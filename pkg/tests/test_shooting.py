"""Tests for complex shooting, contour counts and integral identities."""

import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError

from src.biot_savart import FourierSector
from src.config import override_settings
from src.profiles import VortexProfile, make_builtin
from src.shooting import (
    CoefficientFunctions,
    Rectangle,
    TrialFunction,
    axisym_identity,
    eigenfunction,
    evaluate_miss,
    find_axisymmetric_modes,
    find_kelvin_modes,
    hg_criterion,
    howard_identity_residuals,
    integrate_from_infinity,
    integrate_from_origin,
    locate_zeros,
    miss,
    on_essential_spectrum,
    outer_radius,
    radial_nodes,
    robust_winding,
    scan_unstable,
    twodim_identity,
    verify_b_lower_bound,
    winding_number,
)
from src.utils.exceptions import ClassViolationError, ContourError, ValidationError


def gaussian_trial() -> TrialFunction:
    """Smooth decaying function that is not an eigenfunction."""
    return TrialFunction(
        u=lambda r: r * np.exp(-(r**2)),
        du=lambda r: (1.0 - 2.0 * r**2) * np.exp(-(r**2)),
    )


class TestCoefficients:
    """Tests for the coefficients of the radial equation."""

    def test_b_on_imaginary_axis(self, lamb_oseen: VortexProfile) -> None:
        """Test B at s = -i m b reduces to the real form."""
        coeffs = CoefficientFunctions(FourierSector(2, 1.0), lamb_oseen)
        r = np.linspace(0.1, 5.0, 40)
        b = -1.0

        expected = coeffs.B_real(r, b)
        np.testing.assert_allclose(coeffs.B(r, complex(0.0, 2.0)), expected, rtol=1e-12, atol=1e-12)

    def test_origin_exponent(self, lamb_oseen: VortexProfile) -> None:
        """Test u ~ r^(|m|-1), and u ~ r for m = 0."""
        assert CoefficientFunctions(FourierSector(-3, 1.0), lamb_oseen).origin_exponent() == 2
        assert CoefficientFunctions(FourierSector(0, 1.0), lamb_oseen).origin_exponent() == 1

    def test_axisymmetric_requires_nonzero_s(self, lamb_oseen: VortexProfile) -> None:
        """Test s = 0 is rejected for m = 0."""
        with pytest.raises(ValidationError):
            CoefficientFunctions(FourierSector(0, 1.0), lamb_oseen).B(1.0, 0.0)


class TestIntegration:
    """Tests for the two shooting branches."""

    def test_essential_spectrum(self) -> None:
        """Test membership of the segment {-i m b : b in [0, 1]}."""
        assert on_essential_spectrum(2, -1.0j)
        assert not on_essential_spectrum(2, 0.1 - 1.0j)
        assert not on_essential_spectrum(2, -3.0j)
        assert on_essential_spectrum(0, 0j)
        assert not on_essential_spectrum(0, 1.0j)

    def test_outer_radius(self) -> None:
        """Test R_max = max(30, 12 / |k|)."""
        assert outer_radius(1.0) == 30.0
        assert outer_radius(-0.1) == pytest.approx(120.0)

    def test_rejects_essential_spectrum(
        self, sector: FourierSector, lamb_oseen: VortexProfile
    ) -> None:
        """Test shooting at a point of the essential spectrum."""
        with pytest.raises(ValidationError):
            integrate_from_origin(sector, lamb_oseen, -1.0j, 1.0)

    def test_rejects_bad_matching_radius(
        self, sector: FourierSector, lamb_oseen: VortexProfile
    ) -> None:
        """Test the matching radius lies between the seed radii."""
        with pytest.raises(ValidationError):
            integrate_from_origin(sector, lamb_oseen, 0.5, 1e-4)
        with pytest.raises(ValidationError):
            integrate_from_infinity(sector, lamb_oseen, 0.5, 100.0)

    def test_trajectory_residual(self, sector: FourierSector, lamb_oseen: VortexProfile) -> None:
        """Test both branches satisfy the first-order system along the trajectory."""
        s = complex(0.4, -0.6)

        assert integrate_from_origin(sector, lamb_oseen, s, 1.2).residual() < 1e-4
        assert integrate_from_infinity(sector, lamb_oseen, s, 1.2).residual() < 1e-4

    def test_miss_independent_of_matching_radius(
        self, sector: FourierSector, lamb_oseen: VortexProfile
    ) -> None:
        """Test r times the Wronskian is constant."""
        s = complex(0.5, -0.4)
        near = evaluate_miss(sector, lamb_oseen, s, 0.8)
        far = evaluate_miss(sector, lamb_oseen, s, 1.6)
        bound = max(near.r_match * near.scale, far.r_match * far.scale)

        assert abs(near.invariant - far.invariant) <= 1e-6 * bound

    def test_miss_is_weighted_wronskian(
        self, sector: FourierSector, lamb_oseen: VortexProfile
    ) -> None:
        """Test the miss equals A(r) (u0 u_inf' - u0' u_inf) at the matching radius."""
        s, r = complex(0.5, -0.4), 1.2
        u0, p0 = integrate_from_origin(sector, lamb_oseen, s, r).end_state()
        ui, pi = integrate_from_infinity(sector, lamb_oseen, s, r).end_state()
        a = complex(CoefficientFunctions(sector, lamb_oseen).A(r))
        du0, dui = p0 / a - u0 / r, pi / a - ui / r
        expected = a * (u0 * dui - du0 * ui)

        assert miss(sector, lamb_oseen, s, r) == pytest.approx(expected, rel=1e-10)

    def test_miss_off_spectrum(self, sector: FourierSector, lamb_oseen: VortexProfile) -> None:
        """Test the miss is the evaluated value and is bounded away from zero off the spectrum."""
        s = complex(0.5, -0.4)
        evaluation = evaluate_miss(sector, lamb_oseen, s, 1.0)

        assert miss(sector, lamb_oseen, s, 1.0) == evaluation.value
        assert evaluation.relative > 1e-6

    def test_eigenfunction_continuous(
        self, sector: FourierSector, lamb_oseen: VortexProfile
    ) -> None:
        """Test the composite function is continuous at the matching radius."""
        ef = eigenfunction(sector, lamb_oseen, complex(0.5, -0.4))
        below, _ = ef.evaluate(ef.r_match - 1e-9)
        above, _ = ef.evaluate(ef.r_match + 1e-9)

        assert abs(below[0] - above[0]) <= 1e-6 * abs(below[0])


class TestContour:
    """Tests for argument-principle counts."""

    def test_rectangle_parse(self) -> None:
        """Test parsing and the image in the s-plane."""
        rect = Rectangle.parse("0.05,0.95,0.01,5")

        assert rect.s_bounds(2) == pytest.approx((0.02, 10.0, -1.9, -0.1))
        assert rect.perturbed(0) is rect

    def test_rectangle_rejects_bad_bounds(self) -> None:
        """Test malformed and unordered rectangles."""
        with pytest.raises(ValidationError):
            Rectangle.parse("0.1,0.2,0.3")
        with pytest.raises(PydanticValidationError):
            Rectangle(b_min=0.5, b_max=0.1, a_min=0.1, a_max=1.0)

    def test_winding_of_polynomial(self) -> None:
        """Test the count of zeros of a quadratic inside two rectangles."""

        def f(s: complex) -> complex:
            return (s - 0.5) * (s + 2.0)

        assert winding_number(f, (0.0, 1.0, -1.0, 1.0), panels=32, jobs=1) == 1
        assert winding_number(f, (-3.0, 1.0, -1.0, 1.0), panels=32, jobs=1) == 2
        assert winding_number(f, (1.0, 2.0, -1.0, 1.0), panels=32, jobs=1) == 0

    def test_unresolved_contour(self) -> None:
        """Test a vanishing function exhausts the retries."""
        rect = Rectangle(b_min=0.1, b_max=0.9, a_min=0.1, a_max=1.0)

        with pytest.raises(ContourError):
            robust_winding(lambda s: 0j, rect, 1, panels=8, jobs=1)

    def test_locate_zeros(self) -> None:
        """Test quadtree location of two zeros."""
        roots = [complex(0.7, 0.3), complex(0.2, -0.4)]

        def f(s: complex) -> complex:
            return (s - roots[0]) * (s - roots[1])

        found = locate_zeros(f, f, (0.0, 1.0, -1.0, 1.0), 2, jobs=1)

        assert len(found) == 2
        for root in roots:
            assert min(abs(z - root) for z in found) < 1e-10

    def test_scan_validation(self, lamb_oseen: VortexProfile) -> None:
        """Test the rectangle must lie in a > 0 and b in [0, 1]."""
        rect = Rectangle(b_min=0.1, b_max=0.9, a_min=0.0, a_max=1.0)
        with pytest.raises(ValidationError):
            scan_unstable(FourierSector(2, 1.0), lamb_oseen, rect)
        with pytest.raises(ValidationError):
            scan_unstable(FourierSector(0, 1.0), lamb_oseen, Rectangle.parse("0.1,0.9,0.1,1"))

    @pytest.mark.slow
    @pytest.mark.parametrize("kind", ["lamb-oseen", "kaufmann-scully"])
    def test_no_unstable_modes(self, kind: str) -> None:
        """Test the winding number vanishes for admissible vortices."""
        rect = Rectangle.parse("0.05,0.95,0.01,5")
        result = scan_unstable(FourierSector(2, 1.0), make_builtin(kind), rect)

        assert result.winding == 0
        assert result.roots == []


class TestKelvin:
    """Tests for neutral modes."""

    def test_rejects_axisymmetric_sector(self, lamb_oseen: VortexProfile) -> None:
        """Test m = 0 goes through the axisymmetric search."""
        with pytest.raises(ValidationError):
            find_kelvin_modes(FourierSector(0, 1.0), lamb_oseen, (1.0, 2.0))

    def test_rejects_essential_range(
        self, sector: FourierSector, lamb_oseen: VortexProfile
    ) -> None:
        """Test b ranges inside (0, 1) are rejected."""
        with pytest.raises(ValidationError):
            find_kelvin_modes(sector, lamb_oseen, (0.2, 0.8))

    def test_axisymmetric_range_excludes_zero(self, lamb_oseen: VortexProfile) -> None:
        """Test omega ranges containing 0 are rejected."""
        with pytest.raises(ValidationError):
            find_axisymmetric_modes(1.0, lamb_oseen, (-1.0, 1.0))

    @pytest.mark.slow
    def test_lamb_oseen_modes_accumulate_at_one(self, lamb_oseen: VortexProfile) -> None:
        """Test m = 2, k = 1 has at least three neutral modes in (1, 1.5) crowding toward 1."""
        sector = FourierSector(2, 1.0)
        with override_settings(ode_rtol=1e-12, ode_atol=1e-16):
            modes = find_kelvin_modes(sector, lamb_oseen, (1.0, 1.5), samples=200)
        b = np.array([mode.b for mode in modes])

        assert b.size >= 3
        assert np.all((b > 1.0) & (b < 1.5))
        assert all(mode.residual <= 1e-10 for mode in modes)
        assert all(mode.slope > 0 for mode in modes)
        # Outermost roots, where the geometric scan resolves every spacing
        gaps = np.diff(b[-min(b.size, 6) :])
        assert np.all(np.diff(gaps) > 0)

    @pytest.mark.slow
    def test_no_modes_below_zero(self, lamb_oseen: VortexProfile) -> None:
        """Test |m| >= 2 has no neutral mode with b <= 0."""
        assert find_kelvin_modes(FourierSector(2, 1.0), lamb_oseen, (-3.0, 0.0)) == []
        assert find_kelvin_modes(FourierSector(3, 1.0), lamb_oseen, (-3.0, 0.0)) == []

    @pytest.mark.slow
    def test_axisymmetric_modes_satisfy_identity(self, lamb_oseen: VortexProfile) -> None:
        """Test neutral axisymmetric modes annihilate the axisymmetric identity."""
        modes = find_axisymmetric_modes(1.0, lamb_oseen, (0.5, 2.0), samples=60)
        if not modes:
            pytest.skip("no axisymmetric mode in the scanned range")
        for mode in modes[:2]:
            assert mode.residual < 1e-6
            assert 0.0 < mode.b < 2.0
            ef = eigenfunction(FourierSector(0, 1.0), lamb_oseen, mode.s)
            r, w = radial_nodes(ef.r0, ef.r_match, ef.r_max)
            norm = float(np.sum(w * r * np.abs(ef.values(r)[0]) ** 2))
            assert abs(axisym_identity(lamb_oseen, 1.0, mode.s, ef)) <= 1e-4 * norm


class TestIdentities:
    """Tests for the integral identities and the stability criterion."""

    def test_radial_nodes(self) -> None:
        """Test the composite rule integrates exp(-r) over (0, inf)."""
        r, w = radial_nodes(1e-3, 1.0, 30.0)

        assert float(np.sum(w * np.exp(-r))) == pytest.approx(1.0, rel=1e-10)

    def test_trial_function_values(self) -> None:
        """Test d*u = u' + u/r."""
        _, d_star = gaussian_trial().values(np.array([2.0]))

        assert d_star[0] == pytest.approx(complex(-6.0 * np.exp(-4.0)), rel=1e-12)

    def test_negative_control(self, sector: FourierSector, lamb_oseen: VortexProfile) -> None:
        """Test a non-eigenfunction leaves large identity values."""
        s = complex(1.0, -1.0)
        residuals = howard_identity_residuals(sector, lamb_oseen, s, gaussian_trial())

        assert residuals.norm_sq > 0
        assert residuals.worst() > 1e-3

    def test_basic_identity_vanishes_on_axis(
        self, sector: FourierSector, lamb_oseen: VortexProfile
    ) -> None:
        """Test the written-out imaginary part is zero at a = 0."""
        s = complex(0.0, -3.0)
        residuals = howard_identity_residuals(sector, lamb_oseen, s, gaussian_trial())

        assert residuals.a == 0.0
        assert residuals.hg0_imaginary == 0.0

    def test_axisymmetric_imaginary_part(self, lamb_oseen: VortexProfile) -> None:
        """Test Im = k^2 Im(1/s^2) int Phi |u|^2 r dr."""
        trial = gaussian_trial()
        s, k = complex(0.3, 0.8), 1.5
        r, w = radial_nodes(trial.r0, trial.r_match, trial.r_max)
        u, _ = trial.values(r)
        weighted = float(np.sum(w * r * lamb_oseen.phi(r) * np.abs(u) ** 2))
        expected = k**2 * (1.0 / s**2).imag * weighted

        assert axisym_identity(lamb_oseen, k, s, trial).imag == pytest.approx(expected, rel=1e-10)

    def test_twodim_imaginary_part(self, lamb_oseen: VortexProfile) -> None:
        """Test Im = m Re(s) int W' |u|^2 r^2 / |gamma|^2 dr."""
        trial = gaussian_trial()
        s, m = complex(0.3, -0.8), 2
        r, w = radial_nodes(trial.r0, trial.r_match, trial.r_max)
        u, _ = trial.values(r)
        gamma = s + 1j * m * lamb_oseen.omega(r)
        integrand = r**2 * lamb_oseen.W_prime(r) * np.abs(u) ** 2 / np.abs(gamma) ** 2
        expected = m * s.real * float(np.sum(w * integrand))

        assert twodim_identity(lamb_oseen, m, s, trial).imag == pytest.approx(expected, rel=1e-10)

    def test_identity_argument_checks(self, lamb_oseen: VortexProfile) -> None:
        """Test s = 0 and m = 0 are rejected where undefined."""
        with pytest.raises(ValidationError):
            axisym_identity(lamb_oseen, 1.0, 0.0, gaussian_trial())
        with pytest.raises(ValidationError):
            twodim_identity(lamb_oseen, 0, 1.0, gaussian_trial())
        with pytest.raises(ValidationError):
            howard_identity_residuals(FourierSector(0, 1.0), lamb_oseen, 1.0, gaussian_trial())

    def test_hg_criterion_satisfied(self, kaufmann_scully: VortexProfile) -> None:
        """Test (k^2/m^2) J >= 1/4 with J = 1 + 1/r^2 at k/m = 1/2."""
        result = hg_criterion(FourierSector(2, 1.0), kaufmann_scully)

        assert result.satisfied
        assert result.infimum == pytest.approx(0.25, abs=1e-6)
        assert result.r_star == float("inf")

    def test_hg_criterion_crossing(self, kaufmann_scully: VortexProfile) -> None:
        """Test the crossing radius 1/sqrt(3) at k/m = 1/4."""
        result = hg_criterion(FourierSector(2, 0.5), kaufmann_scully)

        assert not result.satisfied
        assert result.r_star == pytest.approx(1.0 / np.sqrt(3.0), rel=1e-10)

    def test_hg_criterion_rejects(self, rankine: VortexProfile, lamb_oseen: VortexProfile) -> None:
        """Test the Rankine vortex and m = 0 are rejected."""
        with pytest.raises(ClassViolationError):
            hg_criterion(FourierSector(2, 1.0), rankine)
        with pytest.raises(ValidationError):
            hg_criterion(FourierSector(0, 1.0), lamb_oseen)

    @pytest.mark.parametrize("m", [2, 3, 5])
    def test_b_lower_bound(self, m: int, lamb_oseen: VortexProfile) -> None:
        """Test B(r) >= 1 - 4/m^2 for b <= 0 on the imaginary axis."""
        r = np.geomspace(1e-2, 50.0, 400)

        assert verify_b_lower_bound(lamb_oseen, m, 1.0, r, [0.0, -1.0, -5.0]) >= -1e-10

    def test_b_lower_bound_rejects(self, lamb_oseen: VortexProfile) -> None:
        """Test |m| < 2 and b > 0 are rejected."""
        r = np.linspace(0.1, 1.0, 5)
        with pytest.raises(ValidationError):
            verify_b_lower_bound(lamb_oseen, 1, 1.0, r, [0.0])
        with pytest.raises(ValidationError):
            verify_b_lower_bound(lamb_oseen, 2, 1.0, r, [0.5])
