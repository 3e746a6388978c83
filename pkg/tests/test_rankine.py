"""Tests for the Rankine dispersion relation, its modes and the stability identity."""

import numpy as np
import pytest

from src.rankine import (
    RANKINE_COLUMNS,
    count_unstable,
    dispersion,
    dispersion_point,
    find_rankine_roots,
    jump_conditions,
    rankine_balance,
    rankine_identity,
    rankine_mode,
)
from src.shooting import Rectangle, TrialFunction, radial_nodes
from src.utils.exceptions import ValidationError


@pytest.fixture(scope="module")
def roots_m2() -> list:
    """Imaginary roots for (m, k) = (2, 1)."""
    return find_rankine_roots(2, 1.0)


def gaussian_trial() -> TrialFunction:
    """Smooth radial function, not a Rankine mode."""
    return TrialFunction(
        u=lambda r: r * np.exp(-(r**2)),
        du=lambda r: (1.0 - 2.0 * r**2) * np.exp(-(r**2)),
    )


class TestDispersion:
    """Tests for the dispersion function."""

    @pytest.mark.parametrize(
        "m,k,s", [(0, 1.0, 0.5), (2, 0.0, 0.5), (2, 1.0, 0.0), (2, 1.0, -2.0j)]
    )
    def test_excluded_parameters(self, m: int, k: float, s: complex) -> None:
        """Test m = 0, k = 0, s = 0 and s = -i m are rejected."""
        with pytest.raises(ValidationError):
            dispersion(m, k, s)

    def test_vanishing_beta(self) -> None:
        """Test gamma^2 = -4 is rejected."""
        with pytest.raises(ValidationError):
            dispersion_point(2, 1.0, -4.0j)

    def test_real_on_imaginary_axis(self) -> None:
        """Test D(-i m b) is real for b = 1.3."""
        value = dispersion(2, 1.0, complex(0.0, -2.0 * 1.3))

        assert abs(value.imag) <= 1e-10 * max(1.0, abs(value))

    def test_conjugate_symmetry(self) -> None:
        """Test D(-conj(s)) = conj(D(s))."""
        s = 0.3 - 0.7j

        assert dispersion(2, 1.0, -np.conj(s)) == pytest.approx(np.conj(dispersion(2, 1.0, s)))

    def test_point_fields(self) -> None:
        """Test gamma and beta^2 are reported."""
        point = dispersion_point(2, 1.0, 0.5 - 1.0j)
        gamma = complex(0.5, 1.0)

        assert complex(point.gamma_re, point.gamma_im) == pytest.approx(gamma)
        beta_sq = complex(point.beta_sq_re, point.beta_sq_im)
        assert beta_sq == pytest.approx(1.0 + 4.0 / gamma**2)
        assert point.scale > 0


class TestRankineRoots:
    """Tests for the purely imaginary roots."""

    def test_both_families(self, roots_m2: list) -> None:
        """Test several roots on each side of b = 1 with gaps shrinking toward 1."""
        below = [root.b for root in roots_m2 if root.b < 1.0]
        above = [root.b for root in roots_m2 if root.b > 1.0]

        assert len(below) >= 3
        assert len(above) >= 3
        gaps_below = np.diff(below)
        gaps_above = np.diff(above)
        assert gaps_below[-1] < gaps_below[0]
        assert gaps_above[0] < gaps_above[-1]

    def test_confined(self, roots_m2: list) -> None:
        """Test |b - 1| <= 2/|m| and no roots with b <= 0."""
        assert all(abs(root.b - 1.0) <= 1.0 for root in roots_m2)
        assert all(root.b > 0.0 for root in roots_m2)

    def test_residuals(self, roots_m2: list) -> None:
        """Test each root is a zero of D rather than a pole."""
        for root in roots_m2:
            point = dispersion_point(2, 1.0, complex(0.0, -2.0 * root.b))
            assert point.relative <= 1e-6
            assert root.residual == pytest.approx(abs(point.value), abs=1e-12)
            assert len(root.row()) == len(RANKINE_COLUMNS)

    def test_window_agrees(self, roots_m2: list) -> None:
        """Test a uniform scan of a b window finds the same roots."""
        window = find_rankine_roots(2, 1.0, (1.1, 1.9))
        expected = [root.b for root in roots_m2 if 1.1 < root.b < 1.9]

        assert [root.b for root in window] == pytest.approx(expected, abs=1e-10)

    def test_wide_window(self) -> None:
        """Test roots found in b in [-1, 3] stay inside |b - 1| <= 1."""
        roots = find_rankine_roots(2, 1.0, (-1.0, 3.0))

        assert roots
        assert all(abs(root.b - 1.0) <= 1.0 + 1e-9 for root in roots)

    def test_rejects(self) -> None:
        """Test m = 0 and k = 0 are rejected."""
        with pytest.raises(ValidationError):
            find_rankine_roots(0, 1.0)
        with pytest.raises(ValidationError):
            find_rankine_roots(2, 0.0)


class TestRankineMode:
    """Tests for the Bessel modes and the interface conditions."""

    def test_jump_conditions_at_roots(self, roots_m2: list) -> None:
        """Test every root mode satisfies the matching relations to 1e-8."""
        for root in roots_m2:
            mode = rankine_mode(2, 1.0, complex(0.0, -2.0 * root.b))
            assert jump_conditions(mode).worst() < 1e-8

    def test_jump_off_root(self) -> None:
        """Test u_r jumps at a parameter that is not an eigenvalue."""
        mode = rankine_mode(2, 1.0, 0.6 - 0.8j)

        assert jump_conditions(mode).u_r_continuity > 1e-8
        assert jump_conditions(mode).axial_radial < 1e-10

    def test_normalization(self) -> None:
        """Test u_z(1) = 1 from both sides."""
        mode = rankine_mode(2, 1.0, 0.6 - 0.8j)
        inner, _ = mode.u_z(np.array([1.0]), "inner")
        outer, _ = mode.u_z(np.array([1.0]), "outer")

        assert inner[0] == pytest.approx(1.0)
        assert outer[0] == pytest.approx(1.0)

    def test_rejects(self) -> None:
        """Test excluded parameters and non-positive radii."""
        with pytest.raises(ValidationError):
            rankine_mode(0, 1.0, 0.5)
        with pytest.raises(ValidationError):
            rankine_mode(2, 1.0, -2.0j)
        with pytest.raises(ValidationError):
            rankine_mode(2, 1.0, -4.0j)
        with pytest.raises(ValidationError):
            rankine_mode(2, 1.0, 0.5).u_r(np.array([0.0, 1.0]))


class TestRankineIdentity:
    """Tests for the energy balance that excludes non-imaginary roots."""

    def test_balance_vanishes_at_root(self, roots_m2: list) -> None:
        """Test the balance of the outermost root mode is zero."""
        root = roots_m2[0]
        s = complex(0.0, -2.0 * root.b)
        mode = rankine_mode(2, 1.0, s)
        r, w = radial_nodes(mode.r0, mode.r_match, mode.r_max)
        u, _ = mode.values(r)
        norm_sq = float(np.sum(w * r * np.abs(u) ** 2))

        assert abs(rankine_balance(2, 1.0, s, mode)) <= 1e-6 * norm_sq

    def test_zero_growth(self) -> None:
        """Test a = 0 gives identity 0."""
        assert rankine_identity(2, 1.0, -0.8j, gaussian_trial()) == 0.0

    def test_imaginary_part_of_balance(self) -> None:
        """Test the identity is -Im(gamma_* times the balance)."""
        a, b = 0.3, 0.4
        s = 2.0 * complex(a, -b)
        u = gaussian_trial()
        gamma_star = complex(1.0 - b, -a)
        expected = -(gamma_star * rankine_balance(2, 1.0, s, u)).imag

        assert rankine_identity(2, 1.0, s, u) == pytest.approx(expected, rel=1e-10)

    def test_positive_off_axis(self) -> None:
        """Test a > 0 with nonzero u gives a strictly positive value."""
        assert rankine_identity(2, 1.0, 2.0 * complex(0.1, -0.5), gaussian_trial()) > 0.0

    def test_rejects_unmatched_mode(self) -> None:
        """Test a Bessel mode off the dispersion relation is rejected."""
        s = 0.6 - 0.8j

        with pytest.raises(ValidationError):
            rankine_identity(2, 1.0, s, rankine_mode(2, 1.0, s))


class TestCountUnstable:
    """Tests for the argument-principle count."""

    @pytest.mark.slow
    @pytest.mark.parametrize("m,k", [(1, 1.0), (2, 1.0), (3, 2.0)])
    def test_no_unstable_eigenvalues(self, m: int, k: float) -> None:
        """Test the Rankine vortex has no zeros of D off the imaginary axis."""
        rect = Rectangle(b_min=0.05, b_max=0.95, a_min=0.01, a_max=3.0)
        result = count_unstable(m, k, rect)

        assert result.winding == 0
        assert result.roots == []

    def test_rejects_imaginary_axis(self) -> None:
        """Test rectangles touching a = 0 are rejected."""
        rect = Rectangle(b_min=0.1, b_max=0.9, a_min=0.0, a_max=1.0)

        with pytest.raises(ValidationError):
            count_unstable(2, 1.0, rect)
