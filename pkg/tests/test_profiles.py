"""Tests for vortex profiles, Q-space reconstruction and validation."""

import numpy as np
import pytest

from src.profiles import (
    KaufmannScullyProfile,
    ProfileKind,
    QFunction,
    RadialGrid,
    ReferenceW1Profile,
    SampledVorticityProfile,
    VortexProfile,
    check_delta_bounds,
    homotopy,
    interpolate_q,
    j_of,
    lamb_oseen_j_prime,
    lipschitz_check,
    make_builtin,
    mollify_q,
    profile_from_json,
    profile_from_q,
    profile_record,
    profile_to_json,
    q_from_profile,
    validate_class_q,
    validate_class_w,
)
from src.utils.exceptions import ClassViolationError, ProfileError, ValidationError


class TestBuiltins:
    """Tests for closed-form profiles."""

    def test_kaufmann_scully_j(self, kaufmann_scully: VortexProfile) -> None:
        """Test J = 1 + 1/r^2 for the Kaufmann-Scully vortex."""
        r = np.geomspace(0.01, 100.0, 50)

        np.testing.assert_allclose(j_of(kaufmann_scully, r), 1.0 + 1.0 / r**2, rtol=1e-10)

    def test_lamb_oseen_j_decreasing(self, lamb_oseen: VortexProfile, grid: RadialGrid) -> None:
        """Test J' < 0 for Lamb-Oseen wherever it has not underflowed."""
        jp = lamb_oseen_j_prime(grid.r)
        live = np.abs(jp) > 1e-250

        assert np.all(jp[live] < 0)

    def test_lamb_oseen_j_prime_matches_generic(self, lamb_oseen: VortexProfile) -> None:
        """Test the closed form of J' against the generic formula."""
        r = np.linspace(0.2, 3.0, 30)

        np.testing.assert_allclose(lamb_oseen_j_prime(r), lamb_oseen.j_prime(r), rtol=1e-6)

    def test_normalization(self, lamb_oseen: VortexProfile, kaufmann_scully: VortexProfile) -> None:
        """Test W(0) = 2 and Omega(0) = 1."""
        for profile in (lamb_oseen, kaufmann_scully):
            assert float(profile.W(0.0)) == pytest.approx(2.0)
            assert float(profile.omega(0.0)) == pytest.approx(1.0)

    def test_velocity_vorticity_relation(self, lamb_oseen: VortexProfile, grid: RadialGrid) -> None:
        """Test r Omega' + 2 Omega = W."""
        assert np.max(lamb_oseen.velovort_residual(grid.r)) < 1e-10

    def test_reference_profile_bound(self) -> None:
        """Test (k^2/m^2) J >= 1/4 for the reference profile."""
        profile = ReferenceW1Profile(3, 2.0)
        r = np.geomspace(1e-3, 1e3, 200)

        assert np.all((4.0 / 9.0) * profile.j(r) >= 0.25 - 1e-12)

    def test_rankine_flags(self, rankine: VortexProfile) -> None:
        """Test the Rankine vortex is representable but not admissible."""
        assert not rankine.class_w
        assert not rankine.real_analytic
        assert float(rankine.omega(2.0)) == pytest.approx(0.25)
        with pytest.raises(ClassViolationError):
            j_of(rankine, 0.5)

    def test_make_builtin(self) -> None:
        """Test construction by kind."""
        assert make_builtin("lamb-oseen").kind == ProfileKind.LAMB_OSEEN
        assert make_builtin("reference-w1", {"m": 2, "k": 1}).params == {"m": 2.0, "k": 1.0}

    def test_make_builtin_errors(self) -> None:
        """Test unknown kinds and missing parameters."""
        with pytest.raises(ProfileError):
            make_builtin("batchelor")
        with pytest.raises(ValidationError):
            make_builtin("reference-w1")
        with pytest.raises(ValidationError):
            ReferenceW1Profile(0, 1.0)

    def test_radius_where_omega(self, kaufmann_scully: VortexProfile) -> None:
        """Test the critical radius of Omega = 1/(1 + r^2)."""
        assert kaufmann_scully.radius_where_omega(0.5) == pytest.approx(1.0, abs=1e-12)
        assert kaufmann_scully.radius_where_omega(0.2) == pytest.approx(2.0, abs=1e-12)
        with pytest.raises(ValidationError):
            kaufmann_scully.radius_where_omega(1.5)

    def test_j_of_rejects_nonpositive_radius(self, lamb_oseen: VortexProfile) -> None:
        """Test J requires r > 0."""
        with pytest.raises(ValidationError):
            j_of(lamb_oseen, np.array([0.0, 1.0]))

    def test_sampled_vorticity_profile(self) -> None:
        """Test W = 2/(1+r)^2 is flagged non-admissible."""
        profile = SampledVorticityProfile(
            lambda s: 2.0 / (1.0 + s) ** 2, lambda s: -4.0 / (1.0 + s) ** 3
        )

        assert not profile.class_w
        assert float(profile.omega(0.0)) == pytest.approx(1.0)
        # Omega(1) = int_0^1 2 s / (1 + s)^2 ds = 2 ln 2 - 1.
        assert float(profile.omega(1.0)) == pytest.approx(2.0 * np.log(2.0) - 1.0, rel=1e-10)


class TestValidation:
    """Tests for admissibility diagnostics."""

    def test_lamb_oseen_admissible(self, lamb_oseen: VortexProfile, grid: RadialGrid) -> None:
        """Test all H1/H2 checks pass for Lamb-Oseen."""
        report = validate_class_w(lamb_oseen, grid)

        assert report.passed, [c.name for c in report.checks if not c.passed]

    def test_kaufmann_scully_admissible(
        self, kaufmann_scully: VortexProfile, grid: RadialGrid
    ) -> None:
        """Test all checks pass for Kaufmann-Scully."""
        assert validate_class_w(kaufmann_scully, grid).passed

    def test_rankine_fails_monotonicity(self, rankine: VortexProfile, grid: RadialGrid) -> None:
        """Test the Rankine vortex fails strict monotonicity without raising."""
        report = validate_class_w(rankine, grid)

        assert not report.passed
        assert not report.check("h1_monotone").passed

    def test_unknown_check_name(self, lamb_oseen: VortexProfile, small_grid: RadialGrid) -> None:
        """Test looking up a missing check."""
        with pytest.raises(KeyError):
            validate_class_w(lamb_oseen, small_grid).check("no_such_check")

    def test_q_class(self, kaufmann_scully: VortexProfile, grid: RadialGrid) -> None:
        """Test Q of Kaufmann-Scully satisfies the Q-space conditions."""
        report = validate_class_q(q_from_profile(kaufmann_scully), grid)

        assert report.passed, [c.name for c in report.checks if not c.passed]


class TestQFunction:
    """Tests for the Q-space map."""

    def test_q_range(self, lamb_oseen: VortexProfile) -> None:
        """Test Q takes values in (0, 1] and increases."""
        qf = q_from_profile(lamb_oseen)
        r = np.linspace(0.05, 4.0, 100)
        q = qf(r)

        assert np.all((q > 0) & (q <= 1.0))
        assert np.all(np.diff(q) > 0)

    def test_q_requires_class_w(self, rankine: VortexProfile) -> None:
        """Test Q is only defined for admissible profiles."""
        with pytest.raises(ClassViolationError):
            q_from_profile(rankine)

    @pytest.mark.parametrize("kind", ["kaufmann-scully", "lamb-oseen"])
    def test_reconstruction_round_trip(self, kind: str) -> None:
        """Test W -> Q -> W reproduces the vorticity on [0.01, 20]."""
        profile = make_builtin(kind)
        rebuilt = profile_from_q(q_from_profile(profile))
        r = np.geomspace(0.01, 20.0, 80)
        w = np.asarray(profile.W(r))
        mask = w > 1e-12

        np.testing.assert_allclose(np.asarray(rebuilt.W(r))[mask], w[mask], rtol=1e-6)
        np.testing.assert_allclose(rebuilt.omega(r), profile.omega(r), rtol=1e-6)

    def test_interpolation_endpoints(
        self, lamb_oseen: VortexProfile, kaufmann_scully: VortexProfile
    ) -> None:
        """Test the convex combination at t = 0, 1 and inside."""
        q0, q1 = q_from_profile(lamb_oseen), q_from_profile(kaufmann_scully)

        assert interpolate_q(q0, q1, 0.0) is q0
        assert interpolate_q(q0, q1, 1.0) is q1
        mid = interpolate_q(q0, q1, 0.25)
        assert float(mid(1.0)) == pytest.approx(0.75 * float(q0(1.0)) + 0.25 * float(q1(1.0)))
        with pytest.raises(ValidationError):
            interpolate_q(q0, q1, 1.5)

    def test_from_samples_rejects_decreasing(self) -> None:
        """Test sampled Q must be non-decreasing."""
        r = np.linspace(0.1, 1.0, 5)
        with pytest.raises(ValidationError):
            QFunction.from_samples(r, np.linspace(0.5, 0.1, 5))

    def test_mollified_constant(self) -> None:
        """Test smoothing a constant gives c erf(r / sqrt(eps))."""
        smoothed = mollify_q(QFunction.constant(0.5), 0.01)

        assert float(smoothed(1.0)) == pytest.approx(0.5, rel=1e-8)
        assert float(smoothed(0.0)) == pytest.approx(0.0, abs=1e-12)

    def test_mollify_rejects_nonpositive_epsilon(self) -> None:
        """Test epsilon must be positive."""
        with pytest.raises(ValidationError):
            mollify_q(QFunction.constant(0.5), 0.0)

    def test_delta_bounds(self, kaufmann_scully: VortexProfile) -> None:
        """Test the Q(1) bounds name the violated side."""
        qf = q_from_profile(kaufmann_scully)
        check_delta_bounds(qf, qf, 0.1)
        with pytest.raises(ValidationError) as exc_info:
            check_delta_bounds(qf, qf, 0.9)

        assert exc_info.value.details["side"] == "lower"

    def test_homotopy(self, lamb_oseen: VortexProfile, kaufmann_scully: VortexProfile) -> None:
        """Test the path starts at the first profile and stays normalized and positive."""
        q0, q1 = q_from_profile(lamb_oseen), q_from_profile(kaufmann_scully)
        r = np.geomspace(0.05, 3.0, 40)

        start = homotopy(q0, q1, 0.0)
        np.testing.assert_allclose(start.omega(r), lamb_oseen.omega(r), rtol=1e-6)

        middle = homotopy(q0, q1, 0.5)
        assert float(middle.omega(0.0)) == pytest.approx(1.0)
        assert float(middle.W(0.0)) == pytest.approx(2.0)
        assert np.all(np.asarray(middle.W(r)) > 0)
        assert np.all(np.diff(middle.omega(r)) < 0)

    def test_lipschitz_self_comparison(
        self, kaufmann_scully: VortexProfile, small_grid: RadialGrid
    ) -> None:
        """Test identical Q-functions give zero ratios."""
        qf = q_from_profile(kaufmann_scully)
        report = lipschitz_check(qf, qf, small_grid)

        assert report.sup_dq == 0.0
        assert report.ratio_w == 0.0
        assert report.ratio_w_prime == 0.0

    def test_lipschitz_ratios(
        self, lamb_oseen: VortexProfile, kaufmann_scully: VortexProfile, small_grid: RadialGrid
    ) -> None:
        """Test distinct Q-functions give finite positive ratios."""
        q0 = q_from_profile(kaufmann_scully)
        q1 = interpolate_q(q0, q_from_profile(lamb_oseen), 0.5)
        report = lipschitz_check(q0, q1, small_grid, delta=0.05)

        assert report.sup_dq > 0
        assert 0.0 < report.ratio_w < np.inf
        assert 0.0 < report.ratio_w_prime < np.inf
        assert report.delta == 0.05

    def test_lipschitz_checks_delta(
        self, kaufmann_scully: VortexProfile, small_grid: RadialGrid
    ) -> None:
        """Test the Q(1) bounds are enforced before measuring."""
        qf = q_from_profile(kaufmann_scully)

        with pytest.raises(ValidationError):
            lipschitz_check(qf, qf, small_grid, delta=0.9)


class TestSerialization:
    """Tests for the JSON profile record."""

    def test_round_trip(self, kaufmann_scully: VortexProfile, small_grid: RadialGrid) -> None:
        """Test stored samples round-trip exactly."""
        record = profile_record(kaufmann_scully, small_grid)
        restored = profile_from_json(profile_to_json(kaufmann_scully, small_grid))

        assert restored == record
        assert restored.to_profile().kind == ProfileKind.KAUFMANN_SCULLY

    def test_non_admissible_has_no_q(self, rankine: VortexProfile, small_grid: RadialGrid) -> None:
        """Test Q samples are null outside the class."""
        record = profile_record(rankine, small_grid)

        assert all(q is None for q in record.Q)


class TestRadialGrid:
    """Tests for the mapped Chebyshev grid."""

    def test_quadrature(self, grid: RadialGrid) -> None:
        """Test int exp(-r^2) r dr = 1/2."""
        assert grid.integrate(np.exp(-(grid.r**2))) == pytest.approx(0.5, rel=1e-10)

    def test_derivative(self, grid: RadialGrid) -> None:
        """Test d/dr of a Gaussian."""
        f = np.exp(-(grid.r**2))
        mask = grid.r < 5.0

        np.testing.assert_allclose((grid.D @ f)[mask], (-2.0 * grid.r * f)[mask], atol=1e-6)

    def test_refine(self, small_grid: RadialGrid) -> None:
        """Test refinement keeps the map."""
        fine = small_grid.refine(2.0)

        assert fine.n == 160
        assert fine.scale == small_grid.scale

    def test_rejects_small_grid(self) -> None:
        """Test at least 4 interior nodes."""
        with pytest.raises(ValidationError):
            RadialGrid(3, 4.0)

    def test_kaufmann_scully_lam_scaling(self) -> None:
        """Test Omega(r) = 1/(1 + lam^2 r^2)."""
        profile = KaufmannScullyProfile(lam=2.0)

        assert float(profile.omega(0.5)) == pytest.approx(0.5)
