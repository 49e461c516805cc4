"""tests/unit/test_assumptions.py"""

import numpy as np
import pytest

from levyscope.exceptions import InvalidSampleError
from levyscope.operators.jump_maps import CustomJump, IdentityJump, LinearInZ, ShearJump
from levyscope.viscosity.assumptions import (
    EllipticitySample,
    MonotonicitySample,
    catalog_attestation,
    check_A1,
    check_A2_A4,
    check_ellipticity,
    ordered_samples,
    structure_samples,
)
from levyscope.viscosity.nonlinearity import (
    Control,
    bellman,
    custom,
    parabolic_interface,
    stationary_semilinear,
)

PAIRS = [([0.0], [0.5]), ([-1.0], [0.3]), ([0.2], [0.25])]


class TestSamples:
    """Tests for the sample generators."""

    def test_ordered_samples_are_ordered(self):
        """Test M - N is positive semidefinite and l1 >= l2."""
        for s in ordered_samples(2, count=8, seed=3):
            assert np.min(np.linalg.eigvalsh(s.M - s.N)) >= -1e-12
            assert s.l1 >= s.l2

    def test_reproducible(self):
        """Test equal seeds give equal samples."""
        first, _ = structure_samples(1, count=4, seed=9)
        second, _ = structure_samples(1, count=4, seed=9)
        assert [s.u for s in first] == [s.u for s in second]
        assert all(s.u >= s.v for s in first)


class TestEllipticity:
    """Tests for check_ellipticity."""

    @pytest.mark.parametrize(
        "F",
        [
            stationary_semilinear(1.0, 0.5),
            parabolic_interface(),
            bellman(1.0, [Control(sigma=1.0, drift=0.5), Control(sigma=0.2)]),
        ],
        ids=lambda F: F.name,
    )
    def test_catalog_passes(self, F):
        """Test every catalog entry is degenerate elliptic."""
        report = check_ellipticity(F, ordered_samples(2))
        assert report.passed
        assert report.checked == 32
        assert report.to_dict()["pass"] is True

    def test_wrong_sign_trace_fails(self):
        """Test +tr X violates ellipticity."""
        F = custom(lambda x, u, p, X, l: float(np.trace(X)) - l)
        report = check_ellipticity(F, ordered_samples(1))
        assert not report.passed
        assert report.failures[0]["F_M_l1"] > report.failures[0]["F_N_l2"]

    def test_increasing_in_l_fails(self):
        """Test F increasing in l violates ellipticity."""
        F = custom(lambda x, u, p, X, l: l)
        assert not check_ellipticity(F, ordered_samples(1)).passed

    def test_unordered_sample_rejected(self):
        """Test pairs with M - N indefinite raise InvalidSampleError."""
        sample = EllipticitySample(
            x=np.zeros(1),
            u=0.0,
            p=np.zeros(1),
            M=np.eye(1),
            N=2.0 * np.eye(1),
            l1=0.0,
            l2=0.0,
        )
        with pytest.raises(InvalidSampleError):
            check_ellipticity(stationary_semilinear(), [sample])


class TestMonotonicityAndLipschitz:
    """Tests for check_A2_A4."""

    def test_catalog_passes(self):
        """Test declared constants of the catalog hold."""
        monotone, lipschitz = structure_samples(2)
        for F in (stationary_semilinear(2.0, 0.1), bellman(0.5, [Control(sigma=1.0)])):
            report = check_A2_A4(F, monotone, lipschitz)
            assert report.passed
            assert report.details["gamma"] == F.gamma

    def test_overstated_gamma_fails(self):
        """Test a declared gamma above the true slope in u fails."""
        F = custom(lambda x, u, p, X, l: u - l, gamma=2.0)
        report = check_A2_A4(F, *structure_samples(1))
        assert not report.passed
        assert {f["assumption"] for f in report.failures} == {"A2"}

    def test_understated_l_lipschitz_fails(self):
        """Test a declared Lipschitz constant in l below the truth fails."""
        F = custom(lambda x, u, p, X, l: u - 3.0 * l, gamma=1.0, l_lipschitz=1.0)
        report = check_A2_A4(F, *structure_samples(1))
        assert {f["assumption"] for f in report.failures} == {"A4"}

    def test_decreasing_sample_rejected(self):
        """Test u < v raises InvalidSampleError."""
        zero = np.zeros(1)
        sample = MonotonicitySample(zero, 0.0, 1.0, zero, np.zeros((1, 1)), 0.0)
        with pytest.raises(InvalidSampleError):
            check_A2_A4(stationary_semilinear(), [sample], [])


class TestJumpMapAudit:
    """Tests for check_A1."""

    def test_identity_passes(self, stable_1d):
        """Test the identity has zero Lipschitz ratios."""
        report = check_A1(stable_1d, IdentityJump(), PAIRS)
        assert report.passed
        assert report.details["c_bar"] == 0.0
        assert all(r["second"] == 0.0 for r in report.details["ratios"])

    def test_shear_passes_on_heavy_tails(self, stable_1d):
        """Test the saturated shear satisfies both integral bounds."""
        report = check_A1(stable_1d, ShearJump(0.5, 1.0), PAIRS)
        assert report.passed
        assert report.checked == 6 + 3
        for ratio in report.details["ratios"]:
            assert 0.0 < ratio["second"] <= report.details["c_bar"] * (1.0 + 1e-3)

    def test_unsaturated_linear_map_fails_on_heavy_tails(self, stable_1d):
        """Test a divergent second moment makes the quadratic ratio infinite."""
        report = check_A1(stable_1d, LinearInZ(1.0, 0.5), PAIRS)
        assert not report.passed
        assert report.failures[0]["check"] == "lipschitz"

    def test_linear_bound_violation(self, atoms):
        """Test jumps longer than the declared linear bound are reported."""
        jmap = CustomJump(
            lambda x, z: 3.0 * z, lipschitz_x=0.0, linear_bound=1.0, odd=True
        )
        report = check_A1(atoms, jmap, PAIRS)
        assert not report.passed
        assert "linear_bound" in {f["check"] for f in report.failures}

    def test_explicit_constant_too_small(self, stable_1d):
        """Test an explicit c_bar below the true ratio fails."""
        report = check_A1(stable_1d, ShearJump(1.0, 2.0), PAIRS, c_bar=1e-3)
        assert not report.passed

    def test_coincident_points_rejected(self, stable_1d):
        """Test x == y raises InvalidSampleError."""
        with pytest.raises(InvalidSampleError):
            check_A1(stable_1d, IdentityJump(), [([0.1], [0.1])])


class TestAttestation:
    """Tests for catalog_attestation."""

    def test_catalog_is_attested(self):
        """Test the stationary and Bellman entries are attested."""
        assert catalog_attestation(stationary_semilinear())["status"] == "attested"
        assert catalog_attestation(bellman(1.0, [Control()]))["status"] == "attested"

    def test_custom_is_not_attested(self):
        """Test custom maps are not attested."""
        view = catalog_attestation(custom(lambda x, u, p, X, l: u))
        assert view["status"] == "not_attested"
        assert view["assumption"] == "A3"
