"""tests/unit/test_quadrature.py"""

import numpy as np
import pytest

from levyscope.exceptions import TolUnreachableError
from levyscope.measures import (
    LevyMeasure,
    QuadratureSettings,
    build_quadrature,
    small_ball_moment,
    tail_mass,
)
from levyscope.measures.quadrature import MIN_FLOOR


class TestBuildQuadrature:
    """Tests for build_quadrature."""

    @pytest.mark.parametrize("delta", [1.0, 0.5, 0.125])
    def test_inner_moment_with_remainder(self, stable_1d, delta):
        """Test resolved plus remainder second moment matches the closed form."""
        rule = build_quadrature(stable_1d, delta, 1e-6)
        exact = small_ball_moment(stable_1d, 2.0, delta)
        resolved = rule.inner_moment() + rule.inner_remainder
        assert resolved == pytest.approx(exact, rel=1e-8)
        cubic = small_ball_moment(stable_1d, 3.0, rule.inner_floor)
        assert cubic <= 1e-6 * delta * exact
        assert np.all(np.linalg.norm(rule.inner_nodes, axis=1) <= delta)
        assert np.all(rule.inner_weights > 0)

    def test_outer_mass_with_tail(self, stable_1d):
        """Test outer quadrature mass plus tail bound matches the closed form."""
        rule = build_quadrature(stable_1d, 0.5, 1e-6)
        total = rule.outer_mass + rule.tail_bound
        assert total == pytest.approx(tail_mass(stable_1d, 0.5), rel=1e-6)
        assert np.all(np.linalg.norm(rule.outer_nodes, axis=1) > 0.5)
        assert rule.tail_bound == pytest.approx(tail_mass(stable_1d, rule.r_max))
        assert rule.tail_weights.sum() == pytest.approx(rule.tail_bound)

    def test_tempered_rule(self, tempered):
        """Test the tempered measure closes its tail with brentq."""
        rule = build_quadrature(tempered, 0.5, 1e-6)
        closure = 1e-6 * tail_mass(tempered, 1.0)
        assert rule.tail_bound == pytest.approx(closure, rel=1e-6)
        total = rule.outer_mass + rule.tail_bound
        assert total == pytest.approx(tail_mass(tempered, 0.5), rel=1e-6)

    def test_symmetric_2d_nodes_pair_up(self):
        """Test symmetric 2D rules contain each node together with its negative."""
        measure = LevyMeasure.stable(1.0, dim=2)
        rule = build_quadrature(measure, 0.5, 1e-4, QuadratureSettings(n_angular=16))
        assert rule.symmetric
        half = rule.inner_nodes.shape[0]
        np.testing.assert_allclose(rule.inner_nodes.sum(axis=0), 0.0, atol=1e-10 * half)
        moment = rule.inner_weights @ rule.inner_nodes
        np.testing.assert_allclose(moment, 0.0, atol=1e-10)

    def test_atom_rule_is_exact(self, atoms):
        """Test atoms are split by radius with no tail and no remainder."""
        rule = build_quadrature(atoms, 0.25, 1e-6)
        assert rule.inner_weights.size == 0
        assert rule.outer_weights.tolist() == [1.0, 1.0]
        assert rule.tail_bound == 0.0
        assert rule.inner_remainder == 0.0
        inside = build_quadrature(atoms, 1.0, 1e-6)
        assert inside.outer_weights.size == 0
        assert inside.inner_moment() == pytest.approx(0.5)

    def test_argument_ranges(self, stable_1d):
        """Test delta and tol must lie in their ranges."""
        with pytest.raises(ValueError):
            build_quadrature(stable_1d, 1.5, 1e-6)
        with pytest.raises(ValueError):
            build_quadrature(stable_1d, 0.5, 1.0)

    def test_tolerance_unreachable(self, stable_1d):
        """Test a level budget too small for the tolerance raises."""
        with pytest.raises(TolUnreachableError):
            build_quadrature(stable_1d, 0.5, 1e-10, QuadratureSettings(max_levels=3))

    @pytest.mark.parametrize("alpha", [0.1, 1.0, 1.9, 1.95, 1.99])
    def test_every_alpha_reaches_tolerance(self, alpha):
        """Test the inner loop stops early for every alpha in (0, 2)."""
        measure = LevyMeasure.stable(alpha)
        rule = build_quadrature(measure, 1.0, 1e-6)
        assert rule.levels <= 30
        assert rule.inner_floor >= MIN_FLOOR
        exact = small_ball_moment(measure, 2.0, 1.0)
        resolved = rule.inner_moment() + rule.inner_remainder
        assert resolved == pytest.approx(exact, rel=1e-8)

    def test_floor_table_matches_closed_form(self, stable_1d, tempered):
        """Test the per-direction floor moments sum to the small-ball moment."""
        for measure in (stable_1d, tempered):
            rule = build_quadrature(measure, 0.5, 1e-6)
            exact = small_ball_moment(measure, 2.0, rule.inner_floor)
            assert rule.floor_weights.sum() == pytest.approx(exact, rel=1e-10)
            assert rule.inner_remainder == pytest.approx(exact, rel=1e-10)

    def test_isotropic_floor_covariance(self):
        """Test the 2D floor covariance of an isotropic measure is a multiple of I."""
        measure = LevyMeasure.stable(1.0, dim=2)
        rule = build_quadrature(measure, 0.5, 1e-4, QuadratureSettings(n_angular=16))
        dirs, weights = rule.floor_directions, rule.floor_weights
        covariance = (dirs * weights[:, None]).T @ dirs
        half = 0.5 * rule.inner_remainder
        np.testing.assert_allclose(covariance, half * np.eye(2), atol=1e-12 * half)

    def test_summary(self, stable_rule):
        """Test the report summary carries the split radius and counts."""
        summary = stable_rule.summary()
        assert summary["delta"] == 0.5
        assert summary["inner_nodes"] + summary["outer_nodes"] == stable_rule.node_count
        assert summary["symmetric"] is True
