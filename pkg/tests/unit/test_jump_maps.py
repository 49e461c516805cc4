"""tests/unit/test_jump_maps.py"""

import math

import numpy as np
import pytest

from levyscope.measures import LevyMeasure, large_ball_moment, tail_mass
from levyscope.operators.jump_maps import (
    ConstantWeight,
    CustomJump,
    IdentityJump,
    LinearInZ,
    SaturatedLinearWeight,
    ShearJump,
    make_jump_map,
    make_weight_map,
)

Z = np.array([[-2.0], [-0.5], [0.0], [0.25], [3.0]])


class TestIdentityJump:
    """Tests for IdentityJump."""

    def test_constants(self):
        """Test identity jumps are odd with unit linear bound."""
        jmap = IdentityJump()
        assert jmap.odd
        assert jmap.lipschitz_x == 0.0
        assert jmap.linear_bound == 1.0
        np.testing.assert_array_equal(jmap.apply(0.7, Z), Z)

    def test_tail_difference_vanishes(self, stable_1d):
        """Test identical jumps have no tail difference."""
        assert IdentityJump().tail_difference(0.0, 1.0, 2.0, stable_1d, 1.0) == 0.0


class TestLinearInZ:
    """Tests for LinearInZ."""

    def test_apply(self):
        """Test j(x, z) = (a0 + a1 sin x) z in 1D."""
        jmap = LinearInZ(1.0, 0.5)
        np.testing.assert_allclose(jmap.apply(0.3, Z), (1.0 + 0.5 * math.sin(0.3)) * Z)
        assert jmap.lipschitz_x == 0.5
        assert jmap.linear_bound == 1.5
        assert jmap.odd

    def test_matrix_2d(self):
        """Test the matrix field is diagonal in 2D."""
        matrix = LinearInZ(2.0, 1.0).matrix([0.0, math.pi / 2])
        np.testing.assert_allclose(matrix, [[2.0, 0.0], [0.0, 3.0]])

    def test_tail_difference_uses_large_moment(self, stable_1d):
        """Test the tail difference is gap^p times the large ball moment."""
        jmap = LinearInZ(1.0, 0.5)
        gap = 0.5 * abs(math.sin(0.2) - math.sin(-0.4))
        expected = gap * float(large_ball_moment(stable_1d, 1.0, 2.0))
        value = jmap.tail_difference(0.2, -0.4, 1.0, stable_1d, 2.0)
        assert value == pytest.approx(expected)

    def test_tail_difference_divergent_moment(self, stable_1d):
        """Test a divergent moment gives an infinite bound."""
        jmap = LinearInZ(1.0, 0.5)
        assert jmap.tail_difference(0.2, -0.4, 2.0, stable_1d, 1.0) == math.inf

    def test_constant_coefficients_have_no_difference(self, stable_1d):
        """Test a1 = 0 gives no difference even for divergent moments."""
        jmap = LinearInZ(2.0, 0.0)
        assert jmap.tail_difference(0.2, -0.4, 2.0, stable_1d, 1.0) == 0.0


class TestShearJump:
    """Tests for ShearJump."""

    def test_apply_saturates(self):
        """Test the shear is proportional near zero and a shift beyond |z| = 1."""
        jmap = ShearJump(0.5, 1.0)
        b = 0.5 * math.sin(1.0)
        jumps = jmap.apply(1.0, Z)[:, 0]
        assert jumps[1] == pytest.approx(-0.5 * (1.0 + b))
        assert jumps[2] == 0.0
        assert jumps[3] == pytest.approx(0.25 * (1.0 + b))
        assert jumps[4] == pytest.approx(3.0 + b)
        assert jumps[0] == pytest.approx(-2.0 - b)

    def test_odd_in_z(self):
        """Test j(x, -z) = -j(x, z)."""
        jmap = ShearJump(0.3, 2.0)
        np.testing.assert_allclose(jmap.apply(0.4, -Z), -jmap.apply(0.4, Z))

    def test_declared_constants(self):
        """Test the Lipschitz and linear bounds."""
        jmap = ShearJump(0.5, 2.0)
        assert jmap.lipschitz_x == 1.0
        assert jmap.linear_bound == 1.5
        moving = Z[Z[:, 0] != 0]
        ratios = np.abs(jmap.apply(0.7, moving))[:, 0] / np.abs(moving[:, 0])
        assert np.all(ratios <= jmap.linear_bound + 1e-12)

    def test_tail_difference(self, stable_1d):
        """Test the saturated shift integrates against the tail mass."""
        jmap = ShearJump(0.5, 1.0)
        gap = abs(jmap.shift(0.3) - jmap.shift(-0.2))
        expected = gap**2 * tail_mass(stable_1d, 1.0)
        value = jmap.tail_difference(0.3, -0.2, 2.0, stable_1d, 0.5)
        assert value == pytest.approx(expected)
        assert jmap.tail_difference(0.3, 0.3, 2.0, stable_1d, 0.5) == 0.0

    def test_describe(self):
        """Test the JSON view carries the shear parameters."""
        view = ShearJump(0.25, 3.0).describe()
        assert view["name"] == "shear"
        assert view["b_amp"] == 0.25
        assert view["b_freq"] == 3.0


class TestCustomJump:
    """Tests for CustomJump."""

    def test_apply_reshapes(self):
        """Test user functions are evaluated with a row point."""
        jmap = CustomJump(
            lambda x, z: 2.0 * z + 0.0 * x[0], lipschitz_x=0.0, linear_bound=2.0
        )
        np.testing.assert_allclose(jmap.apply(1.0, Z), 2.0 * Z)
        assert not jmap.odd
        heavy = LevyMeasure.stable(1.5)
        assert jmap.tail_difference(0.0, 1.0, 1.0, heavy, 1.0) == math.inf


class TestWeights:
    """Tests for weight maps."""

    def test_constant_weight(self):
        """Test constant weights have order zero."""
        weight = ConstantWeight(-2.0)
        assert weight.bound == 2.0
        assert weight.order == 0
        np.testing.assert_allclose(weight.apply(0.0, Z), -2.0)

    def test_saturated_linear_weight(self):
        """Test k min(|z|, 1) vanishes linearly at zero."""
        weight = SaturatedLinearWeight(3.0)
        assert weight.order == 1
        np.testing.assert_allclose(weight.apply(0.0, Z), [3.0, 1.5, 0.0, 0.75, 3.0])


class TestCatalog:
    """Tests for the jump and weight catalogs."""

    def test_make_jump_map(self):
        """Test catalog names build jump maps."""
        assert isinstance(make_jump_map("shear", amplitude=0.1), ShearJump)
        assert isinstance(make_jump_map("identity"), IdentityJump)

    def test_make_weight_map(self):
        """Test catalog names build weight maps."""
        assert make_weight_map("constant", c=1.0).bound == 1.0

    @pytest.mark.parametrize(
        "factory, name, params",
        [
            (make_jump_map, "rotate", {}),
            (make_jump_map, "shear", {"phase": 1.0}),
            (make_weight_map, "cubic", {}),
            (make_weight_map, "constant", {"k": 1.0}),
        ],
    )
    def test_errors(self, factory, name, params):
        """Test unknown names and parameters raise ValueError."""
        with pytest.raises(ValueError):
            factory(name, **params)
