"""tests/unit/test_nonlinearity.py"""

import numpy as np
import pytest

from levyscope.operators.grid import Grid, GridFunction
from levyscope.viscosity.nonlinearity import (
    BELLMAN,
    PARABOLIC_INTERFACE,
    STATIONARY_SEMILINEAR,
    Control,
    as_field,
    bellman,
    custom,
    parabolic_interface,
    stationary_semilinear,
)


class TestAsField:
    """Tests for as_field."""

    def test_constant(self):
        """Test constants become constant maps."""
        assert as_field(2.5)(np.array([9.0])) == 2.5

    def test_callable(self):
        """Test callables are wrapped to floats."""
        assert as_field(lambda x: x[0] ** 2)(np.array([3.0])) == 9.0

    def test_grid_function(self):
        """Test grid functions are interpolated."""
        grid = Grid(1, 1.0, 0.5)
        u = GridFunction(grid, [0.0, 1.0, 2.0, 3.0, 4.0])
        assert as_field(u)(np.array([0.25])) == pytest.approx(2.5)


class TestControl:
    """Tests for Control."""

    def test_scalar_drift_broadcast(self):
        """Test a scalar drift fills every coordinate."""
        control = Control(sigma=1.0, drift=0.5)
        drift = control.drift_at(np.array([0.0, 1.0]))
        np.testing.assert_array_equal(drift, [0.5, 0.5])

    def test_callable_fields(self):
        """Test callable sigma, drift and source."""
        control = Control(
            sigma=lambda x: 2.0 * x[0], drift=lambda x: -x, source=lambda x: 1.0 + x[0]
        )
        x = np.array([0.5])
        assert control.sigma_at(x) == 1.0
        np.testing.assert_array_equal(control.drift_at(x), [-0.5])
        assert control.source_at(x) == 1.5

    def test_describe(self):
        """Test the JSON view names callables by type."""
        control = Control(sigma=0.5, drift=[1.0], source=lambda x: 0.0, name="a0")
        expected = {"name": "a0", "sigma": 0.5, "drift": [1.0], "source": "function"}
        assert control.describe() == expected


class TestCatalog:
    """Tests for the catalog nonlinearities."""

    def test_stationary_semilinear(self):
        """Test gamma u + |p|^2/2 - nu tr X - l - f."""
        F = stationary_semilinear(2.0, 0.5, source=1.0)
        value = F([0.0], 1.0, [2.0], [[4.0]], 0.5)
        assert value == pytest.approx(2.0 + 2.0 - 2.0 - 0.5 - 1.0)
        assert F.name == STATIONARY_SEMILINEAR
        assert F.gamma == 2.0
        assert F.stationary

    def test_stationary_rejects_bad_constants(self):
        """Test gamma must be positive and nu nonnegative."""
        with pytest.raises(ValueError):
            stationary_semilinear(0.0)
        with pytest.raises(ValueError):
            stationary_semilinear(1.0, -0.1)

    def test_parabolic_interface(self):
        """Test |p|^2/2 - l with no u dependence."""
        F = parabolic_interface()
        assert F(0.0, 10.0, [1.0, 1.0], np.zeros((2, 2)), 0.25) == pytest.approx(0.75)
        assert F.name == PARABOLIC_INTERFACE
        assert not F.stationary
        assert F.gamma == 0.0

    def test_bellman_takes_the_worst_control(self):
        """Test the max over controls."""
        cheap = Control(sigma=0.0, source=1.0)
        driven = Control(sigma=1.0, drift=1.0, source=0.0)
        controls = [cheap, driven]
        F = bellman(0.5, controls)
        # control 0: -l - 1; control 1: -l - tr X / 2 - p
        value = F(0.0, 2.0, 0.5, -4.0, 0.25)
        assert value == pytest.approx(1.0 + max(-0.25 - 1.0, -0.25 + 2.0 - 0.5))
        assert F.name == BELLMAN
        assert F.gamma == 0.5

    def test_bellman_rejects_bad_input(self):
        """Test lambda must be positive and controls present."""
        with pytest.raises(ValueError):
            bellman(0.0, [Control()])
        with pytest.raises(ValueError):
            bellman(1.0, [])

    def test_custom(self):
        """Test custom maps keep their declared constants."""
        F = custom(
            lambda x, u, p, X, l: u - 2.0 * l, gamma=1.0, l_lipschitz=2.0, name="mine"
        )
        assert F(0.0, 1.0, 0.0, 0.0, 1.0) == -1.0
        view = F.describe()
        assert view["name"] == "mine"
        assert view["l_lipschitz"] == 2.0
        assert view["controls"] == []
