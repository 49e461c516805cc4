"""tests/unit/test_problem.py"""

import numpy as np
import pytest

from levyscope.operators.grid import Grid, GridFunction
from levyscope.operators.jump_maps import IdentityJump, ShearJump
from levyscope.solvers.problem import ProblemSpec, sample_scalar
from levyscope.viscosity.nonlinearity import (
    BELLMAN,
    PARABOLIC_INTERFACE,
    STATIONARY_SEMILINEAR,
    Control,
)

TWO_JMAPS = [IdentityJump(), IdentityJump()]


class TestProblemSpec:
    """Tests for ProblemSpec."""

    def test_defaults(self, atoms):
        """Test a stationary problem with default fields."""
        problem = ProblemSpec(STATIONARY_SEMILINEAR, atoms)
        assert problem.stationary
        assert isinstance(problem.jmap, IdentityJump)
        assert problem.hamiltonian == 0.5
        assert problem.describe()["kind"] == STATIONARY_SEMILINEAR

    def test_parabolic_is_not_stationary(self, atoms):
        """Test the interface problem carries a time derivative."""
        problem = ProblemSpec(PARABOLIC_INTERFACE, atoms, gamma=0.0)
        assert not problem.stationary

    @pytest.mark.parametrize(
        "kind,kwargs",
        [
            ("heat", {}),
            (STATIONARY_SEMILINEAR, {"nu": -1.0}),
            (STATIONARY_SEMILINEAR, {"hamiltonian": -0.5}),
            (STATIONARY_SEMILINEAR, {"gamma": 0.0}),
            (PARABOLIC_INTERFACE, {"horizon": 0.0}),
            (BELLMAN, {}),
            (BELLMAN, {"controls": [Control()], "jmaps": TWO_JMAPS}),
        ],
    )
    def test_invalid_problems(self, atoms, kind, kwargs):
        """Test inconsistent problems raise ValueError."""
        with pytest.raises(ValueError):
            ProblemSpec(kind, atoms, **kwargs)

    def test_control_jmap(self, atoms):
        """Test per-control jump maps override the shared one."""
        shear = ShearJump()
        controls = [Control(), Control()]
        shared = ProblemSpec(BELLMAN, atoms, controls=controls)
        own = ProblemSpec(
            BELLMAN, atoms, controls=controls, jmaps=[IdentityJump(), shear]
        )
        assert isinstance(shared.control_jmap(1), IdentityJump)
        assert own.control_jmap(1) is shear


class TestSampleScalar:
    """Tests for sample_scalar."""

    def test_constant_and_callable(self):
        """Test constants fill the grid and callables are sampled."""
        grid = Grid(1, 1.0, 0.5)
        np.testing.assert_array_equal(sample_scalar(2, grid), np.full(5, 2.0))
        np.testing.assert_allclose(
            sample_scalar(lambda x: x[0] ** 2, grid), [1.0, 0.25, 0.0, 0.25, 1.0]
        )

    def test_grid_function(self):
        """Test grid functions are copied node for node."""
        grid = Grid(1, 1.0, 0.5)
        values = np.arange(5.0)
        sampled = sample_scalar(GridFunction(grid, values), grid)
        sampled[0] = 99.0
        np.testing.assert_array_equal(values, np.arange(5.0))

    def test_grid_mismatch(self):
        """Test a grid function on another grid is rejected."""
        other = GridFunction(Grid(1, 1.0, 0.25), np.zeros(9))
        with pytest.raises(ValueError):
            sample_scalar(other, Grid(1, 1.0, 0.5))
