"""tests/unit/test_convolution.py"""

import numpy as np
import pytest

from levyscope.exceptions import GridTooCoarseError
from levyscope.nonsmooth.convolution import (
    INF,
    SUP,
    ConvolutionResult,
    check_semiconvexity,
    inf_convolution,
    sup_convolution,
    write_convolution_csv,
)
from levyscope.operators.grid import Grid, GridFunction
from levyscope.operators.probes import Gaussian


@pytest.fixture
def wide_grid():
    """1D grid on [-3, 3] with h = 0.05."""
    return Grid(1, 3.0, 0.05)


class TestSupConvolution:
    """Tests for sup_convolution."""

    def test_dominates(self, wide_grid, rng):
        """Test the sup-convolution lies above the function at every node."""
        u = GridFunction(wide_grid, rng.uniform(-1.0, 1.0, wide_grid.shape))
        result = sup_convolution(u, 0.3, 0.1)
        assert np.all(result.values.flat >= u.flat)
        assert result.sign == SUP

    def test_constant_is_fixed(self, wide_grid):
        """Test constants are unchanged when r = 0."""
        u = GridFunction(wide_grid, np.full(wide_grid.shape, 2.0))
        result = sup_convolution(u, 0.0, 0.2)
        np.testing.assert_allclose(result.values.flat, 2.0)
        np.testing.assert_allclose(result.argmax_offsets, 0.0)

    def test_argmax_offsets(self, wide_grid):
        """Test optimizing nodes stay within the unit ball and hit the peak."""
        u = wide_grid.sample(Gaussian(0.0, 0.3))
        result = sup_convolution(u, 0.0, 0.05)
        assert np.all(np.linalg.norm(result.argmax_offsets, axis=1) <= 1.0 + 1e-12)
        center = wide_grid.nearest(0.0)
        np.testing.assert_allclose(result.argmax_nodes[center], [0.0], atol=1e-12)

    def test_slope_shift(self, wide_grid):
        """Test the slope tilts the penalty."""
        u = wide_grid.sample(lambda x: np.zeros(len(x)))
        result = sup_convolution(u, 1.0, 0.1)
        # max over w of -w - w^2 / 0.2 is at w = -0.1 with value 0.05
        middle = wide_grid.nearest(0.0)
        assert result.values.flat[middle] == pytest.approx(0.05)
        np.testing.assert_allclose(result.argmax_offsets[middle], [-0.1])

    def test_scalar_slope_in_2d(self):
        """Test a scalar slope is broadcast in 2D."""
        grid = Grid(2, 1.0, 0.25)
        u = GridFunction(grid, np.zeros(grid.shape))
        np.testing.assert_array_equal(sup_convolution(u, 0.5, 0.1).slope, [0.5, 0.5])

    def test_bad_alpha(self, wide_grid):
        """Test alpha must be positive."""
        u = GridFunction(wide_grid, np.zeros(wide_grid.shape))
        with pytest.raises(ValueError):
            sup_convolution(u, 0.0, 0.0)

    def test_bad_slope(self, wide_grid):
        """Test the slope must match the dimension."""
        u = GridFunction(wide_grid, np.zeros(wide_grid.shape))
        with pytest.raises(ValueError):
            sup_convolution(u, [1.0, 2.0], 0.1)

    def test_coarse_grid(self):
        """Test a mesh that cannot resolve the unit ball is rejected."""
        grid = Grid(1, 1.0, 0.5)
        with pytest.raises(GridTooCoarseError):
            sup_convolution(GridFunction(grid, np.zeros(grid.shape)), 0.0, 0.1)


class TestInfConvolution:
    """Tests for inf_convolution."""

    def test_duality_is_exact(self, wide_grid, rng):
        """Test R_a[V](r) = -R^a[-V](-r) node by node."""
        v = GridFunction(wide_grid, rng.uniform(-1.0, 1.0, wide_grid.shape))
        lower = inf_convolution(v, 0.4, 0.1)
        upper = sup_convolution(-v, -0.4, 0.1)
        np.testing.assert_array_equal(lower.values.flat, -upper.values.flat)
        assert lower.sign == INF
        np.testing.assert_array_equal(lower.slope, [0.4])

    def test_lies_below(self, wide_grid, rng):
        """Test the inf-convolution lies below the function."""
        v = GridFunction(wide_grid, rng.uniform(-1.0, 1.0, wide_grid.shape))
        assert np.all(inf_convolution(v, 0.0, 0.1).values.flat <= v.flat)


class TestSemiconvexity:
    """Tests for check_semiconvexity."""

    @pytest.mark.parametrize("alpha", [0.2, 0.1])
    def test_random_functions_pass(self, wide_grid, rng, alpha):
        """Test random bounded functions satisfy the -1/alpha floor."""
        for _ in range(5):
            u = GridFunction(wide_grid, rng.uniform(-1.0, 1.0, wide_grid.shape))
            report = check_semiconvexity(sup_convolution(u, 0.0, alpha))
            assert report.passed
            assert report.min_second_difference >= -1.0 / alpha - 1e-9
            margin = int(np.ceil(1.0 / wide_grid.h)) + 1
            assert report.checked_nodes == wide_grid.interior(margin).size

    def test_two_dimensional(self, rng):
        """Test the audit scans axes and diagonals in 2D."""
        grid = Grid(2, 1.5, 0.125)
        u = GridFunction(grid, rng.uniform(-1.0, 1.0, grid.shape))
        report = check_semiconvexity(sup_convolution(u, [0.1, -0.2], 0.1))
        assert report.passed
        assert report.checked_nodes > 0

    def test_concave_kink_fails(self, wide_grid):
        """Test a sharp concave kink is reported with its witness."""
        values = -100.0 * np.abs(wide_grid.axis)
        fake = ConvolutionResult(
            values=GridFunction(wide_grid, values),
            alpha=1.0,
            slope=np.zeros(1),
            argmax_offsets=np.zeros((wide_grid.size, 1)),
        )
        report = check_semiconvexity(fake, tol=0.0)
        assert not report.passed
        assert report.witness["node"] == pytest.approx([0.0])
        assert report.min_second_difference == pytest.approx(-200.0 / 0.05)
        assert report.to_dict()["pass"] is False

    def test_small_box_has_nothing_to_check(self):
        """Test boxes smaller than the unit ball pass vacuously."""
        grid = Grid(1, 1.0, 0.25)
        envelope = sup_convolution(GridFunction(grid, np.zeros(9)), 0.0, 0.5)
        report = check_semiconvexity(envelope)
        assert report.passed
        assert report.checked_nodes == 0


class TestWriteConvolutionCsv:
    """Tests for write_convolution_csv."""

    def test_columns(self, tmp_path):
        """Test one row per node with value and offset."""
        grid = Grid(1, 1.0, 0.25)
        result = sup_convolution(GridFunction(grid, np.zeros(9)), 0.0, 0.5)
        path = tmp_path / "conv.csv"
        write_convolution_csv(path, result, {"alpha": 0.5})
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("# config: ")
        assert lines[1] == "x,value,offset_x"
        assert len(lines) == 2 + grid.size
