"""tests/unit/test_comparison.py"""

import numpy as np
import pytest

from levyscope.exceptions import InvalidSampleError
from levyscope.operators.grid import Grid, GridFunction
from levyscope.solvers.comparison import (
    ComparisonReport,
    discrete_comparison_test,
    random_ordered_pairs,
)
from levyscope.solvers.problem import ProblemSpec
from levyscope.utils.budget import SolverBudget
from levyscope.viscosity.nonlinearity import (
    BELLMAN,
    PARABOLIC_INTERFACE,
    STATIONARY_SEMILINEAR,
    Control,
)


@pytest.fixture
def grid():
    """Coarse 1D grid on [-1, 1]."""
    return Grid(1, 1.0, 0.1)


class TestComparisonReport:
    """Tests for ComparisonReport."""

    def test_records_violation(self):
        """Test u above v is reported with its node."""
        grid = Grid(1, 1.0, 0.5)
        report = ComparisonReport(STATIONARY_SEMILINEAR)
        report.record(0, 3, grid, np.array([0.0, 0.0, 1.0, 0.0, 0.0]), np.zeros(5))
        assert not report.passed
        assert report.violations == [
            {"pair": 0, "step": 3, "node": 2, "x": [0.0], "excess": 1.0}
        ]
        assert report.min_gap == -1.0
        assert report.to_dict()["pass"] is False

    def test_gap_range(self):
        """Test gaps accumulate over checks."""
        grid = Grid(1, 1.0, 0.5)
        report = ComparisonReport(STATIONARY_SEMILINEAR)
        report.record(0, 0, grid, np.zeros(5), np.full(5, 2.0))
        report.record(0, 1, grid, np.zeros(5), np.full(5, 0.5))
        assert report.passed
        assert (report.min_gap, report.max_gap) == (0.5, 2.0)
        assert report.checks == 2


class TestRandomOrderedPairs:
    """Tests for random_ordered_pairs."""

    def test_ordered_and_reproducible(self, grid):
        """Test every pair is ordered and seeds are honored."""
        pairs = random_ordered_pairs(grid, 3, seed=7)
        again = random_ordered_pairs(grid, 3, seed=7)
        for (low, high), (low2, _) in zip(pairs, again):
            assert np.all(low.flat <= high.flat)
            np.testing.assert_array_equal(low.flat, low2.flat)


class TestDiscreteComparison:
    """Tests for discrete_comparison_test."""

    def test_parabolic_pairs(self, atoms, grid):
        """Test ordered initial data stay ordered at every step."""
        problem = ProblemSpec(PARABOLIC_INTERFACE, atoms, nu=0.1, horizon=0.05)
        pairs = random_ordered_pairs(grid, 2, seed=1)
        report = discrete_comparison_test(problem, pairs)
        assert report.passed
        assert report.pairs == 2
        assert report.checks > 2
        assert report.min_gap >= -1e-12

    def test_stationary_sources(self, atoms, grid):
        """Test a larger source gives a larger solution."""
        problem = ProblemSpec(STATIONARY_SEMILINEAR, atoms, nu=0.1)
        pairs = [
            (0.0, 1.0),
            (lambda x: np.sin(3.0 * x[0]), lambda x: np.sin(3.0 * x[0]) + 0.5),
        ]
        report = discrete_comparison_test(problem, pairs, grid)
        assert report.passed
        assert report.pairs == 2
        assert report.tolerance == pytest.approx(1e-12 + 2e-8)

    def test_bellman_shifts(self, atoms, grid):
        """Test shifted control sources keep the value ordered."""
        controls = [Control(sigma=0.5), Control(drift=1.0, source=0.2)]
        problem = ProblemSpec(BELLMAN, atoms, controls=controls)
        report = discrete_comparison_test(
            problem, [(0.0, 0.5)], grid, budget=SolverBudget(tol=1e-9)
        )
        assert report.passed
        assert report.max_gap == pytest.approx(0.5, abs=1e-6)

    def test_unordered_pairs_rejected(self, atoms, grid):
        """Test unordered pairs raise InvalidSampleError."""
        stationary = ProblemSpec(STATIONARY_SEMILINEAR, atoms)
        with pytest.raises(InvalidSampleError):
            discrete_comparison_test(stationary, [(1.0, 0.0)], grid)
        bellman = ProblemSpec(BELLMAN, atoms, controls=[Control()])
        with pytest.raises(InvalidSampleError):
            discrete_comparison_test(bellman, [(1.0, 0.0)], grid)
        parabolic = ProblemSpec(PARABOLIC_INTERFACE, atoms)
        high = GridFunction(grid, np.zeros(grid.size))
        with pytest.raises(InvalidSampleError):
            discrete_comparison_test(parabolic, [(high + 1.0, high)])

    def test_stationary_needs_grid(self, atoms):
        """Test stationary comparisons without a grid raise ValueError."""
        problem = ProblemSpec(STATIONARY_SEMILINEAR, atoms)
        with pytest.raises(ValueError):
            discrete_comparison_test(problem, [(0.0, 1.0)])
