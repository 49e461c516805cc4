"""src/levyscope/solvers/comparison.py

Discrete comparison experiments: ordered data must give ordered solutions.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from levyscope.exceptions import InvalidSampleError
from levyscope.measures import QuadratureSettings
from levyscope.operators.grid import Grid, GridFunction
from levyscope.solvers.bellman import solve_bellman
from levyscope.solvers.parabolic import solve_parabolic
from levyscope.solvers.problem import ProblemSpec, sample_scalar
from levyscope.solvers.scheme import (
    Generator,
    build_generators,
    cfl_bound,
    max_slope,
    scheme_rule,
)
from levyscope.solvers.stationary import solve_stationary
from levyscope.utils.budget import SolverBudget
from levyscope.viscosity.nonlinearity import BELLMAN, Scalar

__all__ = [
    "VIOLATION_TOL",
    "ComparisonReport",
    "random_ordered_pairs",
    "discrete_comparison_test",
]

logger = logging.getLogger(__name__)

VIOLATION_TOL = 1e-12


@dataclass
class ComparisonReport:
    """
    Outcome of a comparison experiment.

    Attributes:
        kind: Problem kind.
        pairs: Number of ordered pairs run.
        checks: Number of (pair, step) comparisons.
        tolerance: Allowed excess of u over v.
        violations: Witnesses {pair, step, node, x, excess}.
        max_gap: Largest v - u observed.
        min_gap: Smallest v - u observed.
    """

    kind: str
    pairs: int = 0
    checks: int = 0
    tolerance: float = VIOLATION_TOL
    violations: List[Dict[str, Any]] = field(default_factory=list)
    max_gap: float = 0.0
    min_gap: float = 0.0

    @property
    def passed(self) -> bool:
        """No ordering violation."""
        return not self.violations

    def record(
        self, pair: int, step: int, grid: Grid, u: np.ndarray, v: np.ndarray
    ) -> None:
        """Compare one pair of node arrays."""
        gap = v - u
        self.checks += 1
        if self.checks == 1:
            self.max_gap, self.min_gap = float(gap.max()), float(gap.min())
        else:
            self.max_gap = max(self.max_gap, float(gap.max()))
            self.min_gap = min(self.min_gap, float(gap.min()))
        node = int(np.argmin(gap))
        if -gap[node] > self.tolerance:
            self.violations.append(
                {
                    "pair": pair,
                    "step": step,
                    "node": node,
                    "x": grid.nodes[node].tolist(),
                    "excess": float(-gap[node]),
                }
            )

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {
            "kind": self.kind,
            "pass": self.passed,
            "pairs": self.pairs,
            "checks": self.checks,
            "tolerance": self.tolerance,
            "violations": self.violations,
            "max_gap": self.max_gap,
            "min_gap": self.min_gap,
        }


def random_ordered_pairs(
    grid: Grid, count: int, seed: int, *, amplitude: float = 1.0
) -> List[Tuple[GridFunction, GridFunction]]:
    """Random node-wise ordered pairs (u0, u0 + nonnegative noise)."""
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(count):
        low = rng.uniform(-amplitude, amplitude, grid.shape)
        high = low + rng.uniform(0.0, amplitude, grid.shape)
        pairs.append((GridFunction(grid, low), GridFunction(grid, high)))
    return pairs


def _parabolic_pair(
    problem: ProblemSpec,
    index: int,
    low: GridFunction,
    high: GridFunction,
    grid: Grid,
    dt: float,
    generator: Generator,
    report: ComparisonReport,
) -> None:
    history: Dict[int, np.ndarray] = {}

    def keep(step: int, _t: float, values: np.ndarray) -> None:
        history[step] = values.copy()

    def check(step: int, _t: float, values: np.ndarray) -> None:
        report.record(index, step, grid, history[step], values)

    report.record(index, 0, grid, low.flat, high.flat)
    solve_parabolic(problem, low, grid, dt=dt, generator=generator, observer=keep)
    solve_parabolic(problem, high, grid, dt=dt, generator=generator, observer=check)
    report.pairs += 1


def _parabolic(
    problem: ProblemSpec,
    pairs: Sequence[Tuple[GridFunction, GridFunction]],
    grid: Grid,
    delta: Optional[float],
    quad_tol: float,
    settings: Optional[QuadratureSettings],
) -> ComparisonReport:
    rule = scheme_rule(problem.measure, grid, delta, quad_tol, settings)
    generator = build_generators(problem, grid, rule)[0]
    slopes = [max_slope(grid, f.flat) for pair in pairs for f in pair]
    slope = max([problem.slope_bound] + slopes)
    bound = cfl_bound(problem, grid, generators=[generator], slope_bound=slope)
    dt = 0.9 * bound.value
    if dt == float("inf"):
        dt = problem.horizon
    report = ComparisonReport(problem.kind)
    for k, (low, high) in enumerate(pairs):
        _parabolic_pair(problem, k, low, high, grid, dt, generator, report)
    return report


def _stationary(
    problem: ProblemSpec,
    pairs: Sequence[Tuple[Scalar, Scalar]],
    grid: Grid,
    delta: Optional[float],
    quad_tol: float,
    settings: Optional[QuadratureSettings],
    budget: SolverBudget,
) -> ComparisonReport:
    tolerance = VIOLATION_TOL + 2.0 * budget.tol / problem.gamma
    report = ComparisonReport(problem.kind, tolerance=tolerance)
    rule = scheme_rule(problem.measure, grid, delta, quad_tol, settings)
    generator = build_generators(problem, grid, rule)[0]
    for k, (low, high) in enumerate(pairs):
        u = solve_stationary(
            problem, grid, source=low, budget=budget, generator=generator
        )
        v = solve_stationary(
            problem, grid, source=high, budget=budget, generator=generator
        )
        report.record(k, 0, grid, u.solution.flat, v.solution.flat)
        report.pairs += 1
    return report


def _bellman(
    problem: ProblemSpec,
    pairs: Sequence[Tuple[float, float]],
    grid: Grid,
    delta: Optional[float],
    quad_tol: float,
    settings: Optional[QuadratureSettings],
    budget: SolverBudget,
) -> ComparisonReport:
    # pairs shift every control source by (low, high)
    tolerance = VIOLATION_TOL + 2.0 * budget.tol / problem.gamma
    report = ComparisonReport(problem.kind, tolerance=tolerance)
    for k, (low, high) in enumerate(pairs):
        results = []
        for shift in (low, high):
            controls = [
                dataclasses.replace(
                    c, source=GridFunction(grid, sample_scalar(c.source, grid) + shift)
                )
                for c in problem.controls
            ]
            shifted = dataclasses.replace(problem, controls=controls)
            results.append(
                solve_bellman(
                    shifted,
                    grid,
                    delta,
                    budget=budget,
                    quad_tol=quad_tol,
                    settings=settings,
                )
            )
        report.record(k, 0, grid, results[0].value.flat, results[1].value.flat)
        report.pairs += 1
    return report


def discrete_comparison_test(
    problem: ProblemSpec,
    pairs: Sequence[Tuple[Any, Any]],
    grid: Optional[Grid] = None,
    delta: Optional[float] = None,
    *,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
    budget: Optional[SolverBudget] = None,
) -> ComparisonReport:
    """
    Run the solver on ordered data and check the ordering of the solutions.

    Parabolic pairs are initial data (u0, v0) with u0 <= v0, compared at
    every step. Stationary pairs are sources (f_low, f_high) with
    f_low <= f_high and the solutions must satisfy u(f_low) <= u(f_high).
    Bellman pairs are constant shifts of every control source, ordered the
    same way.

    Raises:
        InvalidSampleError: If a pair is not ordered.
    """
    budget = budget or SolverBudget()
    if problem.kind == BELLMAN:
        for k, (low, high) in enumerate(pairs):
            if float(low) > float(high):
                raise InvalidSampleError(f"pair {k}: shifts are not ordered")
        report = _bellman(
            problem, pairs, _need(grid), delta, quad_tol, settings, budget
        )
    elif problem.stationary:
        target = _need(grid)
        for k, (low, high) in enumerate(pairs):
            if np.any(sample_scalar(low, target) > sample_scalar(high, target)):
                raise InvalidSampleError(f"pair {k}: sources are not ordered")
        report = _stationary(problem, pairs, target, delta, quad_tol, settings, budget)
    else:
        for k, (low, high) in enumerate(pairs):
            if np.any(low.flat > high.flat):
                raise InvalidSampleError(f"pair {k}: initial data are not ordered")
        target = grid or pairs[0][0].grid
        report = _parabolic(problem, pairs, target, delta, quad_tol, settings)
    if report.violations:
        logger.warning("comparison violated %d times", len(report.violations))
    return report


def _need(grid: Optional[Grid]) -> Grid:
    if grid is None:
        raise ValueError("stationary comparisons need a grid")
    return grid
