"""src/levyscope/solvers/stationary.py

Damped fixed-point solver for the stationary model

    gamma u + c |grad u|^2 - nu lap u - I[u] = f.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from levyscope.exceptions import NonConvergenceError
from levyscope.measures import QuadratureSettings
from levyscope.operators.grid import Grid, GridFunction
from levyscope.solvers.problem import ProblemSpec
from levyscope.solvers.scheme import (
    CFLBound,
    Generator,
    build_generators,
    cfl_bound,
    godunov_hamiltonian,
    max_slope,
    scheme_rule,
)
from levyscope.utils.budget import SolverBudget
from levyscope.utils.serialization import write_csv
from levyscope.viscosity.nonlinearity import Scalar

__all__ = [
    "DAMPING",
    "SolveResult",
    "stationary_residual",
    "damped_iteration",
    "solve_stationary",
    "write_residuals_csv",
]

logger = logging.getLogger(__name__)

DAMPING = 0.9


@dataclass
class SolveResult:
    """
    Solution of a stationary problem with its residual certificate.

    Attributes:
        solution: Converged grid function.
        residuals: Sup-norm residual after every sweep.
        iterations: Number of sweeps.
        rho: Damping used by the last sweep.
        cfl: Monotonicity bound the damping was derived from.
        operator: Certificate of the assembled generator.
    """

    solution: GridFunction
    residuals: List[float] = field(default_factory=list)
    iterations: int = 0
    rho: float = 0.0
    cfl: CFLBound = field(default_factory=CFLBound)
    operator: Dict[str, Any] = field(default_factory=dict)

    @property
    def residual(self) -> float:
        """Final sup-norm residual."""
        return self.residuals[-1] if self.residuals else 0.0

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready summary (values go to CSV)."""
        return {
            "iterations": self.iterations,
            "residual": self.residual,
            "rho": self.rho,
            "cfl": self.cfl.to_dict(),
            "operator": self.operator,
        }


def stationary_residual(
    problem: ProblemSpec,
    grid: Grid,
    operator_apply: Any,
    u: np.ndarray,
    source: np.ndarray,
    gamma: float,
) -> np.ndarray:
    """F_h[u] = gamma u + H(Du) - G u - f at every node."""
    return (
        gamma * u
        + godunov_hamiltonian(grid, u, problem.hamiltonian)
        - operator_apply(u)
        - source
    )


def damped_iteration(
    problem: ProblemSpec,
    grid: Grid,
    generator: Generator,
    source: np.ndarray,
    initial: np.ndarray,
    tol: float,
    max_iter: int,
    *,
    gamma: Optional[float] = None,
) -> SolveResult:
    """
    Iterate u <- u - rho F_h[u] until the residual drops below ``tol``.

    rho is 0.9 times the CFL bound at the current slope range; it shrinks
    when the iterate steepens beyond that range.

    Raises:
        NonConvergenceError: When ``max_iter`` sweeps do not reach ``tol``.
    """
    gamma = problem.gamma if gamma is None else gamma
    u = initial.astype(float).copy()
    slope = max(problem.slope_bound, max_slope(grid, u))
    bound = cfl_bound(problem, grid, generators=[generator], slope_bound=slope)
    rho = DAMPING * bound.value
    apply = generator.operator.apply
    residuals: List[float] = []
    for sweep in range(1, max_iter + 1):
        residual = stationary_residual(problem, grid, apply, u, source, gamma)
        norm = float(np.max(np.abs(residual)))
        residuals.append(norm)
        if norm <= tol:
            return SolveResult(
                solution=GridFunction(grid, u.reshape(grid.shape)),
                residuals=residuals,
                iterations=sweep - 1,
                rho=rho,
                cfl=bound,
                operator=generator.operator.certificate(),
            )
        u = u - rho * residual
        current = max_slope(grid, u)
        if current > slope:
            slope = 2.0 * current
            bound = cfl_bound(problem, grid, generators=[generator], slope_bound=slope)
            rho = DAMPING * bound.value
            logger.debug("slope range raised to %.4g, rho=%.4g", slope, rho)
    raise NonConvergenceError(
        f"residual {residuals[-1]:.3e} above tol {tol:.3e} after {max_iter} sweeps",
        residuals,
    )


def solve_stationary(
    problem: ProblemSpec,
    grid: Grid,
    delta: Optional[float] = None,
    tol: Optional[float] = None,
    *,
    source: Optional[Scalar] = None,
    initial: Optional[GridFunction] = None,
    budget: Optional[SolverBudget] = None,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
    generator: Optional[Generator] = None,
) -> SolveResult:
    """
    Solve a ``stationary_semilinear`` problem.

    A problem with no coupling (no diffusion, no jumps, no Hamiltonian) is
    diagonal and is solved in one step as u = f / gamma.

    Args:
        problem: The problem.
        grid: Solver grid.
        delta: Split radius (2h by default).
        tol: Residual tolerance (``budget.tol`` by default).
        source: Replaces ``problem.source``.
        initial: Starting iterate (f / gamma by default).
        budget: Iteration budget.
        generator: Prebuilt generator, reused across runs.

    Raises:
        NonConvergenceError: If the budget runs out (carries the residuals).
    """
    if not problem.stationary:
        raise ValueError(f"{problem.kind} is not a stationary problem")
    budget = budget or SolverBudget()
    tol = budget.tol if tol is None else tol
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if generator is None:
        rule = scheme_rule(problem.measure, grid, delta, quad_tol, settings)
        generator = build_generators(problem, grid, rule)[0]
    f = problem.source_on(grid, source)

    if generator.operator.is_empty and problem.hamiltonian == 0.0:
        u = f / problem.gamma
        logger.info("diagonal problem solved directly")
        return SolveResult(
            solution=GridFunction(grid, u.reshape(grid.shape)),
            residuals=[0.0],
            iterations=1,
            rho=1.0 / problem.gamma,
            cfl=cfl_bound(problem, grid, generators=[generator]),
            operator=generator.operator.certificate(),
        )

    start = f / problem.gamma if initial is None else initial.flat
    result = damped_iteration(problem, grid, generator, f, start, tol, budget.max_iter)
    logger.info(
        "stationary solve: %d sweeps, residual %.3e", result.iterations, result.residual
    )
    return result


def write_residuals_csv(
    path: Union[str, Path],
    residuals: List[float],
    config: Optional[Dict[str, Any]] = None,
) -> None:
    """One row per sweep: iteration, sup-norm residual."""
    rows = [[k, r] for k, r in enumerate(residuals)]
    write_csv(path, ["iteration", "residual"], rows, config)
