"""src/levyscope/solvers/bellman.py

Howard policy iteration for

    gamma u + max_a ( -G_a u - f_a ) = 0,

G_a the monotone generator of control a (jumps, sigma_a^2 lap / 2, b_a . grad).
Policy evaluation reuses the damped iteration at a tenth of the tolerance.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from levyscope.exceptions import NonConvergenceError
from levyscope.measures import QuadratureSettings
from levyscope.operators.grid import Grid, GridFunction
from levyscope.solvers.problem import ProblemSpec, sample_scalar
from levyscope.solvers.scheme import (
    TERMS,
    Generator,
    MonotoneOperator,
    build_generators,
    scheme_rule,
)
from levyscope.solvers.stationary import damped_iteration
from levyscope.utils.budget import SolverBudget
from levyscope.utils.serialization import write_csv
from levyscope.viscosity.nonlinearity import BELLMAN

__all__ = [
    "TIE_TOL",
    "BellmanResult",
    "control_values",
    "improve_policy",
    "frozen_generator",
    "solve_bellman",
    "write_policy_csv",
]

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12


@dataclass
class BellmanResult:
    """
    Value function, optimal policy and the Howard certificate.

    Attributes:
        value: Value function.
        policy: Control index per node (flat order).
        sweeps: Number of policy evaluations.
        evaluations: Damped sweeps spent in each evaluation.
        residuals: Bellman residual after each evaluation.
        increases: Largest node-wise increase of the value across each
            evaluation after the first improvement.
    """

    value: GridFunction
    policy: np.ndarray
    sweeps: int
    evaluations: List[int] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    increases: List[float] = field(default_factory=list)

    @property
    def monotone_decrease(self) -> bool:
        """Values never increased beyond the evaluation tolerance."""
        tolerance = 10.0 * (self.residuals[-1] if self.residuals else 0.0) + TIE_TOL
        return all(inc <= tolerance for inc in self.increases)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready summary."""
        return {
            "sweeps": self.sweeps,
            "evaluations": self.evaluations,
            "residuals": self.residuals,
            "increases": self.increases,
            "monotone_decrease": self.monotone_decrease,
            "policy_counts": np.bincount(self.policy).tolist(),
        }


def control_values(
    generators: Sequence[Generator], sources: Sequence[np.ndarray], u: np.ndarray
) -> np.ndarray:
    """``(controls, nodes)`` array of -G_a u - f_a."""
    return np.stack([-g.operator.apply(u) - f for g, f in zip(generators, sources)])


def improve_policy(values: np.ndarray) -> np.ndarray:
    """Node-wise argmax; ties within ``TIE_TOL`` go to the smallest index."""
    best = values.max(axis=0)
    close = values >= best - TIE_TOL * (1.0 + np.abs(best))
    return np.argmax(close, axis=0)


def frozen_generator(generators: Sequence[Generator], policy: np.ndarray) -> Generator:
    """Generator whose row i is the row of control ``policy[i]``."""
    size = generators[0].operator.size
    total = sparse.csr_matrix((size, size))
    for a, g in enumerate(generators):
        total = total + sparse.diags((policy == a).astype(float)) @ g.operator.matrix
    coo = total.tocoo()
    rates = {t: max(g.rates.get(t, 0.0) for g in generators) for t in TERMS}
    operator = MonotoneOperator(size, coo.row, coo.col, coo.data)
    return Generator(operator=operator, rates=rates)


def _sources(problem: ProblemSpec, grid: Grid) -> List[np.ndarray]:
    return [sample_scalar(c.source, grid) for c in problem.controls]


def solve_bellman(
    problem: ProblemSpec,
    grid: Grid,
    delta: Optional[float] = None,
    tol: Optional[float] = None,
    *,
    budget: Optional[SolverBudget] = None,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
) -> BellmanResult:
    """
    Howard policy iteration.

    Starts from control 0 everywhere and stops when the improved policy
    equals the evaluated one and the Bellman residual is at most ``tol``.

    Raises:
        NonConvergenceError: After ``budget.max_policies`` evaluations.
    """
    if problem.kind != BELLMAN:
        raise ValueError(f"{problem.kind} is not a Bellman problem")
    budget = budget or SolverBudget()
    tol = budget.tol if tol is None else tol
    rule = scheme_rule(problem.measure, grid, delta, quad_tol, settings)
    generators = build_generators(problem, grid, rule)
    sources = _sources(problem, grid)
    linear = dataclasses.replace(problem, hamiltonian=0.0)

    policy = np.zeros(grid.size, dtype=int)
    u = sources[0] / problem.gamma
    evaluations: List[int] = []
    residuals: List[float] = []
    increases: List[float] = []
    for sweep in range(1, budget.max_policies + 1):
        frozen = frozen_generator(generators, policy)
        forcing = np.choose(policy, sources)
        previous = u
        result = damped_iteration(
            linear, grid, frozen, forcing, u, tol / 10.0, budget.max_iter
        )
        u = result.solution.flat.copy()
        evaluations.append(result.iterations)
        if sweep > 1:
            increases.append(float(np.max(u - previous)))
        values = control_values(generators, sources, u)
        residual = float(np.max(np.abs(problem.gamma * u + values.max(axis=0))))
        residuals.append(residual)
        improved = improve_policy(values)
        logger.debug(
            "howard sweep %d: residual %.3e, %d switches",
            sweep, residual, int(np.sum(improved != policy)),
        )
        if np.array_equal(improved, policy) and residual <= tol:
            logger.info("policy iteration converged after %d sweeps", sweep)
            return BellmanResult(
                value=GridFunction(grid, u.reshape(grid.shape)),
                policy=policy,
                sweeps=sweep,
                evaluations=evaluations,
                residuals=residuals,
                increases=increases,
            )
        policy = improved
    raise NonConvergenceError(
        f"policy iteration did not settle after {budget.max_policies} sweeps", residuals
    )


def write_policy_csv(
    path: Union[str, Path],
    grid: Grid,
    policy: np.ndarray,
    config: Optional[Dict[str, Any]] = None,
) -> None:
    """One row per node: coordinates and control index."""
    header = ["x", "y"][: grid.dim] + ["control"]
    rows: List[Tuple[Any, ...]] = [
        tuple(float(c) for c in node) + (int(a),) for node, a in zip(grid.nodes, policy)
    ]
    write_csv(path, header, rows, config)
