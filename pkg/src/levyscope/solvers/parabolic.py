"""src/levyscope/solvers/parabolic.py

Explicit monotone time stepping for the growing-interface equation

    u_t + c |grad u|^2 - nu lap u - I[u] = f.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from levyscope.exceptions import CFLViolationError
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
from levyscope.utils.serialization import write_csv

__all__ = [
    "MONOTONE_TOL",
    "StepCertificate",
    "Trajectory",
    "solve_parabolic",
    "write_trajectory_csv",
]

logger = logging.getLogger(__name__)

MONOTONE_TOL = 1e-12

Observer = Callable[[int, float, np.ndarray], None]


@dataclass
class StepCertificate:
    """
    Monotonicity record of one explicit step.

    Attributes:
        step: Step number (1-based).
        time: Time reached.
        dt: Step length.
        max_slope: Largest one-sided slope before the step.
        weight: Smallest coefficient of u_i in the update of node i.
    """

    step: int
    time: float
    dt: float
    max_slope: float
    weight: float

    @property
    def monotone(self) -> bool:
        """The update is a convex combination of neighbor values."""
        return self.weight >= -MONOTONE_TOL


@dataclass
class Trajectory:
    """
    Snapshots of a parabolic run.

    Attributes:
        times: Snapshot times.
        snapshots: Grid functions at ``times``.
        steps: Per-step monotonicity certificates.
        cfl: Bound the step was checked against.
        dt: Nominal step length.
        operator: Certificate of the assembled generator.
    """

    times: List[float]
    snapshots: List[GridFunction]
    steps: List[StepCertificate] = field(default_factory=list)
    cfl: CFLBound = field(default_factory=CFLBound)
    dt: float = 0.0
    operator: Dict[str, Any] = field(default_factory=dict)

    @property
    def monotone(self) -> bool:
        """Every step kept the scheme monotone."""
        return all(s.monotone for s in self.steps)

    @property
    def final(self) -> GridFunction:
        """Last snapshot."""
        return self.snapshots[-1]

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready summary (values go to CSV)."""
        return {
            "times": self.times,
            "dt": self.dt,
            "steps": len(self.steps),
            "monotone": self.monotone,
            "min_weight": min((s.weight for s in self.steps), default=1.0),
            "cfl": self.cfl.to_dict(),
            "operator": self.operator,
        }


def _rhs(
    problem: ProblemSpec,
    grid: Grid,
    generator: Generator,
    u: np.ndarray,
    source: np.ndarray,
) -> np.ndarray:
    hamiltonian = godunov_hamiltonian(grid, u, problem.hamiltonian)
    return generator.operator.apply(u) - hamiltonian + source


def solve_parabolic(
    problem: ProblemSpec,
    u0: GridFunction,
    grid: Optional[Grid] = None,
    delta: Optional[float] = None,
    *,
    times: Optional[Sequence[float]] = None,
    dt: Optional[float] = None,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
    generator: Optional[Generator] = None,
    observer: Optional[Observer] = None,
) -> Trajectory:
    """
    Run the explicit scheme from ``u0`` up to the last requested time.

    Args:
        problem: A ``parabolic_interface`` problem.
        u0: Initial datum.
        grid: Solver grid (the grid of ``u0`` by default).
        delta: Split radius (2h by default).
        times: Snapshot times in (0, horizon]; ``[horizon]`` by default.
        dt: Step length; 0.9 times the CFL bound by default.
        generator: Prebuilt generator, reused across runs.
        observer: Called as ``observer(step, t, values)`` after every step.

    Raises:
        CFLViolationError: If ``dt`` exceeds the CFL bound.
        ValueError: On a stationary problem or invalid snapshot times.
    """
    if problem.stationary:
        raise ValueError(f"{problem.kind} is not a parabolic problem")
    grid = grid or u0.grid
    if not grid.same_as(u0.grid):
        raise ValueError("u0 lives on another grid")
    targets = sorted(float(t) for t in (times or [problem.horizon]))
    if targets[0] <= 0 or targets[-1] > problem.horizon * (1.0 + 1e-12):
        raise ValueError("snapshot times must lie in (0, horizon]")

    if generator is None:
        rule = scheme_rule(problem.measure, grid, delta, quad_tol, settings)
        generator = build_generators(problem, grid, rule)[0]
    slope = max(problem.slope_bound, max_slope(grid, u0.flat))
    bound = cfl_bound(problem, grid, generators=[generator], slope_bound=slope)
    limit = bound.value
    step_length = 0.9 * limit if dt is None else float(dt)
    if step_length == float("inf"):
        step_length = targets[-1]
    if step_length <= 0:
        raise ValueError(f"dt must be positive, got {step_length}")
    if step_length > limit * (1.0 + 1e-12):
        raise CFLViolationError(
            f"dt={step_length:.6g} exceeds the CFL bound {limit:.6g}"
        )

    source = problem.source_on(grid)
    rate = generator.operator.max_rate
    u = u0.flat.copy()
    t, n = 0.0, 0
    snapshots: List[GridFunction] = []
    steps: List[StepCertificate] = []
    logger.info(
        "parabolic run: dt=%.4g, %d targets up to t=%g",
        step_length,
        len(targets),
        targets[-1],
    )
    for target in targets:
        while t < target * (1.0 - 1e-14):
            step = min(step_length, target - t)
            current = max_slope(grid, u)
            transport = grid.dim * 2.0 * problem.hamiltonian * current / grid.h
            weight = 1.0 - step * (rate + transport)
            u = u + step * _rhs(problem, grid, generator, u, source)
            n += 1
            landed = abs(target - t - step) <= 1e-12 * max(1.0, target)
            t = target if landed else t + step
            steps.append(StepCertificate(n, t, step, current, weight))
            if weight < -MONOTONE_TOL:
                logger.warning("step %d lost monotonicity (weight %.3e)", n, weight)
            if observer is not None:
                observer(n, t, u)
        snapshots.append(u0.with_values(u.reshape(grid.shape).copy()))
    return Trajectory(
        times=targets,
        snapshots=snapshots,
        steps=steps,
        cfl=bound,
        dt=step_length,
        operator=generator.operator.certificate(),
    )


def write_trajectory_csv(
    path: Union[str, Path],
    trajectory: Trajectory,
    config: Optional[Dict[str, Any]] = None,
) -> None:
    """One row per (time, node): t, coordinates, value."""
    grid = trajectory.final.grid
    header = ["t"] + ["x", "y"][: grid.dim] + ["value"]
    rows = []
    for t, snapshot in zip(trajectory.times, trajectory.snapshots):
        for node, value in zip(grid.nodes, snapshot.flat):
            rows.append([t] + [float(c) for c in node] + [float(value)])
    write_csv(path, header, rows, config)
