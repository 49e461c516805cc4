"""src/levyscope/solvers/problem.py

Problem descriptions shared by the monotone solvers.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from levyscope.measures import LevyMeasure
from levyscope.operators.grid import Grid, GridFunction
from levyscope.operators.jump_maps import IdentityJump, JumpMap
from levyscope.viscosity.nonlinearity import (
    BELLMAN,
    PARABOLIC_INTERFACE,
    STATIONARY_SEMILINEAR,
    Control,
    Scalar,
    as_field,
)

__all__ = ["KINDS", "ProblemSpec", "sample_scalar"]

KINDS = (PARABOLIC_INTERFACE, STATIONARY_SEMILINEAR, BELLMAN)


@dataclass
class ProblemSpec:
    """
    One model equation on R^d.

    - ``parabolic_interface``: u_t + c |grad u|^2 - nu lap u - I[u] = f
    - ``stationary_semilinear``: gamma u + c |grad u|^2 - nu lap u - I[u] = f
    - ``bellman``: gamma u + max_a ( -I_a[u] - sigma_a^2 lap u / 2
      - b_a . grad u - f_a ) = 0

    Attributes:
        kind: One of ``KINDS``.
        measure: Levy measure.
        nu: Viscosity coefficient.
        gamma: Zeroth-order coefficient (lambda for Bellman problems).
        source: Source f (constant, callable or grid function).
        horizon: Final time of parabolic runs.
        jmap: Jump map of the nonlocal term.
        controls: Bellman controls.
        jmaps: Per-control jump maps; ``jmap`` for every control when empty.
        hamiltonian: Coefficient c of c |p|^2 (0.5 by default, 0 disables it).
        slope_bound: Expected sup of |grad u| used by the CFL bound.
    """

    kind: str
    measure: LevyMeasure
    nu: float = 0.0
    gamma: float = 1.0
    source: Scalar = 0.0
    horizon: float = 1.0
    jmap: JumpMap = field(default_factory=IdentityJump)
    controls: List[Control] = field(default_factory=list)
    jmaps: List[JumpMap] = field(default_factory=list)
    hamiltonian: float = 0.5
    slope_bound: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown problem kind {self.kind!r}; choose from {KINDS}")
        if self.nu < 0:
            raise ValueError(f"nu must be nonnegative, got {self.nu}")
        if self.hamiltonian < 0:
            raise ValueError(
                f"hamiltonian coefficient must be nonnegative, got {self.hamiltonian}"
            )
        if self.kind != PARABOLIC_INTERFACE and self.gamma <= 0:
            raise ValueError(
                f"gamma must be positive for {self.kind}, got {self.gamma}"
            )
        if self.kind == PARABOLIC_INTERFACE and self.horizon <= 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if self.kind == BELLMAN:
            if not self.controls:
                raise ValueError("bellman problems need at least one control")
            if self.jmaps and len(self.jmaps) != len(self.controls):
                raise ValueError("jmaps must list one jump map per control")

    @property
    def stationary(self) -> bool:
        """Whether the problem has no time derivative."""
        return self.kind != PARABOLIC_INTERFACE

    def control_jmap(self, index: int) -> JumpMap:
        """Jump map of one control."""
        return self.jmaps[index] if self.jmaps else self.jmap

    def source_on(self, grid: Grid, source: Optional[Scalar] = None) -> np.ndarray:
        """Flat node values of a source (``self.source`` by default)."""
        return sample_scalar(self.source if source is None else source, grid)

    def describe(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {
            "kind": self.kind,
            "nu": self.nu,
            "gamma": self.gamma,
            "horizon": self.horizon,
            "hamiltonian": self.hamiltonian,
            "jmap": self.jmap.describe(),
            "controls": [c.describe() for c in self.controls],
        }


def sample_scalar(value: Scalar, grid: Grid) -> np.ndarray:
    """Flat node values of a constant, callable or grid function."""
    if isinstance(value, (int, float)):
        return np.full(grid.size, float(value))
    if isinstance(value, GridFunction):
        if not value.grid.same_as(grid):
            raise ValueError("source grid differs from the solver grid")
        return value.flat.copy()
    f = as_field(value)
    return np.array([f(x) for x in grid.nodes])

