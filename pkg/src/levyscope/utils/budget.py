"""src/levyscope/utils/budget.py

Iteration budget configuration.
"""

from dataclasses import dataclass
from typing import Optional

__all__ = ["SolverBudget"]


@dataclass
class SolverBudget:
    """
    Iteration budget configuration.

    Attributes:
        tol: Sup-norm residual at which an iteration stops.
        max_iter: Maximum number of sweeps before giving up.
        max_policies: Maximum number of policy improvements (Howard).
    """

    tol: float = 1e-8
    max_iter: int = 200_000
    max_policies: int = 50

    @classmethod
    def from_float(cls, tol: Optional[float]) -> "SolverBudget":
        """Create a SolverBudget from a single tolerance (defaults otherwise)."""
        if tol is None:
            return cls()
        return cls(tol=tol)
