"""src/levyscope/solvers/__init__.py

Monotone finite-difference / quadrature solvers for the model PIDEs and the
discrete comparison experiment.
"""

from levyscope.solvers.bellman import BellmanResult, solve_bellman, write_policy_csv
from levyscope.solvers.comparison import (
    ComparisonReport,
    discrete_comparison_test,
    random_ordered_pairs,
)
from levyscope.solvers.parabolic import (
    StepCertificate,
    Trajectory,
    solve_parabolic,
    write_trajectory_csv,
)
from levyscope.solvers.problem import KINDS, ProblemSpec, sample_scalar
from levyscope.solvers.scheme import (
    CFLBound,
    Generator,
    MonotoneOperator,
    assemble_generator,
    build_generators,
    cfl_bound,
    godunov_hamiltonian,
    scheme_rule,
)
from levyscope.solvers.stationary import (
    SolveResult,
    solve_stationary,
    stationary_residual,
    write_residuals_csv,
)

__all__ = [
    "BellmanResult",
    "solve_bellman",
    "write_policy_csv",
    "ComparisonReport",
    "discrete_comparison_test",
    "random_ordered_pairs",
    "StepCertificate",
    "Trajectory",
    "solve_parabolic",
    "write_trajectory_csv",
    "KINDS",
    "ProblemSpec",
    "sample_scalar",
    "CFLBound",
    "Generator",
    "MonotoneOperator",
    "assemble_generator",
    "build_generators",
    "cfl_bound",
    "godunov_hamiltonian",
    "scheme_rule",
    "SolveResult",
    "solve_stationary",
    "stationary_residual",
    "write_residuals_csv",
]
