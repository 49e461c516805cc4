"""src/levyscope/__init__.py

Levyscope - singular Levy operators, viscosity audits and monotone PIDE solvers.

Levyscope evaluates nonlocal operators of Levy type split at a radius delta
into a singular inner part (acting on a smooth probe) and a bounded outer
part (acting on the candidate itself). On top of that it regularizes
nonsmooth grid functions, audits viscosity sub/supersolution inequalities
at probe contacts and solves the model equations with monotone schemes.

Key Features:
    - Stable, tempered and atomic Levy measures with split quadrature rules
    - Levy, Levy-Ito, compensated (K) and weighted (B) operators
    - Sup/inf-convolutions and half-relaxed limits
    - Sub/supersolution audits with witnesses and structural assumption checks
    - Monotone parabolic, stationary and Bellman (Howard) solvers
    - Deterministic JSON/CSV artifacts with embedded configuration

Example:
    Split evaluation::

        from levyscope import Cosine, LevyMeasure, build_quadrature
        from levyscope import eval_levy_with_bound

        measure = LevyMeasure.stable(1.5)
        rule = build_quadrature(measure, 0.5, 1e-6)
        split = eval_levy_with_bound(measure, Cosine(1.0), 0.0, rule)
        print(split.inner, split.outer, split.error_bound)

    Stationary solve::

        from levyscope import Grid, ProblemSpec, solve_stationary

        problem = ProblemSpec("stationary_semilinear", measure, nu=0.1, source=1.0)
        result = solve_stationary(problem, Grid(1, 4.0, 0.05))
        print(result.residual)
"""

from levyscope.exceptions import LevyscopeError
from levyscope.measures import LevyMeasure, QuadratureSettings, build_quadrature
from levyscope.nonsmooth import inf_convolution, relaxed_limit, sup_convolution
from levyscope.operators import (
    Cosine,
    Gaussian,
    Grid,
    GridFunction,
    eval_B,
    eval_K,
    eval_levy,
    eval_levy_ito,
    eval_levy_with_bound,
    make_jump_map,
    make_probe,
)
from levyscope.outcomes import Divergent
from levyscope.solvers import (
    ProblemSpec,
    discrete_comparison_test,
    solve_bellman,
    solve_parabolic,
    solve_stationary,
)
from levyscope.utils.budget import SolverBudget
from levyscope.version import __version__
from levyscope.viscosity import (
    stationary_semilinear,
    verify_subsolution,
    verify_supersolution,
)

__all__ = [
    "LevyscopeError",
    "LevyMeasure",
    "QuadratureSettings",
    "build_quadrature",
    "inf_convolution",
    "relaxed_limit",
    "sup_convolution",
    "Cosine",
    "Gaussian",
    "Grid",
    "GridFunction",
    "eval_B",
    "eval_K",
    "eval_levy",
    "eval_levy_ito",
    "eval_levy_with_bound",
    "make_jump_map",
    "make_probe",
    "Divergent",
    "ProblemSpec",
    "discrete_comparison_test",
    "solve_bellman",
    "solve_parabolic",
    "solve_stationary",
    "SolverBudget",
    "stationary_semilinear",
    "verify_subsolution",
    "verify_supersolution",
    "__version__",
]
