"""src/levyscope/viscosity/doubling.py

Closed-form surrogates of the doubling-of-variables argument.

``doubled_variable_surrogate`` places a concave quadratic u and a convex
quadratic v against the penalty |x - y|^2 / (2 eps), locates the maximum
of u(x) - v(y) - |x - y|^2 / (2 eps) exactly, and checks

- the nonlocal one-sided bound: outer pieces of u and v at the maximum
  differ by at most the quadrature error, and the inner pieces by at most
  the second moment of the ball over eps;
- the matrix sandwich -(1/alpha) I <= diag(X, -Y) <= A (I - alpha A)^{-1}
  where A is the Hessian of the penalty.

``localizer_properties`` checks the three properties of the localization
family psi_beta(x) = psi(beta x) used to make suprema attained.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from levyscope.measures import (
    LevyMeasure,
    QuadratureSettings,
    build_quadrature,
    small_ball_moment,
)
from levyscope.operators.jump_maps import IdentityJump
from levyscope.operators.nonlocal_ops import eval_levy, eval_levy_ito
from levyscope.operators.probes import Localizer, QuadraticClamped
from levyscope.outcomes import is_divergent
from levyscope.utils.validators import check_in_open_interval

__all__ = [
    "DoubledVariableReport",
    "LocalizerReport",
    "penalty_hessian",
    "doubled_variable_surrogate",
    "localizer_properties",
]

logger = logging.getLogger(__name__)

MATRIX_TOL = 1e-10


def penalty_hessian(eps: float, dim: int) -> np.ndarray:
    """Hessian (1/eps) [[I, -I], [-I, I]] of |x - y|^2 / (2 eps)."""
    eye = np.eye(dim)
    return np.block([[eye, -eye], [-eye, eye]]) / eps


@dataclass
class DoubledVariableReport:
    """
    Outcome of the doubled-variable surrogate.

    Attributes:
        x_max: First half of the maximum point.
        y_max: Second half of the maximum point.
        p: Common slope (x - y) / eps.
        outer_gap: outer(u, x) - outer(v, y).
        inner_gap: inner(phi, x) - inner(-phi, y).
        inner_allowance: Second moment of the ball over eps.
        error_bound: Quadrature bound of both evaluations.
        lower_eigenvalue: Smallest eigenvalue of diag(X, -Y) + I / alpha.
        upper_eigenvalue: Smallest eigenvalue of A_alpha - diag(X, -Y).
        passed: All four checks hold.
    """

    x_max: List[float]
    y_max: List[float]
    p: List[float]
    outer_gap: float
    inner_gap: float
    inner_allowance: float
    error_bound: float
    lower_eigenvalue: float
    upper_eigenvalue: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {**self.__dict__, "pass": self.passed}


def _maximum(
    a: float, b: float, eps: float, cu: np.ndarray, cv: np.ndarray
) -> np.ndarray:
    system = np.array([[a + 1.0 / eps, -1.0 / eps], [-1.0 / eps, b + 1.0 / eps]])
    rhs = np.vstack([a * cu, b * cv])
    return np.linalg.solve(system, rhs)


def doubled_variable_surrogate(
    measure: LevyMeasure,
    *,
    eps: float = 0.1,
    alpha: Optional[float] = None,
    a: float = 1.0,
    b: float = 1.0,
    u_center: Sequence[float] = (0.3,),
    v_center: Sequence[float] = (-0.2,),
    height: float = 0.5,
    delta: float = 0.1,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
) -> DoubledVariableReport:
    """
    Check the doubled-variable inequalities on an exact quadratic pair.

    u(x) = height - a |x - u_center|^2 / 2 and v(y) = b |y - v_center|^2 / 2,
    both clamped far away.

    Raises:
        ValueError: If curvatures are not positive or alpha >= eps / 2.
    """
    if a <= 0 or b <= 0 or eps <= 0:
        raise ValueError("curvatures and eps must be positive")
    if alpha is None:
        alpha = eps / 4.0
    alpha = check_in_open_interval("alpha", alpha, 0.0, eps / 2.0)
    cu = np.atleast_1d(np.asarray(u_center, dtype=float))
    cv = np.atleast_1d(np.asarray(v_center, dtype=float))
    if cu.shape != cv.shape:
        raise ValueError("u_center and v_center must share a dimension")
    dim = cu.size

    x_max, y_max = _maximum(a, b, eps, cu, cv)
    gap = x_max - y_max
    slope = gap / eps
    u_top = height - 0.5 * a * float((x_max - cu) @ (x_max - cu))
    v_top = 0.5 * b * float((y_max - cv) @ (y_max - cv))
    reserve = 4.0 * (abs(height) + abs(u_top - v_top) + 1.0)
    u_cap = max(reserve, a * (np.linalg.norm(x_max - cu) + delta) ** 2)
    u = QuadraticClamped(cu, height, -a, u_cap, dim=dim)
    v = QuadraticClamped(
        cv, 0.0, b, max(reserve, b * (np.linalg.norm(y_max - cv) + delta) ** 2), dim=dim
    )
    reach = (float(np.linalg.norm(gap)) + delta) ** 2 / eps + 1.0
    phi_x = QuadraticClamped(y_max, 0.0, 1.0 / eps, 2.0 * reach, dim=dim)
    phi_y = QuadraticClamped(x_max, 0.0, -1.0 / eps, 2.0 * reach, dim=dim)

    rule = build_quadrature(measure, delta, quad_tol, settings)
    identity = IdentityJump()
    at_x = eval_levy_ito(measure, identity, phi_x, x_max, slope, delta, rule, u=u)
    at_y = eval_levy_ito(measure, identity, phi_y, y_max, slope, delta, rule, u=v)
    outer_gap = float(at_x.outer) - float(at_y.outer)
    inner_gap = at_x.inner - at_y.inner
    moment = small_ball_moment(measure, 2.0, delta)
    allowance = math.inf if is_divergent(moment) else float(moment) / eps
    error = at_x.error_bound + at_y.error_bound

    A = penalty_hessian(eps, dim)
    A_alpha = A @ np.linalg.inv(np.eye(2 * dim) - alpha * A)
    blocks = np.zeros((2 * dim, 2 * dim))
    blocks[:dim, :dim] = u.hessian(x_max)
    blocks[dim:, dim:] = -v.hessian(y_max)
    lower = float(np.min(np.linalg.eigvalsh(blocks + np.eye(2 * dim) / alpha)))
    upper = float(np.min(np.linalg.eigvalsh(A_alpha - blocks)))

    passed = (
        outer_gap <= error + quad_tol
        and inner_gap <= allowance + error + quad_tol
        and lower >= -MATRIX_TOL
        and upper >= -MATRIX_TOL
    )
    logger.info(
        "doubled-variable surrogate eps=%g alpha=%g: outer gap %.3e, inner gap %.3e",
        eps, alpha, outer_gap, inner_gap,
    )
    return DoubledVariableReport(
        x_max=x_max.tolist(),
        y_max=y_max.tolist(),
        p=slope.tolist(),
        outer_gap=outer_gap,
        inner_gap=inner_gap,
        inner_allowance=allowance,
        error_bound=error,
        lower_eigenvalue=lower,
        upper_eigenvalue=upper,
        passed=bool(passed),
    )


@dataclass
class LocalizerReport:
    """
    Properties of psi_beta over a list of beta.

    Attributes:
        level: Threshold R that psi_beta must exceed beyond 2 / beta.
        entries: Per-beta sup norms of the gradient, Hessian and nonlocal term.
        threshold: Whether psi_beta > R beyond 2 / beta for every beta.
        derivatives_decay: Whether gradient and Hessian sups decrease with beta.
        nonlocal_decay: Whether the nonlocal sup decreases with beta.
    """

    level: float
    entries: List[Dict[str, float]] = field(default_factory=list)
    threshold: bool = True
    derivatives_decay: bool = True
    nonlocal_decay: bool = True

    @property
    def passed(self) -> bool:
        """All three properties hold."""
        return self.threshold and self.derivatives_decay and self.nonlocal_decay

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {
            "level": self.level,
            "entries": self.entries,
            "threshold": self.threshold,
            "derivatives_decay": self.derivatives_decay,
            "nonlocal_decay": self.nonlocal_decay,
            "pass": self.passed,
        }


def _decreasing(values: Sequence[float]) -> bool:
    pairs = zip(values, values[1:])
    return all(later <= earlier * (1.0 + 1e-9) for earlier, later in pairs)


def localizer_properties(
    measure: LevyMeasure,
    *,
    betas: Sequence[float] = (1.0, 0.5, 0.25),
    level: float = 1.0,
    samples: int = 64,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
) -> LocalizerReport:
    """
    Check psi_beta on radial samples up to 3 / beta, for decreasing beta.

    Raises:
        ValueError: If ``betas`` is not strictly decreasing.
    """
    if any(later >= earlier for earlier, later in zip(betas, betas[1:])):
        raise ValueError("betas must be strictly decreasing")
    dim = measure.dim
    rule = build_quadrature(measure, 1.0, quad_tol, settings)
    direction = np.zeros(dim)
    direction[0] = 1.0
    report = LocalizerReport(level=level)
    for beta in betas:
        psi = Localizer(beta, level, dim=dim)
        radii = np.linspace(0.0, 3.0 / beta, samples)
        points = radii[:, None] * direction
        far = points[radii >= 2.0 / beta]
        edge = psi.at(2.0 / beta * direction)
        above = bool(np.all(psi.value(far) > level)) and edge > level
        report.threshold = report.threshold and above
        gradients = [float(np.linalg.norm(psi.gradient(x))) for x in points]
        hessians = [float(np.linalg.norm(psi.hessian(x), 2)) for x in points]
        nonlocal_values = [abs(eval_levy(measure, psi, x, rule)) for x in points]
        report.entries.append(
            {
                "beta": float(beta),
                "gradient_sup": max(gradients),
                "hessian_sup": max(hessians),
                "nonlocal_sup": max(nonlocal_values),
            }
        )
    report.derivatives_decay = _decreasing(
        [e["gradient_sup"] for e in report.entries]
    ) and _decreasing([e["hessian_sup"] for e in report.entries])
    report.nonlocal_decay = _decreasing([e["nonlocal_sup"] for e in report.entries])
    logger.info("localizer properties: %s", "pass" if report.passed else "fail")
    return report
