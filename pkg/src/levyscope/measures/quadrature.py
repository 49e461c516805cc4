"""src/levyscope/measures/quadrature.py

Split quadrature for singular Levy measures.

A rule splits the measure at a radius delta. The inner part, the closed ball
of radius delta, is resolved on geometric annuli that refine toward the
origin. Below the last annulus the second moment is kept in closed form per
direction, so evaluators can add the second-order Taylor term of the
unresolved ball exactly. The outer part carries near panels, a resolved far
field and a truncated tail whose mass is kept as an explicit bound.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import optimize, special

from levyscope.exceptions import TolUnreachableError
from levyscope.measures.levy_measure import (
    BOUNDED,
    STABLE,
    LevyMeasure,
    small_ball_moment,
    tail_mass,
)
from levyscope.outcomes import is_divergent

__all__ = ["QuadratureSettings", "QuadratureRule", "build_quadrature"]

logger = logging.getLogger(__name__)

_DEFAULT_RESOLVED = {1: 1024.0, 2: 64.0}

# r ** (-3) stays finite above this radius
MIN_FLOOR = 1e-60


@dataclass
class QuadratureSettings:
    """
    Discretization knobs of ``build_quadrature``.

    Attributes:
        n_gauss: Gauss-Legendre points per radial panel.
        n_angular: Angular nodes for two-dimensional measures (even).
        panel_width: Width of the uniform panels of the resolved far field.
        r_resolved: Radius up to which the far field is integrated panel by
            panel; beyond it the integrand is closed with the field's far
            mean. Defaults to 1024 in 1D and 64 in 2D.
        max_levels: Maximum number of inner refinement annuli.
    """

    n_gauss: int = 8
    n_angular: int = 64
    panel_width: float = 0.5
    r_resolved: Optional[float] = None
    max_levels: int = 400


class QuadratureRule:
    """
    Node and weight sets for the split at radius ``delta``.

    Attributes:
        delta: Split radius.
        dim: Space dimension.
        tol: Relative tolerance the rule was built for.
        inner_nodes: ``(m, d)`` nodes with 0 < |z| <= delta.
        inner_weights: Positive weights of the inner nodes.
        outer_nodes: ``(n, d)`` nodes with |z| > delta.
        outer_weights: Positive weights of the outer nodes.
        outer_far: Mask of outer nodes beyond the resolved radius.
        r_max: Truncation radius of the outer part.
        tail_bound: Measure mass beyond ``r_max``.
        tail_directions: Unit directions carrying the tail mass.
        tail_weights: Tail mass per direction.
        inner_floor: Radius below which the inner part is not resolved.
        inner_remainder: Second moment of the ball of radius ``inner_floor``.
        floor_directions: Unit directions of the unresolved ball.
        floor_weights: Second moment of the unresolved ball per direction,
            so that sum_j w_j theta_j theta_j^T is its covariance matrix.
        levels: Inner annuli used.
        symmetric: Whether the measure is symmetric.
    """

    __slots__ = (
        "delta",
        "dim",
        "tol",
        "inner_nodes",
        "inner_weights",
        "outer_nodes",
        "outer_weights",
        "outer_far",
        "r_max",
        "tail_bound",
        "tail_directions",
        "tail_weights",
        "inner_floor",
        "inner_remainder",
        "floor_directions",
        "floor_weights",
        "levels",
        "symmetric",
    )

    def __init__(
        self,
        *,
        delta: float,
        dim: int,
        tol: float,
        inner_nodes: np.ndarray,
        inner_weights: np.ndarray,
        outer_nodes: np.ndarray,
        outer_weights: np.ndarray,
        outer_far: np.ndarray,
        r_max: float,
        tail_bound: float,
        tail_directions: np.ndarray,
        tail_weights: np.ndarray,
        inner_floor: float,
        inner_remainder: float,
        floor_directions: np.ndarray,
        floor_weights: np.ndarray,
        levels: int,
        symmetric: bool,
    ) -> None:
        self.delta = delta
        self.dim = dim
        self.tol = tol
        self.inner_nodes = inner_nodes
        self.inner_weights = inner_weights
        self.outer_nodes = outer_nodes
        self.outer_weights = outer_weights
        self.outer_far = outer_far
        self.r_max = r_max
        self.tail_bound = tail_bound
        self.tail_directions = tail_directions
        self.tail_weights = tail_weights
        self.inner_floor = inner_floor
        self.inner_remainder = inner_remainder
        self.floor_directions = floor_directions
        self.floor_weights = floor_weights
        self.levels = levels
        self.symmetric = symmetric

    @property
    def node_count(self) -> int:
        """Total number of inner and outer nodes."""
        return int(self.inner_weights.size + self.outer_weights.size)

    @property
    def outer_mass(self) -> float:
        """Quadrature mass of the outer part, tail excluded."""
        return float(self.outer_weights.sum())

    def inner_moment(self) -> float:
        """Quadrature second moment of the inner part."""
        if self.inner_weights.size == 0:
            return 0.0
        return float(self.inner_weights @ np.sum(self.inner_nodes**2, axis=1))

    def summary(self) -> dict:
        """Scalar description for reports."""
        return {
            "delta": self.delta,
            "tol": self.tol,
            "inner_nodes": int(self.inner_weights.size),
            "outer_nodes": int(self.outer_weights.size),
            "levels": self.levels,
            "inner_floor": self.inner_floor,
            "inner_remainder": self.inner_remainder,
            "r_max": self.r_max,
            "tail_bound": self.tail_bound,
            "symmetric": self.symmetric,
        }

    def __repr__(self) -> str:
        return (
            f"QuadratureRule(delta={self.delta}, inner={self.inner_weights.size}, "
            f"outer={self.outer_weights.size}, r_max={self.r_max:.3g})"
        )


# (directions, angular weights, per-direction radial density)
_Directions = Tuple[np.ndarray, np.ndarray, List[Callable[[np.ndarray], np.ndarray]]]


def _directions(measure: LevyMeasure, n_angular: int) -> _Directions:
    if measure.kind == STABLE:
        alpha = measure.alpha

        def power(r: np.ndarray) -> np.ndarray:
            return r ** (-1.0 - alpha)

        if measure.dim == 1:
            dirs = np.array([[1.0], [-1.0]])
            weights = np.array([measure.angular[0], measure.angular[1]], dtype=float)
            return dirs, weights, [power, power]
        half = n_angular // 2
        theta = 2.0 * math.pi * np.arange(half) / n_angular
        first = np.column_stack([np.cos(theta), np.sin(theta)])
        # second half negated exactly so symmetric measures pair node by node
        dirs = np.vstack([first, -first])
        front = measure.angular_density(theta)
        if measure.is_symmetric:
            back = front
        else:
            back = measure.angular_density(theta + math.pi)
        weights = np.concatenate([front, back])
        total = float(weights.sum())
        if total > 0:
            weights = weights * (measure.angular_mass / total)
        return dirs, weights, [power] * dirs.shape[0]
    plus, minus = measure.gamma_plus, measure.gamma_minus
    return (
        np.array([[1.0], [-1.0]]),
        np.ones(2),
        [lambda r: np.exp(-plus * r) / r, lambda r: np.exp(-minus * r) / r],
    )


def _panel_nodes(
    edges: np.ndarray, gl_nodes: np.ndarray, gl_weights: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    low, high = edges[:-1, None], edges[1:, None]
    half = 0.5 * (high - low)
    radii = (low + high) * 0.5 + half * gl_nodes[None, :]
    return radii.ravel(), (half * gl_weights[None, :]).ravel()


def _place(
    radii: np.ndarray, radial_weights: np.ndarray, directions: _Directions
) -> Tuple[np.ndarray, np.ndarray]:
    dirs, angular, densities = directions
    nodes = radii[:, None, None] * dirs[None, :, :]
    weights = np.column_stack(
        [
            angular[j] * radial_weights * densities[j](radii)
            for j in range(dirs.shape[0])
        ]
    )
    keep = weights.ravel() > 0
    return nodes.reshape(-1, dirs.shape[1])[keep], weights.ravel()[keep]


def _truncation_radius(measure: LevyMeasure, tol: float) -> float:
    if measure.kind == STABLE:
        return max(1.0, tol ** (-1.0 / measure.alpha))
    target = tol * tail_mass(measure, 1.0)
    if tail_mass(measure, 1.0) <= target:
        return 1.0
    upper = 2.0
    while tail_mass(measure, upper) > target:
        upper *= 2.0
    return float(optimize.brentq(lambda r: tail_mass(measure, r) - target, 1.0, upper))


def _direction_tails(
    measure: LevyMeasure, directions: _Directions, r_max: float
) -> np.ndarray:
    _, angular, _ = directions
    if measure.kind == STABLE:
        return angular * r_max ** (-measure.alpha) / measure.alpha
    return np.array(
        [
            float(special.exp1(measure.gamma_plus * r_max)),
            float(special.exp1(measure.gamma_minus * r_max)),
        ]
    )


def _floor_weights(
    measure: LevyMeasure, directions: _Directions, floor: float
) -> np.ndarray:
    _, angular, _ = directions
    if measure.kind == STABLE:
        alpha = measure.alpha
        return angular * floor ** (2.0 - alpha) / (2.0 - alpha)
    rates = np.array([measure.gamma_plus, measure.gamma_minus])
    # int_0^floor r e^{-rate r} dr
    return np.asarray(special.gammainc(2.0, rates * floor) / rates**2)


def _atom_rule(measure: LevyMeasure, delta: float, tol: float) -> QuadratureRule:
    dim = measure.dim
    points = np.array([p for p, _ in measure.atoms], dtype=float).reshape(-1, dim)
    masses = np.array([m for _, m in measure.atoms], dtype=float)
    radii = np.linalg.norm(points, axis=1) if masses.size else np.zeros(0)
    inside = radii <= delta
    return QuadratureRule(
        delta=delta,
        dim=dim,
        tol=tol,
        inner_nodes=points[inside],
        inner_weights=masses[inside],
        outer_nodes=points[~inside],
        outer_weights=masses[~inside],
        outer_far=np.zeros(int((~inside).sum()), dtype=bool),
        r_max=float(max(radii.max(initial=0.0), delta)),
        tail_bound=0.0,
        tail_directions=np.zeros((0, dim)),
        tail_weights=np.zeros(0),
        inner_floor=0.0,
        inner_remainder=0.0,
        floor_directions=np.zeros((0, dim)),
        floor_weights=np.zeros(0),
        levels=0,
        symmetric=measure.is_symmetric,
    )


def build_quadrature(
    measure: LevyMeasure,
    delta: float,
    tol: float,
    settings: Optional[QuadratureSettings] = None,
) -> QuadratureRule:
    """
    Build the split quadrature rule of a measure at radius ``delta``.

    Inner annuli [delta 2^{-k-1}, delta 2^{-k}] are added until the third
    moment of the unresolved ball drops below ``tol * delta`` times the
    second moment of the whole inner ball. The second moment below the
    floor is returned in closed form per direction, which keeps the number
    of annuli near log2(1/tol) / (3 - alpha) for every alpha in (0, 2).

    Args:
        measure: Measure to discretize.
        delta: Split radius in (0, 1].
        tol: Relative tolerance for the inner remainder and the tail.
        settings: Discretization knobs.

    Returns:
        QuadratureRule: Rule with explicit floor, remainder and tail bound.

    Raises:
        ValueError: If ``delta`` or ``tol`` is out of range.
        TolUnreachableError: If the tolerance needs more than
            ``settings.max_levels`` annuli or a floor below ``MIN_FLOOR``.
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tol must lie in (0, 1), got {tol}")
    settings = settings or QuadratureSettings()
    if measure.kind == BOUNDED:
        return _atom_rule(measure, delta, tol)

    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(settings.n_gauss)
    directions = _directions(measure, settings.n_angular)

    total = small_ball_moment(measure, 2.0, delta)
    inner_nodes: List[np.ndarray] = [np.zeros((0, measure.dim))]
    inner_weights: List[np.ndarray] = [np.zeros(0)]
    level = 0
    while True:
        inner_floor = delta * 2.0**-level
        third = small_ball_moment(measure, 3.0, inner_floor)
        if is_divergent(total) or is_divergent(third):
            raise TolUnreachableError(f"{measure!r} has no finite inner moments")
        # the second-order term below the floor is exact; what is left is cubic
        if float(third) <= tol * delta * float(total):
            break
        if level >= settings.max_levels or inner_floor < 2.0 * MIN_FLOOR:
            raise TolUnreachableError(
                f"tol={tol} not reached within {level} inner levels"
            )
        edges = np.array([0.5 * inner_floor, inner_floor])
        radii, radial = _panel_nodes(edges, gl_nodes, gl_weights)
        nodes, weights = _place(radii, radial, directions)
        inner_nodes.append(nodes)
        inner_weights.append(weights)
        level += 1
        logger.debug(
            "inner level %d: floor %.3e, cubic remainder %.3e",
            level,
            0.5 * inner_floor,
            float(third),
        )

    floor_weights = _floor_weights(measure, directions, inner_floor)

    r_max = _truncation_radius(measure, tol)
    edges_near: List[float] = []
    if delta < 1.0:
        steps = int(math.ceil(math.log2(1.0 / delta)))
        edges_near = [min(delta * 2.0**k, 1.0) for k in range(steps + 1)]
    resolved = min(settings.r_resolved or _DEFAULT_RESOLVED[measure.dim], r_max)
    n_uniform = max(1, int(math.ceil((resolved - 1.0) / settings.panel_width)))
    uniform = [1.0]
    if resolved > 1.0:
        uniform = list(np.linspace(1.0, resolved, n_uniform + 1))
    near_edges = np.unique(np.array(edges_near + uniform))
    far_edges = [resolved]
    while far_edges[-1] < r_max:
        far_edges.append(min(2.0 * far_edges[-1], r_max))

    near_radii, near_radial = _panel_nodes(near_edges, gl_nodes, gl_weights)
    near_nodes, near_weights = _place(near_radii, near_radial, directions)
    if len(far_edges) > 1:
        far_radii, far_radial = _panel_nodes(np.array(far_edges), gl_nodes, gl_weights)
        far_nodes, far_weights = _place(far_radii, far_radial, directions)
    else:
        far_nodes, far_weights = np.zeros((0, measure.dim)), np.zeros(0)

    tail_weights = _direction_tails(measure, directions, r_max)
    rule = QuadratureRule(
        delta=delta,
        dim=measure.dim,
        tol=tol,
        inner_nodes=np.vstack(inner_nodes),
        inner_weights=np.concatenate(inner_weights),
        outer_nodes=np.vstack([near_nodes, far_nodes]),
        outer_weights=np.concatenate([near_weights, far_weights]),
        outer_far=np.concatenate(
            [
                np.zeros(near_weights.size, dtype=bool),
                np.ones(far_weights.size, dtype=bool),
            ]
        ),
        r_max=r_max,
        tail_bound=float(tail_weights.sum()),
        tail_directions=directions[0],
        tail_weights=tail_weights,
        inner_floor=inner_floor,
        inner_remainder=float(floor_weights.sum()),
        floor_directions=directions[0],
        floor_weights=floor_weights,
        levels=level,
        symmetric=measure.is_symmetric,
    )
    logger.info("built %r for %r", rule, measure)
    return rule
