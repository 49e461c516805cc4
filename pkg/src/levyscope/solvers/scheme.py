"""src/levyscope/solvers/scheme.py

Monotone finite-difference discretization of the model operators.

The linear part (diffusion, drift, nonlocal term) is assembled once as a
generator in difference form,

    (G u)_i = sum_j c_ij (u_j - u_i),    c_ij >= 0,

so constants are exact fixed points and every explicit update with a small
enough step is a convex combination of neighbor values. The quadratic
Hamiltonian uses the Godunov flux.
"""

import dataclasses
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from levyscope.exceptions import NonMonotoneSchemeError
from levyscope.measures import (
    LevyMeasure,
    QuadratureRule,
    QuadratureSettings,
    build_quadrature,
)
from levyscope.operators.grid import PERIODIC, Grid
from levyscope.operators.jump_maps import JumpMap
from levyscope.solvers.problem import ProblemSpec, sample_scalar
from levyscope.viscosity.nonlinearity import BELLMAN

__all__ = [
    "COEFFICIENT_TOL",
    "TERMS",
    "MonotoneOperator",
    "Generator",
    "CFLBound",
    "scheme_settings",
    "scheme_rule",
    "neighbor_index",
    "interpolation_stencil",
    "pair_reach",
    "assemble_generator",
    "build_generators",
    "godunov_hamiltonian",
    "max_slope",
    "cfl_bound",
]

logger = logging.getLogger(__name__)

COEFFICIENT_TOL = 1e-14

TERMS = ("diffusion", "inner", "drift", "outer")
FORMULA = "1 / (diffusion + inner + drift + outer + hamiltonian + zeroth_order)"


class MonotoneOperator:
    """
    Sparse generator with nonnegative off-diagonal coefficients.

    Attributes:
        size: Number of grid nodes.
        matrix: CSR matrix of the coefficients c_ij (zero diagonal).
        rates: Row sums sum_j c_ij.
    """

    __slots__ = ("size", "matrix", "rates")

    def __init__(
        self, size: int, rows: np.ndarray, cols: np.ndarray, data: np.ndarray
    ) -> None:
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        data = np.asarray(data, dtype=float)
        if data.size and not np.all(np.isfinite(data)):
            raise NonMonotoneSchemeError("scheme coefficients must be finite")
        if data.size and data.min() < -COEFFICIENT_TOL:
            k = int(np.argmin(data))
            raise NonMonotoneSchemeError(
                f"negative coefficient {data[k]:.3e} "
                f"from node {rows[k]} to node {cols[k]}"
            )
        keep = (rows != cols) & (data > 0)
        self.size = size
        self.matrix = sparse.csr_matrix(
            (data[keep], (rows[keep], cols[keep])), shape=(size, size)
        )
        self.rates = np.asarray(self.matrix.sum(axis=1)).ravel()

    @classmethod
    def empty(cls, size: int) -> "MonotoneOperator":
        """Operator with no couplings."""
        none = np.zeros(0)
        return cls(size, none, none, none)

    def apply(self, u: np.ndarray) -> np.ndarray:
        """(G u)_i = sum_j c_ij (u_j - u_i)."""
        return self.matrix @ u - self.rates * u

    def __add__(self, other: "MonotoneOperator") -> "MonotoneOperator":
        if other.size != self.size:
            raise ValueError("operators act on different grids")
        total = (self.matrix + other.matrix).tocoo()
        return MonotoneOperator(self.size, total.row, total.col, total.data)

    @property
    def max_rate(self) -> float:
        """Largest row sum."""
        return float(self.rates.max()) if self.size else 0.0

    @property
    def is_empty(self) -> bool:
        """Whether no node is coupled to another."""
        return self.matrix.nnz == 0

    def certificate(self) -> Dict[str, Any]:
        """Monotonicity certificate: coefficient sign and rate bound."""
        data = self.matrix.data
        return {
            "min_coefficient": float(data.min()) if data.size else 0.0,
            "max_rate": self.max_rate,
            "couplings": int(self.matrix.nnz),
        }


@dataclass
class Generator:
    """
    Assembled linear operator with its per-term node rates.

    Attributes:
        operator: The monotone generator.
        rates: Max row sum of each term (diffusion, inner, drift, outer).
        rule: Quadrature rule of the nonlocal term.
    """

    operator: MonotoneOperator
    rates: Dict[str, float] = field(default_factory=dict)
    rule: Optional[QuadratureRule] = None


@dataclass
class CFLBound:
    """
    Explicit-step bound 1 / (sum of the per-node rates of every term).

    Every term is the largest rate the corresponding part of the scheme puts
    on a single node.
    """

    diffusion: float = 0.0
    inner: float = 0.0
    drift: float = 0.0
    outer: float = 0.0
    hamiltonian: float = 0.0
    zeroth_order: float = 0.0

    @property
    def denominator(self) -> float:
        """Sum of the terms."""
        return (
            self.diffusion + self.inner + self.drift + self.outer
            + self.hamiltonian + self.zeroth_order
        )

    @property
    def value(self) -> float:
        """The bound (infinite for a zero operator)."""
        total = self.denominator
        return math.inf if total <= 0 else 1.0 / total

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view with the formula."""
        return {
            **dataclasses.asdict(self),
            "dt_max": self.value,
            "formula": FORMULA,
        }


def scheme_settings(
    grid: Grid, base: Optional[QuadratureSettings] = None
) -> QuadratureSettings:
    """Quadrature knobs resolving the far field up to the box diameter."""
    diameter = 2.0 * grid.half_width * math.sqrt(grid.dim)
    return dataclasses.replace(
        base or QuadratureSettings(), r_resolved=max(1.0, diameter)
    )


def scheme_rule(
    measure: LevyMeasure,
    grid: Grid,
    delta: Optional[float] = None,
    tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
) -> QuadratureRule:
    """Quadrature rule of the scheme; the split radius defaults to 2h."""
    radius = min(2.0 * grid.h, 1.0) if delta is None else delta
    return build_quadrature(measure, radius, tol, scheme_settings(grid, settings))


def neighbor_index(grid: Grid, offset: Sequence[int]) -> np.ndarray:
    """Flat index of node + offset for every node, following the extension rule."""
    mesh = np.meshgrid(*([np.arange(grid.n)] * grid.dim), indexing="ij")
    shifted = []
    for axis, m in enumerate(mesh):
        moved = m.ravel() + int(offset[axis])
        if grid.extension == PERIODIC:
            moved = np.mod(moved, grid.n - 1)
        else:
            moved = np.clip(moved, 0, grid.n - 1)
        shifted.append(moved)
    return np.ravel_multi_index(tuple(shifted), grid.shape)


def interpolation_stencil(
    grid: Grid, points: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Multilinear interpolation weights of points of R^d.

    Returns:
        ``(indices, weights)`` of shape ``(m, 2^d)``; weights are nonnegative
        and sum to one on every row.
    """
    wrapped = grid.wrap(np.asarray(points, dtype=float).reshape(-1, grid.dim))
    scaled = (wrapped + grid.half_width) / grid.h
    base = np.clip(np.floor(scaled), 0, grid.n - 2).astype(np.int64)
    frac = np.clip(scaled - base, 0.0, 1.0)
    indices, weights = [], []
    for corner in itertools.product((0, 1), repeat=grid.dim):
        bits = np.asarray(corner)
        multi = base + bits
        indices.append(np.ravel_multi_index(tuple(multi.T), grid.shape))
        weights.append(np.prod(np.where(bits == 1, frac, 1.0 - frac), axis=1))
    return np.column_stack(indices), np.column_stack(weights)


class _Triplets:
    def __init__(self) -> None:
        self.rows: List[np.ndarray] = []
        self.cols: List[np.ndarray] = []
        self.data: List[np.ndarray] = []

    def add(self, rows: np.ndarray, cols: np.ndarray, data: np.ndarray) -> None:
        rows, cols, data = np.broadcast_arrays(rows, cols, data)
        self.rows.append(rows.ravel())
        self.cols.append(cols.ravel())
        self.data.append(data.ravel())

    def build(self, size: int) -> MonotoneOperator:
        if not self.rows:
            return MonotoneOperator.empty(size)
        return MonotoneOperator(
            size,
            np.concatenate(self.rows),
            np.concatenate(self.cols),
            np.concatenate(self.data),
        )


def _axis_step(dim: int, axis: int, sign: int = 1) -> List[int]:
    step = [0] * dim
    step[axis] = sign
    return step


def pair_reach(grid: Grid) -> float:
    """Length of the symmetric inner pairs: h in 1D, sqrt(h) in 2D."""
    return grid.h if grid.dim == 1 else math.sqrt(grid.h)


def _inner_pairs(
    grid: Grid, jmap: JumpMap, rule: QuadratureRule, x: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Steps and weights of the paired inner term at ``x``.

    Every inner jump j with weight w becomes the pair

        w |j|^2 / (2 k^2) (u(x + k j/|j|) + u(x - k j/|j|) - 2 u(x))

    with k the pair reach, which carries w j^T D^2 u j / 2. The ball below
    the floor enters the same way through its per-direction moments. Pairs
    on one line through x are merged before interpolation.
    """
    jumps = jmap.apply(x, rule.inner_nodes)
    mass = rule.inner_weights * np.sum(jumps**2, axis=1)
    if rule.inner_floor and rule.floor_weights.size:
        floor = rule.inner_floor
        slopes = jmap.apply(x, floor * rule.floor_directions) / floor
        jumps = np.vstack([jumps, slopes])
        mass = np.concatenate([mass, rule.floor_weights * np.sum(slopes**2, axis=1)])
    length = np.linalg.norm(jumps, axis=1)
    live = (length > 0) & (mass > 0)
    if not np.any(live):
        return np.zeros((0, grid.dim)), np.zeros(0)
    directions = jumps[live] / length[live, None]
    # the pair along -e is the pair along e
    leading = np.argmax(np.abs(directions) > 1e-12, axis=1)
    signs = np.sign(directions[np.arange(len(directions)), leading])
    lines, inverse = np.unique(
        np.round(directions * signs[:, None], 12), axis=0, return_inverse=True
    )
    merged = np.bincount(inverse.ravel(), weights=mass[live], minlength=len(lines))
    reach = pair_reach(grid)
    steps = reach * lines / np.linalg.norm(lines, axis=1)[:, None]
    return steps, 0.5 * merged / reach**2


def _laplacian(
    grid: Grid, coefficient: np.ndarray, triplets: _Triplets, rates: np.ndarray
) -> None:
    nodes, h2 = np.arange(grid.size), grid.h**2
    for axis in range(grid.dim):
        for sign in (1, -1):
            neighbor = neighbor_index(grid, _axis_step(grid.dim, axis, sign))
            triplets.add(nodes, neighbor, coefficient / h2)
        rates += 2.0 * coefficient / h2


def _upwind(
    grid: Grid, drift: np.ndarray, triplets: _Triplets, rates: np.ndarray
) -> None:
    nodes = np.arange(grid.size)
    for axis in range(grid.dim):
        speed = drift[:, axis] / grid.h
        for sign in (1, -1):
            step = _axis_step(grid.dim, axis, sign)
            weight = np.maximum(sign * speed, 0.0)
            triplets.add(nodes, neighbor_index(grid, step), weight)
        rates += np.abs(speed)


def assemble_generator(
    grid: Grid,
    measure: LevyMeasure,
    jmap: JumpMap,
    rule: QuadratureRule,
    *,
    nu: float = 0.0,
    diffusion: Optional[np.ndarray] = None,
    drift: Optional[np.ndarray] = None,
) -> Generator:
    """
    Assemble nu lap + b . grad + I into a monotone generator.

    The inner nonlocal term becomes symmetric pairs along each jump direction
    at the pair reach, interpolated with the stencil weights of the outer
    term, so its couplings are nonnegative for any measure. The compensator
    of a non-symmetric measure and the drift ``b`` are upwinded. The outer
    term couples each node to the interpolation corners of x + j(x, z) with
    the quadrature weights.

    Args:
        grid: Solver grid.
        measure: Levy measure.
        jmap: Jump map.
        rule: Quadrature rule at the split radius.
        nu: Laplacian coefficient.
        diffusion: Extra per-node Laplacian coefficients (sigma^2 / 2).
        drift: Per-node ``(size, d)`` drift b of the b . grad u term.

    Raises:
        NonMonotoneSchemeError: If a coefficient comes out negative.
    """
    size, dim = grid.size, grid.dim
    nodes = grid.nodes
    extra = np.zeros(size) if diffusion is None else np.asarray(diffusion, dtype=float)
    transport = np.zeros((size, dim))
    if drift is not None:
        transport += np.asarray(drift, dtype=float).reshape(size, dim)

    compensated = not (rule.symmetric and jmap.odd)
    near = np.linalg.norm(rule.outer_nodes, axis=1) <= 1.0
    triplets = {term: _Triplets() for term in TERMS}
    rates = {term: np.zeros(size) for term in TERMS}

    _laplacian(grid, nu + extra, triplets["diffusion"], rates["diffusion"])

    tail_points = rule.r_max * rule.tail_directions
    for i, x in enumerate(nodes):
        steps, pair_weights = _inner_pairs(grid, jmap, rule, x)
        if steps.size:
            idx, w = interpolation_stencil(grid, np.vstack([x + steps, x - steps]))
            coupling = w * np.tile(pair_weights, 2)[:, None]
            triplets["inner"].add(np.full(idx.shape, i), idx, coupling)
            rates["inner"][i] = 2.0 * float(pair_weights.sum())
        jumps = jmap.apply(x, rule.outer_nodes)
        if compensated and np.any(near):
            transport[i] -= rule.outer_weights[near] @ jumps[near]
        points = np.vstack([x + jumps, x + tail_points])
        weights = np.concatenate([rule.outer_weights, rule.tail_weights])
        if points.size == 0:
            continue
        idx, w = interpolation_stencil(grid, points)
        triplets["outer"].add(np.full(idx.shape, i), idx, w * weights[:, None])
        rates["outer"][i] = float(weights.sum())
    _upwind(grid, transport, triplets["drift"], rates["drift"])

    operator = MonotoneOperator.empty(size)
    for term in TERMS:
        operator = operator + triplets[term].build(size)
    summary = {term: float(rates[term].max()) if size else 0.0 for term in TERMS}
    logger.debug("generator for %r on %d nodes: %s", measure, size, summary)
    return Generator(operator=operator, rates=summary, rule=rule)


def build_generators(
    problem: ProblemSpec,
    grid: Grid,
    rule: QuadratureRule,
) -> List[Generator]:
    """One generator per control for Bellman problems, one otherwise."""
    if problem.kind != BELLMAN:
        return [
            assemble_generator(grid, problem.measure, problem.jmap, rule, nu=problem.nu)
        ]
    generators = []
    for k, control in enumerate(problem.controls):
        sigma = sample_scalar(control.sigma, grid)
        drift = np.array([control.drift_at(x) for x in grid.nodes])
        drift = drift.reshape(grid.size, grid.dim)
        generators.append(
            assemble_generator(
                grid,
                problem.measure,
                problem.control_jmap(k),
                rule,
                nu=problem.nu,
                diffusion=0.5 * sigma**2,
                drift=drift,
            )
        )
    return generators


def godunov_hamiltonian(grid: Grid, u: np.ndarray, coefficient: float) -> np.ndarray:
    """Godunov flux of c |p|^2: c sum_k max(max(D-u, 0)^2, min(D+u, 0)^2)."""
    total = np.zeros(grid.size)
    if coefficient == 0.0:
        return total
    for axis in range(grid.dim):
        ahead = u[neighbor_index(grid, _axis_step(grid.dim, axis, 1))]
        behind = u[neighbor_index(grid, _axis_step(grid.dim, axis, -1))]
        forward = (ahead - u) / grid.h
        backward = (u - behind) / grid.h
        total += np.maximum(
            np.maximum(backward, 0.0) ** 2, np.minimum(forward, 0.0) ** 2
        )
    return coefficient * total


def max_slope(grid: Grid, u: np.ndarray) -> float:
    """Largest one-sided difference quotient."""
    slope = 0.0
    for axis in range(grid.dim):
        forward = (u[neighbor_index(grid, _axis_step(grid.dim, axis, 1))] - u) / grid.h
        slope = max(slope, float(np.max(np.abs(forward))) if forward.size else 0.0)
    return slope


def cfl_bound(
    problem: ProblemSpec,
    grid: Grid,
    delta: Optional[float] = None,
    *,
    generators: Optional[Sequence[Generator]] = None,
    slope_bound: Optional[float] = None,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
) -> CFLBound:
    """
    Monotonicity bound of the explicit step.

    The Hamiltonian term is d L_H / h with L_H = 2 c S the sup of
    |grad_p (c |p|^2)| over slopes up to S; stationary problems add gamma.
    """
    if generators is None:
        rule = scheme_rule(problem.measure, grid, delta, quad_tol, settings)
        generators = build_generators(problem, grid, rule)
    slope = problem.slope_bound if slope_bound is None else slope_bound
    lipschitz = 0.0 if problem.kind == BELLMAN else 2.0 * problem.hamiltonian * slope
    bound = CFLBound(
        hamiltonian=grid.dim * lipschitz / grid.h,
        zeroth_order=problem.gamma if problem.stationary else 0.0,
        **{term: max(g.rates.get(term, 0.0) for g in generators) for term in TERMS},
    )
    logger.debug("CFL bound %s", bound.to_dict())
    return bound
