"""src/levyscope/nonsmooth/convolution.py

Localized, slope-shifted sup- and inf-convolutions on grids.

    R^a[U](z, r) = sup_{|Z - z| <= 1} U(Z) - r . (Z - z) - |Z - z|^2 / (2a)
    R_a[V](z, r) = -R^a[-V](z, -r)

The supremum runs over grid nodes of the box; ties go to the smallest node
index in lexicographic order.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from levyscope.exceptions import GridTooCoarseError
from levyscope.operators.grid import GridFunction
from levyscope.utils.serialization import write_csv
from levyscope.utils.validators import check_positive

__all__ = [
    "SUP",
    "INF",
    "MAX_MESH",
    "ConvolutionResult",
    "SemiconvexityReport",
    "sup_convolution",
    "inf_convolution",
    "check_semiconvexity",
    "write_convolution_csv",
]

logger = logging.getLogger(__name__)

SUP = "sup"
INF = "inf"

# the unit ball must hold at least four cells per axis
MAX_MESH = 0.25


@dataclass
class ConvolutionResult:
    """
    Output of a sup- or inf-convolution.

    Attributes:
        values: Regularized grid function.
        alpha: Regularization parameter.
        slope: Shift vector r.
        argmax_offsets: ``(size, d)`` offsets Z - z of the optimizing node.
        sign: ``sup`` or ``inf``.
    """

    values: GridFunction
    alpha: float
    slope: np.ndarray
    argmax_offsets: np.ndarray
    sign: str = SUP

    @property
    def argmax_nodes(self) -> np.ndarray:
        """Coordinates of the optimizing nodes."""
        return self.values.grid.nodes + self.argmax_offsets


@dataclass
class SemiconvexityReport:
    """
    Outcome of the semiconvexity audit.

    Attributes:
        min_second_difference: Smallest second difference found.
        floor: Threshold -1/alpha - tol.
        passed: Whether the minimum stays above the floor.
        witness: Node coordinates and direction of the minimum.
        checked_nodes: Number of nodes audited.
    """

    min_second_difference: float
    floor: float
    passed: bool
    witness: Optional[Dict[str, Any]]
    checked_nodes: int

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {
            "min_second_difference": self.min_second_difference,
            "floor": self.floor,
            "pass": self.passed,
            "witness": self.witness,
            "checked_nodes": self.checked_nodes,
        }


def _slope(r: Union[float, Sequence[float], np.ndarray], dim: int) -> np.ndarray:
    slope = np.atleast_1d(np.asarray(r, dtype=float))
    if slope.size == 1 and dim > 1:
        slope = np.full(dim, float(slope[0]))
    if slope.shape != (dim,):
        raise ValueError(f"slope must be a vector of R^{dim}")
    return slope


def sup_convolution(
    U: GridFunction, r: Union[float, Sequence[float], np.ndarray], alpha: float
) -> ConvolutionResult:
    """
    Slope-shifted sup-convolution over the closed unit ball.

    Raises:
        ValueError: If ``alpha`` is not positive.
        GridTooCoarseError: If the mesh exceeds ``MAX_MESH``.
    """
    alpha = check_positive("alpha", alpha)
    grid = U.grid
    if grid.h > MAX_MESH:
        raise GridTooCoarseError(
            f"h={grid.h} exceeds {MAX_MESH}; the unit ball is unresolved"
        )
    slope = _slope(r, grid.dim)
    n = grid.n
    padded = np.full(tuple(3 * n for _ in grid.shape), -np.inf)
    core = tuple(slice(n, 2 * n) for _ in grid.shape)
    padded[core] = U.values

    best = np.full(grid.shape, -np.inf)
    offsets = np.zeros(grid.shape + (grid.dim,))
    for offset in grid.offsets(1.0):
        if max(abs(o) for o in offset) >= n:
            continue
        w = grid.h * np.asarray(offset, dtype=float)
        window = tuple(slice(n + o, 2 * n + o) for o in offset)
        candidate = padded[window] - float(slope @ w) - float(w @ w) / (2.0 * alpha)
        better = candidate > best
        best = np.where(better, candidate, best)
        offsets[better] = w
    logger.debug("sup-convolution alpha=%g over %d nodes", alpha, grid.size)
    return ConvolutionResult(
        values=U.with_values(best),
        alpha=float(alpha),
        slope=slope,
        argmax_offsets=offsets.reshape(grid.size, grid.dim),
        sign=SUP,
    )


def inf_convolution(
    V: GridFunction, r: Union[float, Sequence[float], np.ndarray], alpha: float
) -> ConvolutionResult:
    """Inf-convolution through the identity R_a[V](r) = -R^a[-V](-r)."""
    slope = _slope(r, V.grid.dim)
    upper = sup_convolution(-V, -slope, alpha)
    return ConvolutionResult(
        values=-upper.values,
        alpha=upper.alpha,
        slope=slope,
        argmax_offsets=upper.argmax_offsets,
        sign=INF,
    )


def _directions(dim: int) -> Sequence[np.ndarray]:
    if dim == 1:
        return [np.array([1])]
    return [np.array([1, 0]), np.array([0, 1]), np.array([1, 1]), np.array([1, -1])]


def check_semiconvexity(
    W: ConvolutionResult, *, tol: Optional[float] = None
) -> SemiconvexityReport:
    """
    Audit the semiconvexity floor -1/alpha of a sup-convolution.

    Second differences along the axes (and diagonals in 2D) are taken at
    nodes whose unit ball, widened by one cell, lies inside the box.
    """
    grid = W.values.grid
    alpha = W.alpha
    tol = 10.0 * grid.h / alpha**2 if tol is None else tol
    floor = -1.0 / alpha - tol
    margin = int(np.ceil(1.0 / grid.h)) + 1
    nodes = grid.interior(margin)
    values = W.values.values
    minimum = np.inf
    witness: Optional[Dict[str, Any]] = None
    for direction in _directions(grid.dim):
        step2 = grid.h**2 * float(direction @ direction)
        for flat in nodes:
            center = np.asarray(grid.index(int(flat)))
            forward = values[tuple(center + direction)]
            backward = values[tuple(center - direction)]
            second = (forward - 2.0 * values[tuple(center)] + backward) / step2
            if second < minimum:
                minimum = float(second)
                witness = {
                    "node": grid.nodes[int(flat)].tolist(),
                    "direction": direction.tolist(),
                    "second_difference": minimum,
                }
    passed = bool(minimum >= floor) if nodes.size else True
    if not passed:
        logger.warning("semiconvexity floor %.6g violated: %.6g", floor, minimum)
    return SemiconvexityReport(
        min_second_difference=float(minimum) if nodes.size else 0.0,
        floor=floor,
        passed=passed,
        witness=witness,
        checked_nodes=int(nodes.size),
    )


def write_convolution_csv(
    path: Union[str, Path],
    result: ConvolutionResult,
    config: Optional[Dict[str, Any]] = None,
) -> None:
    """Write one row per node: coordinates, value and argmax offset."""
    grid = result.values.grid
    axes = ["x", "y"][: grid.dim]
    header = axes + ["value"] + [f"offset_{a}" for a in axes]
    rows = []
    columns = zip(grid.nodes, result.values.flat, result.argmax_offsets)
    for node, value, offset in columns:
        rows.append([*map(float, node), float(value), *map(float, offset)])
    write_csv(path, header, rows, config)
