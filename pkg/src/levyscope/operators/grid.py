"""src/levyscope/operators/grid.py

Uniform box grids and sampled grid functions.

A grid function is defined on all of R^d: inside the box by multilinear
interpolation of its node values, outside by the grid's extension rule
(clamping to the nearest boundary point, or periodic repetition).
"""

from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from levyscope.exceptions import InconsistentGridsError, OutsideBoxError
from levyscope.operators.probes import TestFunction

__all__ = ["CLAMP", "PERIODIC", "Grid", "GridFunction"]

CLAMP = "constant_clamp"
PERIODIC = "periodic"

Point = Union[float, Sequence[float], np.ndarray]


class Grid:
    """
    Uniform grid of the box [-L, L]^d with mesh size h.

    Attributes:
        dim: Space dimension.
        half_width: Box half-width L.
        h: Mesh size.
        extension: ``constant_clamp`` or ``periodic``.
        n: Nodes per axis.
    """

    __slots__ = ("dim", "half_width", "h", "extension", "n", "_axis", "_nodes")

    def __init__(
        self, dim: int, half_width: float, h: float, *, extension: str = CLAMP
    ) -> None:
        if dim not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {dim}")
        if half_width <= 0 or h <= 0:
            raise ValueError("half_width and h must be positive")
        cells = 2.0 * half_width / h
        if abs(cells - round(cells)) > 1e-9 * max(1.0, cells):
            raise ValueError(f"2L/h must be an integer, got {cells}")
        if extension not in (CLAMP, PERIODIC):
            raise ValueError(f"unknown extension {extension!r}")
        self.dim = dim
        self.half_width = float(half_width)
        self.h = float(h)
        self.extension = extension
        self.n = int(round(cells)) + 1
        self._axis = np.linspace(-half_width, half_width, self.n)
        self._nodes: Optional[np.ndarray] = None

    @property
    def axis(self) -> np.ndarray:
        """Node coordinates along one axis."""
        return self._axis

    @property
    def shape(self) -> Tuple[int, ...]:
        """Array shape of node values."""
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        """Total number of nodes."""
        return self.n**self.dim

    @property
    def nodes(self) -> np.ndarray:
        """``(size, d)`` node coordinates in lexicographic (C) order."""
        if self._nodes is None:
            mesh = np.meshgrid(*([self._axis] * self.dim), indexing="ij")
            self._nodes = np.column_stack([m.ravel() for m in mesh])
        return self._nodes

    def index(self, flat: int) -> Tuple[int, ...]:
        """Multi-index of a flat node index."""
        return tuple(int(i) for i in np.unravel_index(flat, self.shape))

    def flat_index(self, multi: Sequence[int]) -> int:
        """Flat index of a multi-index."""
        return int(np.ravel_multi_index(tuple(multi), self.shape))

    def nearest(self, x: Point) -> int:
        """Flat index of the node nearest to ``x`` (inside the box)."""
        point = np.atleast_1d(np.asarray(x, dtype=float))
        multi = np.clip(np.rint((point + self.half_width) / self.h), 0, self.n - 1)
        return self.flat_index(multi.astype(int))

    def contains(self, x: Point) -> bool:
        """Whether ``x`` lies in the closed box."""
        point = np.atleast_1d(np.asarray(x, dtype=float))
        return bool(np.all(np.abs(point) <= self.half_width * (1.0 + 1e-12)))

    def wrap(self, points: np.ndarray) -> np.ndarray:
        """Map points of R^d into the box following the extension rule."""
        if self.extension == CLAMP:
            return np.clip(points, -self.half_width, self.half_width)
        period = 2.0 * self.half_width
        return np.mod(points + self.half_width, period) - self.half_width

    def interior(self, margin: int = 1) -> np.ndarray:
        """Flat indices of nodes at least ``margin`` nodes from the boundary."""
        mesh = np.meshgrid(*([np.arange(self.n)] * self.dim), indexing="ij")
        keep = np.ones(self.shape, dtype=bool)
        for m in mesh:
            keep &= (m >= margin) & (m <= self.n - 1 - margin)
        return np.flatnonzero(keep.ravel())

    def offsets(self, radius: float) -> List[Tuple[int, ...]]:
        """
        Integer offsets with Euclidean length at most ``radius``.

        Offsets are listed in lexicographic order, which fixes tie-breaking
        in every search that scans them.
        """
        reach = int(np.floor(radius / self.h + 1e-9))
        mesh = np.meshgrid(*([np.arange(-reach, reach + 1)] * self.dim), indexing="ij")
        result = []
        for offset in zip(*(m.ravel() for m in mesh)):
            length = self.h * np.sqrt(float(np.dot(offset, offset)))
            if length <= radius * (1.0 + 1e-12):
                result.append(tuple(int(o) for o in offset))
        return result

    def sample(
        self, field: Union[TestFunction, Callable[[np.ndarray], np.ndarray]]
    ) -> "GridFunction":
        """Grid function holding the values of ``field`` at the nodes."""
        if isinstance(field, TestFunction):
            values = field.value(self.nodes)
        else:
            values = np.asarray(field(self.nodes), dtype=float)
        return GridFunction(self, values.reshape(self.shape))

    def same_as(self, other: "Grid") -> bool:
        """Structural equality."""
        return (
            self.dim == other.dim
            and self.n == other.n
            and self.half_width == other.half_width
            and self.extension == other.extension
        )

    def describe(self) -> dict:
        """JSON-ready description."""
        return {
            "dim": self.dim,
            "L": self.half_width,
            "h": self.h,
            "extension": self.extension,
            "nodes": self.size,
        }

    def __repr__(self) -> str:
        return (
            f"Grid(dim={self.dim}, L={self.half_width}, h={self.h}, {self.extension})"
        )


class GridFunction:
    """
    Node values on a grid, extended to all of R^d.

    Attributes:
        grid: Underlying grid.
        values: Node values with shape ``grid.shape``.
        sup_bound: Declared bound of |u| (defaults to the node maximum).
    """

    __slots__ = ("grid", "values", "sup_bound", "_interpolator")

    def __init__(
        self, grid: Grid, values: np.ndarray, *, sup_bound: Optional[float] = None
    ) -> None:
        array = np.asarray(values, dtype=float).reshape(grid.shape)
        if not np.all(np.isfinite(array)):
            raise ValueError("grid function values must be finite")
        observed = float(np.max(np.abs(array))) if array.size else 0.0
        if sup_bound is None:
            sup_bound = observed
        elif observed > sup_bound * (1.0 + 1e-12) + 1e-300:
            raise ValueError(f"values exceed the declared sup_bound {sup_bound}")
        self.grid = grid
        self.values = array
        self.sup_bound = float(sup_bound)
        self._interpolator: Optional[RegularGridInterpolator] = None

    @property
    def dim(self) -> int:
        """Space dimension."""
        return self.grid.dim

    @property
    def flat(self) -> np.ndarray:
        """Node values in flat (lexicographic) order."""
        return self.values.ravel()

    def value(self, points: Point) -> np.ndarray:
        """Extended multilinear interpolant at an ``(n, d)`` array of points."""
        if self._interpolator is None:
            self._interpolator = RegularGridInterpolator(
                (self.grid.axis,) * self.grid.dim, self.values, method="linear"
            )
        array = np.asarray(points, dtype=float).reshape(-1, self.grid.dim)
        return self._interpolator(self.grid.wrap(array))

    def at(self, x: Point) -> float:
        """Scalar value at one point inside the box."""
        if not self.grid.contains(x):
            raise OutsideBoxError(
                f"point {x!r} lies outside the box of {self.grid!r}",
                point=np.atleast_1d(np.asarray(x, dtype=float)),
            )
        return float(self.value(np.atleast_1d(np.asarray(x, dtype=float)))[0])

    @property
    def far_mean(self) -> Optional[float]:
        """Mean over a period for periodic grids; None for clamped ones."""
        if self.grid.extension != PERIODIC:
            return None
        core = self.values[(slice(0, -1),) * self.grid.dim]
        return float(core.mean())

    def far_deviation(self, x: Point, radius: float) -> float:
        """Bound of |u - far_mean| away from ``x``."""
        del x, radius
        mean = self.far_mean
        if mean is None:
            return 2.0 * self.sup_bound
        return float(np.max(np.abs(self.values - mean)))

    def with_values(
        self, values: np.ndarray, *, sup_bound: Optional[float] = None
    ) -> "GridFunction":
        """New function on the same grid."""
        return GridFunction(self.grid, values, sup_bound=sup_bound)

    def _check_grid(self, other: "GridFunction") -> None:
        if not self.grid.same_as(other.grid):
            raise InconsistentGridsError(f"{self.grid!r} differs from {other.grid!r}")

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.grid, -self.values, sup_bound=self.sup_bound)

    def __add__(self, other: Union["GridFunction", float]) -> "GridFunction":
        if isinstance(other, GridFunction):
            self._check_grid(other)
            return GridFunction(self.grid, self.values + other.values)
        return GridFunction(self.grid, self.values + float(other))

    def __sub__(self, other: Union["GridFunction", float]) -> "GridFunction":
        if isinstance(other, GridFunction):
            return self + (-other)
        return self + (-float(other))

    def __iter__(self) -> Iterator[Tuple[np.ndarray, float]]:
        return zip(self.grid.nodes, self.flat)

    def __repr__(self) -> str:
        return f"GridFunction({self.grid!r}, sup_bound={self.sup_bound:.3g})"
