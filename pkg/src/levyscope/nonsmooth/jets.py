"""src/levyscope/nonsmooth/jets.py

Second-order jets.

Closed-form probes give exact jets. For grid functions the jet is a
least-squares quadratic fit over the two-ring stencil and is flagged as a
diagnostic: it proposes a candidate pair (p, X), it does not prove that the
pair belongs to a semi-jet.
"""

from typing import Any, Dict, Sequence, Union

import numpy as np

from levyscope.operators.grid import GridFunction
from levyscope.operators.probes import TestFunction
from levyscope.utils.validators import check_symmetric

__all__ = ["SemiJet", "jet_probe"]


class SemiJet:
    """
    Pair (p, X) of a slope vector and a symmetric matrix.

    Attributes:
        p: Slope vector.
        X: Symmetric matrix.
        diagnostic: True when the pair comes from a fit of sampled data.
    """

    __slots__ = ("p", "X", "diagnostic")

    def __init__(
        self, p: Sequence[float], X: np.ndarray, *, diagnostic: bool = False
    ) -> None:
        slope = np.atleast_1d(np.asarray(p, dtype=float))
        matrix = check_symmetric("X", np.atleast_2d(np.asarray(X, dtype=float)))
        if matrix.shape != (slope.size, slope.size):
            raise ValueError(f"X must be {slope.size}x{slope.size}, got {matrix.shape}")
        self.p = slope
        self.X = 0.5 * (matrix + matrix.T)
        self.diagnostic = diagnostic

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {
            "p": self.p.tolist(),
            "X": self.X.tolist(),
            "diagnostic": self.diagnostic,
        }

    def __repr__(self) -> str:
        return (
            f"SemiJet(p={self.p.tolist()}, X={self.X.tolist()}, "
            f"diagnostic={self.diagnostic})"
        )


def _fit(u: GridFunction, x: np.ndarray) -> SemiJet:
    grid = u.grid
    node = grid.nearest(x)
    center = np.asarray(grid.index(node))
    if np.any(center < 2) or np.any(center > grid.n - 3):
        raise ValueError("jet fits need the two-ring stencil inside the box")
    dim = grid.dim
    mesh = np.meshgrid(*([np.arange(-2, 3)] * dim), indexing="ij")
    offsets = np.column_stack([m.ravel() for m in mesh])
    w = grid.h * offsets.astype(float)
    samples = np.array([u.values[tuple(center + o)] for o in offsets])

    # columns: 1, w_i, then w_i w_j / (1 + [i == j]) for i <= j
    columns = [np.ones(len(w))] + [w[:, i] for i in range(dim)]
    pairs = [(i, j) for i in range(dim) for j in range(i, dim)]
    for i, j in pairs:
        columns.append(w[:, i] * w[:, j] * (0.5 if i == j else 1.0))
    design = np.column_stack(columns)
    coef, *_ = np.linalg.lstsq(design, samples, rcond=None)
    slope = coef[1 : 1 + dim]
    matrix = np.zeros((dim, dim))
    for k, (i, j) in enumerate(pairs):
        matrix[i, j] = matrix[j, i] = coef[1 + dim + k]
    return SemiJet(slope, matrix, diagnostic=True)


def jet_probe(
    u: Union[GridFunction, TestFunction], x: Union[float, Sequence[float], np.ndarray]
) -> SemiJet:
    """
    Jet of a probe (exact) or of a grid function (diagnostic fit).

    Raises:
        ValueError: If the fitting stencil leaves the box.
    """
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if isinstance(u, TestFunction):
        return SemiJet(u.gradient(point), u.hessian(point))
    return _fit(u, point)
