"""src/levyscope/operators/jump_maps.py

State-dependent jump sizes j(x, z) and bounded weights gamma(x, z).

Each jump map declares the constants the assumption audits compare against:
``lipschitz_x`` (Lipschitz dependence on x) and ``linear_bound``
(|j(x, z)| <= linear_bound |z|).
"""

import math
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, Sequence, Union

import numpy as np

from levyscope.measures.levy_measure import LevyMeasure, large_ball_moment, tail_mass
from levyscope.outcomes import is_divergent

__all__ = [
    "JumpMap",
    "IdentityJump",
    "LinearInZ",
    "ShearJump",
    "CustomJump",
    "WeightMap",
    "ConstantWeight",
    "SaturatedLinearWeight",
    "make_jump_map",
    "make_weight_map",
]

Point = Union[float, Sequence[float], np.ndarray]


def _row(x: Point) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float))


class JumpMap(ABC):
    """
    Jump size j(x, z).

    Attributes:
        name: Catalog name.
        lipschitz_x: Declared Lipschitz constant in x.
        linear_bound: Declared constant of |j(x, z)| <= c |z|.
        odd: Whether j(x, -z) = -j(x, z) exactly.
    """

    __slots__ = ("name", "lipschitz_x", "linear_bound", "odd")

    def __init__(
        self, name: str, lipschitz_x: float, linear_bound: float, odd: bool
    ) -> None:
        self.name = name
        self.lipschitz_x = float(lipschitz_x)
        self.linear_bound = float(linear_bound)
        self.odd = odd

    @abstractmethod
    def apply(self, x: Point, z: np.ndarray) -> np.ndarray:
        """Jumps at one point ``x`` for an ``(m, d)`` array of ``z``."""

    def tail_difference(
        self, x: Point, y: Point, power: float, measure: LevyMeasure, radius: float
    ) -> float:
        """Bound of the integral of |j(x,z) - j(y,z)|^power over |z| > radius."""
        del x, y, power, measure, radius
        return math.inf

    def describe(self) -> Dict[str, Any]:
        """JSON-ready identification."""
        return {
            "name": self.name,
            "lipschitz_x": self.lipschitz_x,
            "linear_bound": self.linear_bound,
        }

    def __repr__(self) -> str:
        return f"JumpMap({self.name})"


class IdentityJump(JumpMap):
    """j(x, z) = z."""

    __slots__ = ()

    def __init__(self) -> None:
        super().__init__("identity", 0.0, 1.0, True)

    def apply(self, x: Point, z: np.ndarray) -> np.ndarray:
        return z

    def tail_difference(
        self, x: Point, y: Point, power: float, measure: LevyMeasure, radius: float
    ) -> float:
        return 0.0


class LinearInZ(JumpMap):
    """j(x, z) = A(x) z with A(x) = a0 I + a1 diag(sin x)."""

    __slots__ = ("a0", "a1")

    def __init__(self, a0: float = 1.0, a1: float = 0.0) -> None:
        super().__init__("linear_in_z", abs(a1), abs(a0) + abs(a1), True)
        self.a0 = float(a0)
        self.a1 = float(a1)

    def matrix(self, x: Point) -> np.ndarray:
        """The matrix field A(x)."""
        point = _row(x)
        return self.a0 * np.eye(point.size) + self.a1 * np.diag(np.sin(point))

    def apply(self, x: Point, z: np.ndarray) -> np.ndarray:
        return z @ self.matrix(x).T

    def tail_difference(
        self, x: Point, y: Point, power: float, measure: LevyMeasure, radius: float
    ) -> float:
        gap = float(np.linalg.norm(self.matrix(x) - self.matrix(y), 2))
        if gap == 0.0:
            return 0.0
        moment = large_ball_moment(measure, power, radius)
        if is_divergent(moment):
            return math.inf
        return gap**power * float(moment)

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "a0": self.a0, "a1": self.a1}


class ShearJump(JumpMap):
    """
    Radial shear j(x, z) = z + b(x) min(|z|, 1) z / |z|.

    b(x) = amplitude * sin(frequency * x_1). The shear saturates at |z| = 1
    so that differences in x stay integrable against heavy tails.
    """

    __slots__ = ("amplitude", "frequency")

    def __init__(self, amplitude: float = 0.5, frequency: float = 1.0) -> None:
        super().__init__(
            "shear", abs(amplitude * frequency), 1.0 + abs(amplitude), True
        )
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)

    def shift(self, x: Point) -> float:
        """The scalar field b(x)."""
        return self.amplitude * math.sin(self.frequency * float(_row(x)[0]))

    def apply(self, x: Point, z: np.ndarray) -> np.ndarray:
        radius = np.linalg.norm(z, axis=1, keepdims=True)
        safe = np.where(radius > 0, radius, 1.0)
        factor = self.shift(x) * np.minimum(radius, 1.0) / safe
        return z + factor * z

    def tail_difference(
        self, x: Point, y: Point, power: float, measure: LevyMeasure, radius: float
    ) -> float:
        gap = abs(self.shift(x) - self.shift(y))
        return gap**power * tail_mass(measure, max(radius, 1.0)) if gap else 0.0

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "b_amp": self.amplitude, "b_freq": self.frequency}


class CustomJump(JumpMap):
    """User supplied j(x, z) with declared constants."""

    __slots__ = ("func",)

    def __init__(
        self,
        func: Callable[[np.ndarray, np.ndarray], np.ndarray],
        *,
        lipschitz_x: float,
        linear_bound: float,
        odd: bool = False,
        name: str = "custom",
    ) -> None:
        super().__init__(name, lipschitz_x, linear_bound, odd)
        self.func = func

    def apply(self, x: Point, z: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(_row(x), z), dtype=float).reshape(z.shape)


class WeightMap(ABC):
    """
    Bounded weight gamma(x, z) of the uncompensated operator.

    Attributes:
        name: Catalog name.
        bound: Constant K of |gamma(x, z)| <= K |z|^order.
        order: Power of |z| by which gamma vanishes at the origin.
    """

    __slots__ = ("name", "bound", "order")

    def __init__(self, name: str, bound: float, order: int) -> None:
        self.name = name
        self.bound = float(bound)
        self.order = order

    @abstractmethod
    def apply(self, x: Point, z: np.ndarray) -> np.ndarray:
        """Weights at one point for an ``(m, d)`` array of ``z``."""

    def describe(self) -> Dict[str, Any]:
        """JSON-ready identification."""
        return {"name": self.name, "bound": self.bound}


class ConstantWeight(WeightMap):
    """gamma(x, z) = c."""

    __slots__ = ("constant",)

    def __init__(self, c: float = 0.0) -> None:
        super().__init__("constant", abs(c), 0)
        self.constant = float(c)

    def apply(self, x: Point, z: np.ndarray) -> np.ndarray:
        return np.full(z.shape[0], self.constant)


class SaturatedLinearWeight(WeightMap):
    """gamma(x, z) = k min(|z|, 1)."""

    __slots__ = ("k",)

    def __init__(self, k: float = 1.0) -> None:
        super().__init__("saturated_linear", abs(k), 1)
        self.k = float(k)

    def apply(self, x: Point, z: np.ndarray) -> np.ndarray:
        return self.k * np.minimum(np.linalg.norm(z, axis=1), 1.0)


def make_jump_map(name: str, **params: Any) -> JumpMap:
    """Catalog jump map by name."""
    catalog: Dict[str, Callable[..., JumpMap]] = {
        "identity": IdentityJump,
        "linear_in_z": LinearInZ,
        "shear": ShearJump,
    }
    if name not in catalog:
        raise ValueError(f"unknown jump map {name!r}; choose from {sorted(catalog)}")
    try:
        return catalog[name](**params)
    except TypeError as exc:
        raise ValueError(f"invalid parameters for jump map {name!r}: {exc}") from exc


def make_weight_map(name: str, **params: Any) -> WeightMap:
    """Catalog weight map by name."""
    catalog: Dict[str, Callable[..., WeightMap]] = {
        "constant": ConstantWeight,
        "saturated_linear": SaturatedLinearWeight,
    }
    if name not in catalog:
        raise ValueError(f"unknown weight map {name!r}; choose from {sorted(catalog)}")
    try:
        return catalog[name](**params)
    except TypeError as exc:
        raise ValueError(f"invalid parameters for weight map {name!r}: {exc}") from exc

