"""src/levyscope/operators/probes.py

Closed-form smooth test functions.

Every probe is bounded on R^d (affine excepted) and exposes its exact value,
gradient and Hessian together with the global bounds the operator error
estimates need. Radially symmetric probes share one implementation driven by
a scalar profile F(s) of s = kappa |x - c|^2.
"""

import math
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from levyscope.utils.validators import check_positive

__all__ = [
    "TestFunction",
    "Cosine",
    "Gaussian",
    "Bump",
    "QuadraticClamped",
    "Localizer",
    "Affine",
    "Constant",
    "SumProbe",
    "make_probe",
]

Vector = Union[float, Sequence[float], np.ndarray]


def _vector(value: Vector, dim: int) -> np.ndarray:
    array = np.atleast_1d(np.asarray(value, dtype=float))
    if array.size == 1 and dim > 1:
        array = np.full(dim, float(array[0]))
    if array.shape != (dim,):
        raise ValueError(f"expected a vector of R^{dim}, got shape {array.shape}")
    return array


def _points(points: Vector, dim: int) -> np.ndarray:
    return np.asarray(points, dtype=float).reshape(-1, dim)


class TestFunction(ABC):
    """
    Base class of smooth probes.

    Subclasses implement ``value`` (vectorized over points), ``gradient``
    and ``hessian`` (single point) and declare ``sup_bound``,
    ``hessian_bound`` and the far-field mean used to close truncated outer
    integrals.
    """

    # keeps pytest from collecting the class
    __test__ = False
    __slots__ = ("dim", "name")

    def __init__(self, dim: int, name: str) -> None:
        if dim not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {dim}")
        self.dim = dim
        self.name = name

    @abstractmethod
    def value(self, points: Vector) -> np.ndarray:
        """Values at an ``(n, d)`` array of points (or a single point)."""

    @abstractmethod
    def gradient(self, x: Vector) -> np.ndarray:
        """Exact gradient at one point."""

    @abstractmethod
    def hessian(self, x: Vector) -> np.ndarray:
        """Exact Hessian at one point."""

    @property
    @abstractmethod
    def sup_bound(self) -> float:
        """Upper bound of |phi| on R^d."""

    @property
    @abstractmethod
    def hessian_bound(self) -> float:
        """Upper bound of the spectral norm of the Hessian on R^d."""

    @property
    def far_mean(self) -> Optional[float]:
        """Mean value far from the origin, or None if undefined."""
        return None

    def far_deviation(self, x: Vector, radius: float) -> float:
        """Bound of |phi(x + z) - far_mean| over |z| >= radius."""
        del x, radius
        return 2.0 * self.sup_bound

    def at(self, x: Vector) -> float:
        """Scalar value at one point."""
        return float(self.value(_points(x, self.dim))[0])

    def shift(self, constant: float) -> "TestFunction":
        """Probe plus a constant."""
        return SumProbe(self, Constant(constant, dim=self.dim))

    def __add__(self, other: "TestFunction") -> "TestFunction":
        return SumProbe(self, other)

    def describe(self) -> Dict[str, Any]:
        """JSON-ready identification of the probe."""
        return {"name": self.name}

    def __repr__(self) -> str:
        params = ", ".join(
            f"{k}={v}" for k, v in self.describe().items() if k != "name"
        )
        return f"{self.name}({params})"


class Cosine(TestFunction):
    """Plane wave cos(k . x)."""

    __slots__ = ("k",)

    def __init__(self, k: Vector = 1.0, *, dim: int = 1) -> None:
        super().__init__(dim, "cosine")
        self.k = _vector(k, dim)

    def value(self, points: Vector) -> np.ndarray:
        return np.cos(_points(points, self.dim) @ self.k)

    def gradient(self, x: Vector) -> np.ndarray:
        return -math.sin(float(_vector(x, self.dim) @ self.k)) * self.k

    def hessian(self, x: Vector) -> np.ndarray:
        phase = float(_vector(x, self.dim) @ self.k)
        return -math.cos(phase) * np.outer(self.k, self.k)

    @property
    def sup_bound(self) -> float:
        return 1.0

    @property
    def hessian_bound(self) -> float:
        return float(self.k @ self.k)

    @property
    def far_mean(self) -> Optional[float]:
        return 0.0 if np.any(self.k != 0) else 1.0

    def far_deviation(self, x: Vector, radius: float) -> float:
        return 1.0 if np.any(self.k != 0) else 0.0

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "k": self.k.tolist()}


class RadialProbe(TestFunction):
    """
    Probe F(s) with s = kappa |x - c|^2.

    Subclasses provide ``_profile`` returning (F, F', F'') on an array of s
    and ``_support`` giving the s beyond which F is constant (or negligible).
    """

    __slots__ = ("center", "kappa", "_hessian_bound")

    def __init__(self, dim: int, name: str, center: Vector, kappa: float) -> None:
        super().__init__(dim, name)
        self.center = _vector(center, dim)
        self.kappa = float(kappa)
        self._hessian_bound: Optional[float] = None

    @abstractmethod
    def _profile(self, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(F, F', F'') on an array of s >= 0."""

    @abstractmethod
    def _support(self) -> float:
        """Value of s beyond which F equals its far value."""

    @property
    def _far_value(self) -> float:
        return float(self._profile(np.array([self._support()]))[0][0])

    def value(self, points: Vector) -> np.ndarray:
        offset = _points(points, self.dim) - self.center
        return self._profile(self.kappa * np.sum(offset**2, axis=1))[0]

    def gradient(self, x: Vector) -> np.ndarray:
        offset = _vector(x, self.dim) - self.center
        _, first, _ = self._profile(np.array([self.kappa * float(offset @ offset)]))
        return 2.0 * self.kappa * float(first[0]) * offset

    def hessian(self, x: Vector) -> np.ndarray:
        offset = _vector(x, self.dim) - self.center
        s = np.array([self.kappa * float(offset @ offset)])
        _, first, second = self._profile(s)
        radial = 2.0 * self.kappa * float(first[0]) * np.eye(self.dim)
        along = 4.0 * self.kappa**2 * float(second[0]) * np.outer(offset, offset)
        return radial + along

    @property
    def sup_bound(self) -> float:
        values = self._profile(np.linspace(0.0, self._support(), 4001))[0]
        return float(np.max(np.abs(values)))

    @property
    def hessian_bound(self) -> float:
        if self._hessian_bound is None:
            s = np.linspace(0.0, self._support(), 4001)
            _, first, second = self._profile(s)
            tangential = np.abs(2.0 * self.kappa * first)
            radial = np.abs(2.0 * self.kappa * first + 4.0 * self.kappa * second * s)
            # sampled maximum, padded for the spacing of the samples
            self._hessian_bound = 1.01 * float(max(tangential.max(), radial.max()))
        return self._hessian_bound

    @property
    def far_mean(self) -> Optional[float]:
        return self._far_value

    def far_deviation(self, x: Vector, radius: float) -> float:
        reach = math.sqrt(self._support() / self.kappa)
        distance = float(np.linalg.norm(_vector(x, self.dim) - self.center))
        if radius - distance >= reach:
            return 0.0
        return 2.0 * self.sup_bound


class Gaussian(RadialProbe):
    """height * exp(-|x - c|^2 / (2 width^2))."""

    __slots__ = ("width", "height")

    def __init__(
        self,
        center: Vector = 0.0,
        width: float = 1.0,
        height: float = 1.0,
        *,
        dim: int = 1,
    ) -> None:
        self.width = check_positive("width", width)
        super().__init__(dim, "gaussian", center, 1.0 / (2.0 * self.width**2))
        self.height = float(height)

    def _profile(self, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        f = self.height * np.exp(-s)
        return f, -f, f

    def _support(self) -> float:
        # exp(-40) is below double precision relative to the peak
        return 40.0

    @property
    def far_mean(self) -> Optional[float]:
        return 0.0

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "center": self.center.tolist(),
            "width": self.width,
            "height": self.height,
        }


class Bump(RadialProbe):
    """Compactly supported height * exp(1 - 1/(1 - |x - c|^2 / radius^2))."""

    __slots__ = ("radius", "height")

    def __init__(
        self,
        center: Vector = 0.0,
        radius: float = 1.0,
        height: float = 1.0,
        *,
        dim: int = 1,
    ) -> None:
        self.radius = check_positive("radius", radius)
        super().__init__(dim, "bump", center, 1.0 / self.radius**2)
        self.height = float(height)

    def _profile(self, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        inside = s < 1.0
        t = np.where(inside, 1.0 - s, 1.0)
        f = np.where(inside, self.height * np.exp(1.0 - 1.0 / t), 0.0)
        first = -f / t**2
        second = f / t**4 - 2.0 * f / t**3
        return f, first, second

    def _support(self) -> float:
        return 1.0

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "center": self.center.tolist(),
            "radius": self.radius,
            "height": self.height,
        }


class QuadraticClamped(RadialProbe):
    """
    v0 + (a/2)|x - c|^2 near the center, saturating at v0 + sign(a) cap.

    The quadratic is exact while its deviation from v0 stays below cap/2.
    A C^2 quartic blend P(t) = 2t - 2t^3 + t^4 in s = |x - c|^2 then carries
    the deviation to cap.
    """

    __slots__ = ("vertex_value", "curvature", "cap", "_s0", "_blend")

    def __init__(
        self,
        center: Vector = 0.0,
        vertex_value: float = 0.0,
        curvature: float = 1.0,
        cap: float = 1.0,
        *,
        dim: int = 1,
    ) -> None:
        if curvature == 0:
            raise ValueError("curvature must be nonzero")
        check_positive("cap", cap)
        super().__init__(dim, "quadratic_clamped", center, 1.0)
        self.vertex_value = float(vertex_value)
        self.curvature = float(curvature)
        self.cap = float(cap)
        self._s0 = cap / abs(curvature)
        self._blend = 2.0 * cap / abs(curvature)

    def _profile(self, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        sign = math.copysign(1.0, self.curvature)
        half = 0.5 * self.cap
        t = np.clip((s - self._s0) / self._blend, 0.0, 1.0)
        blend = half + half * (2.0 * t - 2.0 * t**3 + t**4)
        blend_first = half * (2.0 - 6.0 * t**2 + 4.0 * t**3) / self._blend
        blend_second = half * (-12.0 * t + 12.0 * t**2) / self._blend**2
        quadratic = s <= self._s0
        deviation = np.where(quadratic, 0.5 * abs(self.curvature) * s, blend)
        first = np.where(quadratic, 0.5 * abs(self.curvature), blend_first)
        second = np.where(quadratic, 0.0, blend_second)
        return self.vertex_value + sign * deviation, sign * first, sign * second

    def _support(self) -> float:
        return self._s0 + self._blend

    @property
    def sup_bound(self) -> float:
        return abs(self.vertex_value) + self.cap

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "center": self.center.tolist(),
            "vertex_value": self.vertex_value,
            "curvature": self.curvature,
            "cap": self.cap,
        }


class Localizer(RadialProbe):
    """
    Localization function psi(beta x).

    Vanishes on |beta x| <= 1, equals ``level + 1`` on |beta x| >= 2 and
    joins the two with a quintic smoothstep in s = |beta x|^2.
    """

    __slots__ = ("beta", "level")

    def __init__(self, beta: float = 1.0, level: float = 1.0, *, dim: int = 1) -> None:
        self.beta = check_positive("beta", beta)
        super().__init__(dim, "localizer", np.zeros(dim), self.beta**2)
        self.level = float(level)

    @property
    def top(self) -> float:
        """Constant value outside the radius 2 / beta."""
        return self.level + 1.0

    def _profile(self, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        t = np.clip((s - 1.0) / 3.0, 0.0, 1.0)
        inside = (s > 1.0) & (s < 4.0)
        step = 6.0 * t**5 - 15.0 * t**4 + 10.0 * t**3
        first = np.where(inside, (30.0 * t**4 - 60.0 * t**3 + 30.0 * t**2) / 3.0, 0.0)
        second = np.where(inside, (120.0 * t**3 - 180.0 * t**2 + 60.0 * t) / 9.0, 0.0)
        return self.top * step, self.top * first, self.top * second

    def _support(self) -> float:
        return 4.0

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "beta": self.beta, "level": self.level}


class Affine(TestFunction):
    """p . x + c (unbounded; evaluated directly on every node)."""

    __slots__ = ("slope", "offset")

    def __init__(
        self, slope: Vector = 0.0, offset: float = 0.0, *, dim: int = 1
    ) -> None:
        super().__init__(dim, "affine")
        self.slope = _vector(slope, dim)
        self.offset = float(offset)

    def value(self, points: Vector) -> np.ndarray:
        return _points(points, self.dim) @ self.slope + self.offset

    def gradient(self, x: Vector) -> np.ndarray:
        return self.slope.copy()

    def hessian(self, x: Vector) -> np.ndarray:
        return np.zeros((self.dim, self.dim))

    @property
    def sup_bound(self) -> float:
        return abs(self.offset) if not np.any(self.slope) else math.inf

    @property
    def hessian_bound(self) -> float:
        return 0.0

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "p": self.slope.tolist(), "c": self.offset}


class Constant(TestFunction):
    """The constant c."""

    __slots__ = ("constant",)

    def __init__(self, c: float = 0.0, *, dim: int = 1) -> None:
        super().__init__(dim, "constant")
        self.constant = float(c)

    def value(self, points: Vector) -> np.ndarray:
        return np.full(_points(points, self.dim).shape[0], self.constant)

    def gradient(self, x: Vector) -> np.ndarray:
        return np.zeros(self.dim)

    def hessian(self, x: Vector) -> np.ndarray:
        return np.zeros((self.dim, self.dim))

    @property
    def sup_bound(self) -> float:
        return abs(self.constant)

    @property
    def hessian_bound(self) -> float:
        return 0.0

    @property
    def far_mean(self) -> Optional[float]:
        return self.constant

    def far_deviation(self, x: Vector, radius: float) -> float:
        return 0.0

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "c": self.constant}


class SumProbe(TestFunction):
    """Pointwise sum of two probes."""

    __slots__ = ("left", "right")

    def __init__(self, left: TestFunction, right: TestFunction) -> None:
        if left.dim != right.dim:
            raise ValueError("cannot add probes of different dimensions")
        super().__init__(left.dim, "sum")
        self.left = left
        self.right = right

    def value(self, points: Vector) -> np.ndarray:
        return self.left.value(points) + self.right.value(points)

    def gradient(self, x: Vector) -> np.ndarray:
        return self.left.gradient(x) + self.right.gradient(x)

    def hessian(self, x: Vector) -> np.ndarray:
        return self.left.hessian(x) + self.right.hessian(x)

    @property
    def sup_bound(self) -> float:
        return self.left.sup_bound + self.right.sup_bound

    @property
    def hessian_bound(self) -> float:
        return self.left.hessian_bound + self.right.hessian_bound

    @property
    def far_mean(self) -> Optional[float]:
        left, right = self.left.far_mean, self.right.far_mean
        if left is None or right is None:
            return None
        return left + right

    def far_deviation(self, x: Vector, radius: float) -> float:
        return self.left.far_deviation(x, radius) + self.right.far_deviation(x, radius)

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "terms": [self.left.describe(), self.right.describe()],
        }


_CATALOG = {
    "cosine": Cosine,
    "gaussian": Gaussian,
    "bump": Bump,
    "quadratic_clamped": QuadraticClamped,
    "localizer": Localizer,
    "affine": Affine,
    "constant": Constant,
}


def make_probe(name: str, *, dim: int = 1, **params: Any) -> TestFunction:
    """
    Build a catalog probe by name.

    Raises:
        ValueError: For an unknown name or invalid parameters.
    """
    try:
        factory = _CATALOG[name]
    except KeyError as exc:
        raise ValueError(
            f"unknown probe {name!r}; choose from {sorted(_CATALOG)}"
        ) from exc
    try:
        return factory(dim=dim, **params)
    except TypeError as exc:
        raise ValueError(f"invalid parameters for probe {name!r}: {exc}") from exc
