"""src/levyscope/viscosity/nonlinearity.py

Nonlinearity catalog F(x, u, p, X, l).

Every nonlinearity carries the constants the structural audits check:
``gamma`` (strict monotonicity in u) and ``l_lipschitz`` (Lipschitz
dependence on the nonlocal argument l).
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from levyscope.operators.grid import GridFunction

__all__ = [
    "STATIONARY_SEMILINEAR",
    "PARABOLIC_INTERFACE",
    "BELLMAN",
    "Control",
    "Nonlinearity",
    "stationary_semilinear",
    "parabolic_interface",
    "bellman",
    "custom",
    "as_field",
]

STATIONARY_SEMILINEAR = "stationary_semilinear"
PARABOLIC_INTERFACE = "parabolic_interface"
BELLMAN = "bellman"

Scalar = Union[float, Callable[[np.ndarray], float], GridFunction]
Vector = Union[float, Sequence[float], Callable[[np.ndarray], np.ndarray]]


def as_field(value: Scalar) -> Callable[[np.ndarray], float]:
    """Turn a constant, a callable or a grid function into x -> float."""
    if isinstance(value, GridFunction):
        return value.at
    if callable(value):
        return lambda x: float(value(x))  # type: ignore[operator]
    constant = float(value)
    return lambda x: constant


def _plain(value: Any) -> Any:
    return value if isinstance(value, (int, float)) else type(value).__name__


@dataclass
class Control:
    """
    One control of a Bellman operator.

    Attributes:
        sigma: Scalar diffusion coefficient sigma_a(x).
        drift: Drift vector b_a(x).
        source: Running source f_a(x).
        name: Label used in reports.
    """

    sigma: Scalar = 0.0
    drift: Vector = 0.0
    source: Scalar = 0.0
    name: str = ""

    def sigma_at(self, x: np.ndarray) -> float:
        """sigma_a at one point."""
        return as_field(self.sigma)(x)

    def source_at(self, x: np.ndarray) -> float:
        """f_a at one point."""
        return as_field(self.source)(x)

    def drift_at(self, x: np.ndarray) -> np.ndarray:
        """b_a at one point."""
        point = np.atleast_1d(np.asarray(x, dtype=float))
        value = self.drift(point) if callable(self.drift) else self.drift
        drift = np.atleast_1d(np.asarray(value, dtype=float))
        if drift.size == 1 and point.size > 1:
            drift = np.full(point.size, float(drift[0]))
        return drift

    def describe(self) -> Dict[str, Any]:
        """JSON-ready identification."""
        return {
            "name": self.name,
            "sigma": _plain(self.sigma),
            "drift": _plain(self.drift) if callable(self.drift) else self.drift,
            "source": _plain(self.source),
        }


@dataclass
class Nonlinearity:
    """
    Scalar map F(x, u, p, X, l).

    Attributes:
        name: Catalog name.
        func: The map itself.
        gamma: Declared constant of F(.., u, ..) - F(.., v, ..) >= gamma (u - v).
        l_lipschitz: Declared Lipschitz constant in l.
        nu: Coefficient of the trace term (0 when absent).
        controls: Controls of a Bellman nonlinearity.
        stationary: Whether the equation has no time derivative.
    """

    name: str
    func: Callable[[np.ndarray, float, np.ndarray, np.ndarray, float], float]
    gamma: float = 0.0
    l_lipschitz: float = 1.0
    nu: float = 0.0
    controls: List[Control] = field(default_factory=list)
    stationary: bool = True

    def __call__(
        self,
        x: Union[float, Sequence[float], np.ndarray],
        u: float,
        p: Union[float, Sequence[float], np.ndarray],
        X: Union[float, np.ndarray],
        l: float,
    ) -> float:
        point = np.atleast_1d(np.asarray(x, dtype=float))
        slope = np.atleast_1d(np.asarray(p, dtype=float))
        matrix = np.atleast_2d(np.asarray(X, dtype=float))
        return float(self.func(point, float(u), slope, matrix, float(l)))

    def describe(self) -> Dict[str, Any]:
        """JSON-ready identification."""
        return {
            "name": self.name,
            "gamma": self.gamma,
            "l_lipschitz": self.l_lipschitz,
            "nu": self.nu,
            "controls": [c.describe() for c in self.controls],
        }


def stationary_semilinear(
    gamma: float = 1.0, nu: float = 0.0, source: Scalar = 0.0
) -> Nonlinearity:
    """F = gamma u + |p|^2 / 2 - nu tr X - l - f(x)."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if nu < 0:
        raise ValueError(f"nu must be nonnegative, got {nu}")
    f = as_field(source)

    def func(x: np.ndarray, u: float, p: np.ndarray, X: np.ndarray, l: float) -> float:
        return gamma * u + 0.5 * float(p @ p) - nu * float(np.trace(X)) - l - f(x)

    return Nonlinearity(
        STATIONARY_SEMILINEAR, func, gamma=gamma, l_lipschitz=1.0, nu=nu
    )


def parabolic_interface() -> Nonlinearity:
    """Spatial part |p|^2 / 2 - l of the growing-interface equation."""

    def func(x: np.ndarray, u: float, p: np.ndarray, X: np.ndarray, l: float) -> float:
        return 0.5 * float(p @ p) - l

    return Nonlinearity(
        PARABOLIC_INTERFACE, func, gamma=0.0, l_lipschitz=1.0, stationary=False
    )


def bellman(lam: float, controls: Sequence[Control]) -> Nonlinearity:
    """
    F = lam u + max_a ( -l - sigma_a^2 tr X / 2 - b_a . p - f_a(x) ).

    All controls share one nonlocal term l.
    """
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if not controls:
        raise ValueError("at least one control is required")
    catalog = list(controls)

    def func(x: np.ndarray, u: float, p: np.ndarray, X: np.ndarray, l: float) -> float:
        half = 0.5 * float(np.trace(X))
        worst = max(
            -half * c.sigma_at(x) ** 2 - float(c.drift_at(x) @ p) - c.source_at(x)
            for c in catalog
        )
        return lam * u - l + worst

    return Nonlinearity(BELLMAN, func, gamma=lam, l_lipschitz=1.0, controls=catalog)


def custom(
    func: Callable[[np.ndarray, float, np.ndarray, np.ndarray, float], float],
    *,
    gamma: float = 0.0,
    l_lipschitz: float = 1.0,
    nu: float = 0.0,
    name: str = "custom",
    stationary: bool = True,
    controls: Optional[Sequence[Control]] = None,
) -> Nonlinearity:
    """Nonlinearity from an arbitrary map with declared constants."""
    return Nonlinearity(
        name,
        func,
        gamma=gamma,
        l_lipschitz=l_lipschitz,
        nu=nu,
        controls=list(controls or []),
        stationary=stationary,
    )
