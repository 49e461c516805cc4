"""src/levyscope/measures/levy_measure.py

Parametric singular Levy measures.

This module provides the three measure families the library works with:
anisotropic alpha-stable measures in one or two dimensions, one-dimensional
tempered measures with exponential tails, and bounded tables of atoms. Closed
forms are used wherever the radial structure allows them.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, special

from levyscope.exceptions import InvalidMeasureError, NoDensityError, ZeroPointError
from levyscope.outcomes import Divergent, MaybeDivergent
from levyscope.utils.validators import check_nonnegative_array

__all__ = [
    "STABLE",
    "TEMPERED",
    "BOUNDED",
    "LevyMeasure",
    "RadialDensity",
    "LevyConditionReport",
    "density",
    "small_ball_moment",
    "large_ball_moment",
    "tail_mass",
    "levy_integral",
    "verify_levy_condition",
    "load_angular_csv",
]

logger = logging.getLogger(__name__)

STABLE = "stable_anisotropic"
TEMPERED = "tempered_1d"
BOUNDED = "bounded_table"

_SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi}


class LevyMeasure:
    """
    Singular positive measure on R^d without mass at the origin.

    Use the ``stable``, ``tempered`` and ``bounded`` constructors rather than
    calling ``__init__`` directly.

    Attributes:
        kind: One of ``stable_anisotropic``, ``tempered_1d``, ``bounded_table``.
        dim: Space dimension (1 or 2).
        alpha: Jump-activity index (stable kind).
        angular: Angular density; ``(g(+1), g(-1))`` in 1D, uniform angle
            samples of ``g(theta)`` in 2D (stable kind).
        gamma_plus: Tempering rate on the positive half-line (tempered kind).
        gamma_minus: Tempering rate on the negative half-line (tempered kind).
        atoms: Tuple of ``(point, mass)`` pairs (bounded kind).
    """

    __slots__ = (
        "kind",
        "dim",
        "alpha",
        "angular",
        "gamma_plus",
        "gamma_minus",
        "atoms",
    )

    def __init__(
        self,
        kind: str,
        dim: int,
        *,
        alpha: float = 0.0,
        angular: Optional[np.ndarray] = None,
        gamma_plus: float = 0.0,
        gamma_minus: float = 0.0,
        atoms: Sequence[Tuple[np.ndarray, float]] = (),
    ) -> None:
        if dim not in (1, 2):
            raise InvalidMeasureError(f"dimension must be 1 or 2, got {dim}")
        self.kind = kind
        self.dim = dim
        self.alpha = float(alpha)
        self.angular = angular if angular is not None else np.zeros(0)
        self.gamma_plus = float(gamma_plus)
        self.gamma_minus = float(gamma_minus)
        self.atoms: Tuple[Tuple[np.ndarray, float], ...] = tuple(atoms)

    @classmethod
    def stable(
        cls,
        alpha: float,
        angular: Union[float, Sequence[float]] = 1.0,
        *,
        dim: int = 1,
    ) -> "LevyMeasure":
        """
        Anisotropic alpha-stable measure g(z/|z|) |z|^{-d-alpha} dz.

        Args:
            alpha: Index in the open interval (0, 2).
            angular: Scalar (isotropic g), the pair ``(g(+1), g(-1))`` in 1D,
                or nonnegative samples of ``g`` on a uniform angle grid in 2D.
            dim: Space dimension.

        Raises:
            InvalidMeasureError: If alpha or the angular density is invalid.
        """
        if not 0.0 < alpha < 2.0:
            raise InvalidMeasureError(f"alpha must lie in (0, 2), got {alpha}")
        try:
            samples = check_nonnegative_array("angular density", np.atleast_1d(angular))
        except ValueError as exc:
            raise InvalidMeasureError(str(exc)) from exc
        if samples.size == 1:
            samples = np.full(2 if dim == 1 else 1, samples[0])
        if dim == 1 and samples.size != 2:
            raise InvalidMeasureError("1D angular density is the pair (g(+1), g(-1))")
        return cls(STABLE, dim, alpha=alpha, angular=samples)

    @classmethod
    def tempered(cls, gamma_plus: float, gamma_minus: float) -> "LevyMeasure":
        """One-dimensional tempered measure e^{-gamma^{+/-}|z|} / |z| dz."""
        if not (gamma_plus > 0 and gamma_minus > 0):
            raise InvalidMeasureError("tempering rates must be positive")
        return cls(TEMPERED, 1, gamma_plus=gamma_plus, gamma_minus=gamma_minus)

    @classmethod
    def bounded(
        cls,
        atoms: Sequence[Tuple[Union[float, Sequence[float]], float]],
        *,
        dim: int = 1,
    ) -> "LevyMeasure":
        """
        Finite measure given as a table of atoms.

        Raises:
            InvalidMeasureError: On an atom at the origin or a negative mass.
        """
        table = []
        for point, mass in atoms:
            vector = np.atleast_1d(np.asarray(point, dtype=float))
            if vector.shape != (dim,):
                raise InvalidMeasureError(f"atom {point!r} is not a point of R^{dim}")
            if not np.any(vector != 0.0):
                raise InvalidMeasureError("atoms at the origin are not allowed")
            if mass < 0:
                raise InvalidMeasureError(f"atom mass must be nonnegative, got {mass}")
            table.append((vector, float(mass)))
        return cls(BOUNDED, dim, atoms=table)

    @property
    def has_density(self) -> bool:
        """Whether the measure is absolutely continuous."""
        return self.kind != BOUNDED

    @property
    def angular_mass(self) -> float:
        """Integral of the angular density over the unit sphere."""
        if self.kind == STABLE:
            if self.dim == 1:
                return float(self.angular[0] + self.angular[1])
            return float(2.0 * math.pi * np.mean(self.angular))
        if self.kind == TEMPERED:
            return 2.0
        return 0.0

    @property
    def is_symmetric(self) -> bool:
        """Whether mu(A) = mu(-A) for every Borel set A."""
        if self.kind == STABLE:
            if self.dim == 1:
                return bool(self.angular[0] == self.angular[1])
            n = self.angular.size
            if n == 1:
                return True
            if n % 2:
                return False
            half = n // 2
            return bool(np.array_equal(self.angular[:half], self.angular[half:]))
        if self.kind == TEMPERED:
            return self.gamma_plus == self.gamma_minus
        remaining = [(p, m) for p, m in self.atoms]
        while remaining:
            point, mass = remaining.pop()
            for index, (other, other_mass) in enumerate(remaining):
                if np.array_equal(other, -point) and other_mass == mass:
                    del remaining[index]
                    break
            else:
                return False
        return True

    def angular_density(self, theta: np.ndarray) -> np.ndarray:
        """Periodic piecewise-linear interpolation of the 2D angular samples."""
        samples = self.angular
        if samples.size == 1:
            return np.full(np.shape(theta), float(samples[0]))
        grid = 2.0 * math.pi * np.arange(samples.size) / samples.size
        period = 2.0 * math.pi
        return np.interp(np.mod(theta, period), grid, samples, period=period)

    def radial_profile(self, r: np.ndarray) -> np.ndarray:
        """
        Angle-integrated radial density.

        For any radial f, the integral of f(|z|) against the measure equals
        the integral over r > 0 of f(r) times this profile.
        """
        radius = np.asarray(r, dtype=float)
        if self.kind == STABLE:
            return self.angular_mass * radius ** (-1.0 - self.alpha)
        if self.kind == TEMPERED:
            return (
                np.exp(-self.gamma_plus * radius) + np.exp(-self.gamma_minus * radius)
            ) / radius
        raise NoDensityError("atomic measures have no radial profile")

    def __repr__(self) -> str:
        if self.kind == STABLE:
            return f"LevyMeasure.stable(alpha={self.alpha}, dim={self.dim})"
        if self.kind == TEMPERED:
            return f"LevyMeasure.tempered({self.gamma_plus}, {self.gamma_minus})"
        return f"LevyMeasure.bounded({len(self.atoms)} atoms, dim={self.dim})"


@dataclass(frozen=True)
class RadialDensity:
    """
    Measure given only through an angle-integrated radial profile.

    Used to audit candidate densities (for instance the alpha = 2 boundary
    |z|^{-d-2}) that the parametric families refuse to construct.

    Attributes:
        dim: Space dimension.
        profile: Vectorized map r -> angle-integrated density at radius r.
        name: Label used in reports.
    """

    dim: int
    profile: Callable[[np.ndarray], np.ndarray]
    name: str = "radial"

    @classmethod
    def power_law(cls, dim: int, order: float) -> "RadialDensity":
        """Isotropic density |z|^{-d-order}."""
        area = _SPHERE_AREA[dim]
        return cls(
            dim=dim,
            profile=lambda r: area * np.asarray(r, dtype=float) ** (-1.0 - order),
            name=f"|z|^-(d+{order})",
        )


@dataclass
class LevyConditionReport:
    """
    Outcome of the Levy integrability audit.

    Attributes:
        finite: Whether the integral of min(|z|^2, 1) is finite.
        estimate: Value of that integral (``inf`` when divergent).
        singularity_order: Detected order a of a |z|^{-d-a} singularity at 0.
        level_contributions: Dyadic annulus contributions (numerical path).
    """

    finite: bool
    estimate: float
    singularity_order: Optional[float] = None
    level_contributions: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        """JSON-ready view."""
        return {
            "finite": self.finite,
            "estimate": self.estimate,
            "singularity_order": self.singularity_order,
        }


def density(measure: LevyMeasure, z: Union[float, Sequence[float]]) -> float:
    """
    Lebesgue density of the measure at a point.

    Raises:
        ZeroPointError: If ``z`` is the origin.
        NoDensityError: For atomic measures.
    """
    point = np.atleast_1d(np.asarray(z, dtype=float))
    if not np.any(point != 0.0):
        raise ZeroPointError()
    if not measure.has_density:
        raise NoDensityError("bounded_table measures are atomic")
    radius = float(np.linalg.norm(point))
    if measure.kind == TEMPERED:
        rate = measure.gamma_plus if point[0] > 0 else measure.gamma_minus
        return math.exp(-rate * radius) / radius
    if measure.dim == 1:
        weight = measure.angular[0] if point[0] > 0 else measure.angular[1]
    else:
        theta = np.array(math.atan2(point[1], point[0]))
        weight = float(measure.angular_density(theta))
    return float(weight) * radius ** (-measure.dim - measure.alpha)


def _lower_gamma_moment(exponent: float, rate: float, delta: float) -> float:
    # int_0^delta z^{exponent-1} e^{-rate z} dz
    scale = rate ** (-exponent) * special.gamma(exponent)
    return float(scale * special.gammainc(exponent, rate * delta))


def small_ball_moment(
    measure: LevyMeasure, exponent: float, delta: float
) -> MaybeDivergent:
    """
    Moment of |z|^exponent on the closed ball of radius ``delta``.

    Returns:
        The integral, or ``Divergent.DIVERGENT`` when it diverges at 0.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if measure.kind == BOUNDED:
        return float(
            sum(
                mass * float(np.linalg.norm(point)) ** exponent
                for point, mass in measure.atoms
                if np.linalg.norm(point) <= delta
            )
        )
    if measure.kind == STABLE:
        if exponent <= measure.alpha:
            return Divergent.DIVERGENT
        gap = exponent - measure.alpha
        return measure.angular_mass * delta**gap / gap
    if exponent <= 0:
        return Divergent.DIVERGENT
    return sum(
        _lower_gamma_moment(exponent, rate, delta)
        for rate in (measure.gamma_plus, measure.gamma_minus)
    )


def large_ball_moment(
    measure: LevyMeasure, exponent: float, radius: float = 1.0
) -> MaybeDivergent:
    """Moment of |z|^exponent outside the ball of radius ``radius``."""
    if measure.kind == BOUNDED:
        return float(
            sum(
                mass * float(np.linalg.norm(point)) ** exponent
                for point, mass in measure.atoms
                if np.linalg.norm(point) > radius
            )
        )
    if measure.kind == STABLE:
        if exponent >= measure.alpha:
            return Divergent.DIVERGENT
        gap = measure.alpha - exponent
        return measure.angular_mass * radius ** (-gap) / gap
    total = 0.0
    for rate in (measure.gamma_plus, measure.gamma_minus):
        if exponent > 0:
            total += float(
                rate ** (-exponent)
                * special.gamma(exponent)
                * special.gammaincc(exponent, rate * radius)
            )
        else:
            total += float(
                integrate.quad(
                    lambda r, s=rate: r ** (exponent - 1.0) * math.exp(-s * r),
                    radius,
                    np.inf,
                )[0]
            )
    return total


def tail_mass(measure: LevyMeasure, radius: float) -> float:
    """Mass of the complement of the closed ball of radius ``radius``."""
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if measure.kind == BOUNDED:
        return float(
            sum(mass for point, mass in measure.atoms if np.linalg.norm(point) > radius)
        )
    if measure.kind == STABLE:
        return measure.angular_mass * radius ** (-measure.alpha) / measure.alpha
    return float(
        special.exp1(measure.gamma_plus * radius)
        + special.exp1(measure.gamma_minus * radius)
    )


def levy_integral(measure: LevyMeasure) -> float:
    """Closed form of the integral of min(|z|^2, 1)."""
    if measure.kind == BOUNDED:
        return float(
            sum(mass * min(float(np.dot(p, p)), 1.0) for p, mass in measure.atoms)
        )
    if measure.kind == STABLE:
        alpha = measure.alpha
        return measure.angular_mass * (1.0 / (2.0 - alpha) + 1.0 / alpha)
    total = 0.0
    for rate in (measure.gamma_plus, measure.gamma_minus):
        total += (1.0 - math.exp(-rate) * (1.0 + rate)) / rate**2
        total += float(special.exp1(rate))
    return total


def _numerical_levy_condition(
    profile: Callable[[np.ndarray], np.ndarray], *, levels: int = 30, window: int = 10
) -> LevyConditionReport:
    contributions: List[float] = []
    for k in range(levels):
        low, high = 2.0 ** (-k - 1), 2.0**-k
        value, _ = integrate.quad(
            lambda r: r * r * float(profile(np.array(r))), low, high
        )
        contributions.append(float(value))
    tail, _ = integrate.quad(
        lambda r: float(profile(np.array(r))), 1.0, np.inf, limit=200
    )
    logger.debug("dyadic Levy contributions: %s", contributions)

    tail_levels = np.arange(levels - window, levels)
    recent = np.asarray(contributions[-window:])
    if np.any(recent <= 0) or not np.all(np.isfinite(recent)):
        if np.all(recent == 0):
            total = float(sum(contributions) + tail)
            return LevyConditionReport(True, total, None, contributions)
        return LevyConditionReport(False, math.inf, None, contributions)
    slope = float(np.polyfit(tail_levels, np.log2(recent), 1)[0])
    order = 2.0 + slope
    if order >= 2.0 - 0.05 or not math.isfinite(tail):
        return LevyConditionReport(False, math.inf, order, contributions)
    ratio = 2.0**slope
    remainder = contributions[-1] * ratio / (1.0 - ratio)
    estimate = float(sum(contributions) + remainder + tail)
    return LevyConditionReport(True, estimate, order, contributions)


def verify_levy_condition(
    measure: Union[LevyMeasure, RadialDensity]
) -> LevyConditionReport:
    """
    Audit the integrability of min(|z|^2, 1).

    Parametric measures use their closed form; radial densities are audited
    through the slope of dyadic annulus contributions near the origin.
    """
    if isinstance(measure, RadialDensity):
        return _numerical_levy_condition(measure.profile)
    order = measure.alpha if measure.kind == STABLE else None
    return LevyConditionReport(True, levy_integral(measure), order)


def load_angular_csv(path: Union[str, Path]) -> np.ndarray:
    """Read angular samples from a one-column CSV of nonnegative reals."""
    values = []
    with Path(path).open(encoding="utf-8", newline="") as handle:
        for row in csv.reader(handle):
            text = row[0].strip() if row else ""
            if not text or text.startswith("#"):
                continue
            try:
                values.append(float(text))
            except ValueError as exc:
                raise InvalidMeasureError(f"invalid angular sample: {text!r}") from exc
    try:
        return check_nonnegative_array("angular samples", values)
    except ValueError as exc:
        raise InvalidMeasureError(str(exc)) from exc
