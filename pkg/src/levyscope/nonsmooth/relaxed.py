"""src/levyscope/nonsmooth/relaxed.py

Discrete half-relaxed limits of grid function families.

For a family u^eps sorted by decreasing eps, level j of the upper limit is

    S_j(x) = max { u^eps_i(y) : eps_i <= eps_j, |y - x| <= rho(eps_j) }

with rho(eps) = sqrt(eps). Past the finest member eps keeps halving on that
member until rho(eps) < h; the level reached there is pointwise, no later
level differs, and the limit is the stabilized level. The lower limit
mirrors it with minima.
"""

import logging
import math
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from levyscope.exceptions import InconsistentGridsError
from levyscope.operators.grid import GridFunction

__all__ = [
    "UPPER",
    "LOWER",
    "neighborhood_radius",
    "relaxed_limit",
    "relaxed_limit_schedule",
]

logger = logging.getLogger(__name__)

UPPER = "upper"
LOWER = "lower"

Family = Sequence[Tuple[float, GridFunction]]

SCHEDULE_RULE = (
    "rho(eps) = sqrt(eps); eps halved on the finest member until rho < h; "
    "limit read on the stabilized level"
)


def neighborhood_radius(eps: float) -> float:
    """Neighborhood radius rho(eps) = sqrt(eps)."""
    return math.sqrt(eps)


def _check_family(family: Family) -> None:
    if not family:
        raise ValueError("family must not be empty")
    eps = [e for e, _ in family]
    if any(e <= 0 for e in eps):
        raise ValueError("family parameters must be positive")
    if any(a < b for a, b in zip(eps, eps[1:])):
        raise ValueError("family must be sorted by decreasing eps")
    grid = family[0][1].grid
    for _, member in family[1:]:
        if not member.grid.same_as(grid):
            raise InconsistentGridsError(f"{member.grid!r} differs from {grid!r}")


def _neighborhood_extremum(
    values: np.ndarray, member: GridFunction, radius: float
) -> np.ndarray:
    grid = member.grid
    n = grid.n
    padded = np.full(tuple(3 * n for _ in grid.shape), -np.inf)
    padded[tuple(slice(n, 2 * n) for _ in grid.shape)] = values
    result = values.copy()
    for offset in grid.offsets(radius):
        if max(abs(o) for o in offset) >= n:
            continue
        window = tuple(slice(n + o, 2 * n + o) for o in offset)
        result = np.maximum(result, padded[window])
    return result


def _levels(family: Family, flip: float) -> List[Tuple[float, np.ndarray]]:
    """Levels of the schedule, continued past the finest member until rho < h."""
    suffix: List[np.ndarray] = []
    running = np.full(family[0][1].grid.shape, -np.inf)
    for _, member in reversed(family):
        running = np.maximum(running, flip * member.values)
        suffix.append(running)
    suffix.reverse()

    finest = family[-1][1]
    steps = [(eps, values) for (eps, _), values in zip(family, suffix)]
    eps = family[-1][0]
    # halving eps reuses the finest member; the level is pointwise once rho < h
    while neighborhood_radius(eps) >= finest.grid.h:
        eps *= 0.5
        steps.append((eps, suffix[-1]))
    return [
        (eps, _neighborhood_extremum(values, finest, neighborhood_radius(eps)))
        for eps, values in steps
    ]


def _stable_index(levels: List[Tuple[float, np.ndarray]]) -> int:
    """First level from which every later level is unchanged."""
    index = len(levels) - 1
    while index > 0 and np.array_equal(levels[index - 1][1], levels[-1][1]):
        index -= 1
    return index


def relaxed_limit(family: Family, sign: str = UPPER) -> GridFunction:
    """
    Discrete half-relaxed limit of a family.

    The schedule runs through the family's own parameters and then keeps
    halving eps on the finest member until rho(eps) drops below the grid
    spacing. From there on no level changes, and the limit is that
    stabilized level.

    Args:
        family: ``(eps, u^eps)`` pairs sorted by decreasing eps on one grid.
        sign: ``upper`` (limsup*) or ``lower`` (liminf*).

    Returns:
        GridFunction: The stabilized level of the shrinking-neighborhood schedule.

    Raises:
        InconsistentGridsError: If the members do not share a grid.
    """
    if sign not in (UPPER, LOWER):
        raise ValueError(f"sign must be {UPPER!r} or {LOWER!r}, got {sign!r}")
    _check_family(family)
    flip = 1.0 if sign == UPPER else -1.0
    sup_bound = max(member.sup_bound for _, member in family)

    levels = _levels(family, flip)
    for eps, level in levels:
        logger.debug(
            "relaxed %s level eps=%g: extremum %.6g", sign, eps, float(level.max())
        )
    stable = _stable_index(levels)
    logger.debug("relaxed %s limit stable from eps=%g", sign, levels[stable][0])
    return family[-1][1].with_values(flip * levels[stable][1], sup_bound=sup_bound)


def relaxed_limit_schedule(family: Family, sign: str = UPPER) -> Dict[str, Any]:
    """JSON-ready eps / rho schedule of a family, with its stabilized level."""
    if sign not in (UPPER, LOWER):
        raise ValueError(f"sign must be {UPPER!r} or {LOWER!r}, got {sign!r}")
    _check_family(family)
    levels = _levels(family, 1.0 if sign == UPPER else -1.0)
    stable = _stable_index(levels)
    return {
        "eps": [float(eps) for eps, _ in levels],
        "rho": [neighborhood_radius(eps) for eps, _ in levels],
        "members": len(family),
        "stable_level": stable,
        "stable_eps": float(levels[stable][0]),
        "rule": SCHEDULE_RULE,
    }
