"""src/levyscope/viscosity/probe_bank.py

Finite probe banks for the viscosity audits.

A bank replaces "for every test function" with an explicit, reproducible
list. Slope-matched entries are tied to one node and only ever certify a
contact there; free entries (seeded cosines and gaussians, user probes) are
scanned for contacts over the interior of the grid.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from levyscope.operators.contact import MAX, MIN
from levyscope.operators.grid import Grid, GridFunction
from levyscope.operators.probes import Cosine, Gaussian, QuadraticClamped, TestFunction

__all__ = [
    "CURVATURES",
    "FREE_PROBES",
    "LOCAL",
    "GLOBAL",
    "ProbeEntry",
    "build_probe_bank",
    "central_curvature",
    "central_slope",
    "free_probes",
]

CURVATURES = (0.5, 1.0, 2.0, 4.0)
# seeded cosines and gaussians in every default bank
FREE_PROBES = 4

LOCAL = "local"
GLOBAL = "global"


@dataclass
class ProbeEntry:
    """
    One probe of a bank.

    Attributes:
        probe: The smooth test function.
        node: Flat index the probe was matched to, or None for free probes.
        label: Identifier reported with every contact.
    """

    probe: TestFunction
    node: Optional[int] = None
    label: str = ""

    def describe(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {"label": self.label, "node": self.node, "probe": self.probe.describe()}


def central_slope(u: GridFunction, node: int) -> np.ndarray:
    """Central-difference gradient of ``u`` at an interior node."""
    grid = u.grid
    center = np.asarray(grid.index(node))
    slope = np.zeros(grid.dim)
    for axis in range(grid.dim):
        step = np.zeros(grid.dim, dtype=int)
        step[axis] = 1
        forward = u.values[tuple(center + step)]
        backward = u.values[tuple(center - step)]
        slope[axis] = (forward - backward) / (2.0 * grid.h)
    return slope


def central_curvature(u: GridFunction, node: int) -> float:
    """Largest absolute central second difference of ``u`` at an interior node."""
    grid = u.grid
    center = np.asarray(grid.index(node))
    middle = float(u.values[tuple(center)])
    largest = 0.0
    for axis in range(grid.dim):
        step = np.zeros(grid.dim, dtype=int)
        step[axis] = 1
        forward = u.values[tuple(center + step)]
        backward = u.values[tuple(center - step)]
        largest = max(largest, abs(forward - 2.0 * middle + backward) / grid.h**2)
    return float(largest)


def _touching_quadratic(
    u: GridFunction, node: int, curvature: float, kind: str, reach: float
) -> QuadraticClamped:
    grid = u.grid
    x0 = grid.nodes[node]
    p0 = central_slope(u, node)
    signed = curvature if kind == MAX else -curvature
    center = x0 - p0 / signed
    vertex = float(u.flat[node]) - float(p0 @ p0) / (2.0 * signed)
    # the quadratic part must cover the contact ball around x0
    span = float(np.linalg.norm(p0)) / curvature + reach + grid.h
    cap = curvature * span**2 + 2.0 * (u.sup_bound + 1.0)
    return QuadraticClamped(center, vertex, signed, cap, dim=grid.dim)


def free_probes(
    grid: Grid, count: int = FREE_PROBES, seed: int = 0
) -> List[TestFunction]:
    """
    Seeded free probes: cosines and gaussians in turn.

    Wave vectors have components between pi / (2L) and 2 pi / L; gaussians
    are centred uniformly in the box with widths between 4h and L / 2.
    """
    rng = np.random.default_rng(seed)
    scale = math.pi / grid.half_width
    widest = max(0.5 * grid.half_width, 4.0 * grid.h)
    probes: List[TestFunction] = []
    for k in range(count):
        if k % 2 == 0:
            wave = rng.uniform(0.5, 2.0, grid.dim) * scale
            probes.append(Cosine(wave, dim=grid.dim))
        else:
            center = rng.uniform(-grid.half_width, grid.half_width, grid.dim)
            width = rng.uniform(4.0 * grid.h, widest)
            probes.append(Gaussian(center, width, dim=grid.dim))
    return probes


def build_probe_bank(
    u: GridFunction,
    kind: str,
    *,
    delta: float,
    scope: str = LOCAL,
    curvatures: Sequence[float] = CURVATURES,
    nodes: Optional[Sequence[int]] = None,
    free: int = FREE_PROBES,
    seed: int = 0,
    extra: Sequence[TestFunction] = (),
) -> List[ProbeEntry]:
    """
    Slope-matched quadratic probes plus seeded and user free probes.

    For each interior node x0 and each curvature a (capped at 1/h), a
    clamped quadratic with gradient equal to the central slope of ``u`` and
    value u(x0) at x0 touches u from above (``max``) or below (``min``).

    Args:
        u: Sampled candidate.
        kind: ``max`` for subsolution audits, ``min`` for supersolution ones.
        delta: Split radius; sets the contact ball for ``local`` scope.
        scope: ``local`` (ball of radius delta) or ``global`` (whole box).
        curvatures: Curvature sweep before capping.
        nodes: Restrict matching to these flat indices.
        free: Number of seeded cosine and gaussian probes.
        seed: Seed of the free probes.
        extra: User probes appended last.

    Returns:
        List[ProbeEntry]: Matched entries (node, then curvature), then the
        seeded free probes, then ``extra``.
    """
    if kind not in (MAX, MIN):
        raise ValueError(f"kind must be {MAX!r} or {MIN!r}, got {kind!r}")
    if scope not in (LOCAL, GLOBAL):
        raise ValueError(f"scope must be {LOCAL!r} or {GLOBAL!r}, got {scope!r}")
    grid = u.grid
    interior = set(int(i) for i in grid.interior(1))
    if nodes is None:
        chosen = sorted(interior)
    else:
        chosen = [int(i) for i in nodes if int(i) in interior]
    levels = sorted({min(float(a), 1.0 / grid.h) for a in curvatures})
    reach = delta if scope == LOCAL else 2.0 * grid.half_width * math.sqrt(grid.dim)

    bank: List[ProbeEntry] = []
    for node in chosen:
        for a in levels:
            probe = _touching_quadratic(u, node, a, kind, reach)
            bank.append(ProbeEntry(probe, node, f"quadratic[{node}] a={a:g}"))
    for k, probe in enumerate(free_probes(grid, free, seed)):
        bank.append(ProbeEntry(probe, None, f"free {probe.name}[{k}]"))
    for k, probe in enumerate(extra):
        bank.append(ProbeEntry(probe, None, f"{probe.name}[{k}]"))
    return bank
