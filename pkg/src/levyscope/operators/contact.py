"""src/levyscope/operators/contact.py

Discrete contact points between grid functions and smooth probes.

A node x is a contact of kind ``max`` when u - phi attains its maximum over
the grid nodes of the closed ball B(x, radius) at x, and of kind ``min``
when u - phi attains its minimum there.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from levyscope.exceptions import NotContactPointError
from levyscope.operators.grid import GridFunction
from levyscope.operators.probes import TestFunction

__all__ = [
    "MAX",
    "MIN",
    "CONTACT_TOL",
    "ContactCertificate",
    "contact_mask",
    "certify_contact",
]

MAX = "max"
MIN = "min"

CONTACT_TOL = 1e-12


@dataclass(frozen=True)
class ContactCertificate:
    """
    Witness that u - probe is extremal at a node over a ball.

    Attributes:
        node: Flat grid index of the contact.
        x: Coordinates of the contact node.
        probe: The touching probe.
        radius: Ball radius of the contact.
        kind: ``max`` or ``min``.
        gap: Smallest margin by which other nodes of the ball stay below
            (``max``) or above (``min``) the contact value.
    """

    node: int
    x: np.ndarray
    probe: TestFunction
    radius: float
    kind: str
    gap: float

    @property
    def slope(self) -> np.ndarray:
        """Gradient of the probe at the contact."""
        return self.probe.gradient(self.x)

    def matches(
        self, x: Union[float, Sequence[float], np.ndarray], p: Sequence[float]
    ) -> bool:
        """Whether the certificate covers the point ``x`` with slope ``p``."""
        point = np.atleast_1d(np.asarray(x, dtype=float))
        slope = np.atleast_1d(np.asarray(p, dtype=float))
        if point.shape != self.x.shape:
            return False
        scale = 1.0 + float(np.max(np.abs(self.x)))
        if np.max(np.abs(point - self.x)) > 1e-12 * scale:
            return False
        allowed = 1e-9 * (1.0 + float(np.max(np.abs(slope))))
        return bool(np.max(np.abs(slope - self.slope)) <= allowed)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {
            "node": self.node,
            "x": self.x.tolist(),
            "probe": self.probe.describe(),
            "radius": self.radius,
            "kind": self.kind,
            "gap": self.gap,
        }


def contact_mask(
    difference: GridFunction,
    radius: Optional[float],
    kind: str,
    *,
    tol: float = CONTACT_TOL,
) -> np.ndarray:
    """
    Nodes where ``difference`` is extremal over its ball.

    Args:
        difference: Node values of u - phi.
        radius: Ball radius; None means the whole box.
        kind: ``max`` or ``min``.
        tol: Slack allowed in the comparison.

    Returns:
        Boolean array of shape ``grid.shape``.
    """
    values = difference.values if kind == MAX else -difference.values
    if radius is None:
        return values >= values.max() - tol
    grid = difference.grid
    mask = np.ones(grid.shape, dtype=bool)
    padded_shape = tuple(n + 2 * grid.n for n in grid.shape)
    padded = np.full(padded_shape, -np.inf)
    core = tuple(slice(grid.n, 2 * grid.n) for _ in grid.shape)
    padded[core] = values
    for offset in grid.offsets(radius):
        if max(abs(o) for o in offset) >= grid.n:
            continue
        window = tuple(slice(grid.n + o, 2 * grid.n + o) for o in offset)
        mask &= padded[window] <= values + tol
    return mask


def certify_contact(
    u: GridFunction,
    probe: TestFunction,
    x: Union[float, Sequence[float], np.ndarray],
    radius: Optional[float],
    kind: str = MAX,
    *,
    tol: float = CONTACT_TOL,
) -> ContactCertificate:
    """
    Certificate that ``x`` is a discrete contact of u and ``probe``.

    Raises:
        NotContactPointError: If ``x`` is not a node or is not extremal.
    """
    grid = u.grid
    node = grid.nearest(x)
    point = grid.nodes[node]
    requested = np.atleast_1d(np.asarray(x, dtype=float))
    if np.max(np.abs(point - requested)) > 1e-9 * grid.h:
        raise NotContactPointError(f"{x!r} is not a grid node", point=requested)
    difference = u.flat - probe.value(grid.nodes)
    signed = difference if kind == MAX else -difference
    if radius is None:
        others = np.delete(signed, node)
    else:
        center = np.asarray(grid.index(node))
        neighbors = []
        for offset in grid.offsets(radius):
            if not any(offset):
                continue
            multi = center + np.asarray(offset)
            if np.all((multi >= 0) & (multi < grid.n)):
                neighbors.append(grid.flat_index(multi))
        others = signed[neighbors]
    gap = float(signed[node] - others.max()) if others.size else float("inf")
    if gap < -tol:
        raise NotContactPointError(
            f"u - probe is not a discrete {kind} at {point.tolist()} (gap {gap:.3e})",
            point=point,
        )
    return ContactCertificate(
        node=node,
        x=point.copy(),
        probe=probe,
        radius=float(radius or np.inf),
        kind=kind,
        gap=gap,
    )
