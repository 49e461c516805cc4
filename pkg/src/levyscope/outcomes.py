"""src/levyscope/outcomes.py

Non-error outcomes of integrals and limits that may be infinite.
"""

from enum import Enum
from typing import Union

__all__ = ["Divergent", "MaybeDivergent", "is_divergent"]


class Divergent(Enum):
    """Explicit infinite outcomes; returned, never raised."""

    DIVERGENT = "divergent"
    NEG_INFINITY = "-inf"


MaybeDivergent = Union[float, Divergent]


def is_divergent(value: MaybeDivergent) -> bool:
    """Return True when ``value`` is one of the infinite outcomes."""
    return isinstance(value, Divergent)
