"""src/levyscope/exceptions.py

Levyscope Exceptions hierarchy.
"""

from typing import List, Optional, Sequence


class LevyscopeError(Exception):
    """Base exception for all Levyscope errors."""


class MeasureError(LevyscopeError):
    """General exception for Levy measure errors."""


class ZeroPointError(MeasureError):
    """A density was requested at the origin, where measures carry no mass."""

    def __init__(self, message: str = "Density is undefined at z = 0"):
        super().__init__(message)


class NoDensityError(MeasureError):
    """The measure is atomic and has no Lebesgue density."""


class InvalidMeasureError(MeasureError):
    """Measure parameters violate the constructor invariants."""


class QuadratureError(LevyscopeError):
    """
    Base exception for quadrature construction and usage.
    """


class TolUnreachableError(QuadratureError):
    """The requested tolerance needs more refinement levels than allowed."""


class RuleMismatchError(QuadratureError):
    """A quadrature rule was used with a split radius it was not built for."""


class GridError(LevyscopeError):
    """
    Errors related to grids and grid functions.
    """


class OutsideBoxError(GridError):
    """
    An evaluation point lies outside the grid box.

    Attributes:
        point: Coordinates of the offending point (if known).
    """

    def __init__(self, message: str, *, point: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.point = None if point is None else [float(c) for c in point]


class GridTooCoarseError(GridError):
    """The grid does not resolve the unit ball of the convolutions."""


class InconsistentGridsError(GridError):
    """Grid functions of a family do not share the same grid."""


class ViscosityError(LevyscopeError):
    """Exception raised for viscosity verification errors."""


class NotContactPointError(ViscosityError):
    """
    The point carries no contact certificate for the requested limit.

    Attributes:
        point: Coordinates of the witness point (if known).
    """

    def __init__(self, message: str, *, point: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.point = None if point is None else [float(c) for c in point]


class InvalidSampleError(ViscosityError):
    """A structural audit sample is not ordered as the audit requires."""


class NumericalError(LevyscopeError):
    """
    Base exception for numerical failures of schemes and limits.
    """


class CFLViolationError(NumericalError):
    """Time step exceeds the monotonicity bound of the explicit scheme."""


class NonMonotoneSchemeError(NumericalError):
    """A discrete coefficient that must be nonnegative is negative."""


class LimitUndecidedError(NumericalError):
    """A dyadic limit neither stabilized nor certified divergence."""


class NonConvergenceError(NumericalError):
    """
    Iteration budget exhausted before the residual tolerance was met.

    Attributes:
        residuals: Sup-norm residual history of the failed run.
    """

    def __init__(self, message: str, residuals: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.residuals: List[float] = list(residuals or [])


class ConfigError(LevyscopeError):
    """
    Invalid run configuration.

    Attributes:
        field: Dotted configuration key at fault (if known).
        line: Line number in the configuration file (if known).
    """

    def __init__(
        self, message: str, *, field: Optional[str] = None, line: Optional[int] = None
    ):
        location = ""
        if field is not None:
            location = f"{field}: "
        if line is not None:
            location = f"line {line}: {location}"
        super().__init__(f"{location}{message}")
        self.field = field
        self.line = line
