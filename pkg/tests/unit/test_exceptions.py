"""tests/unit/test_exceptions.py"""

import pytest

from levyscope.exceptions import (
    CFLViolationError,
    ConfigError,
    GridError,
    GridTooCoarseError,
    InconsistentGridsError,
    InvalidMeasureError,
    InvalidSampleError,
    LevyscopeError,
    LimitUndecidedError,
    MeasureError,
    NoDensityError,
    NonConvergenceError,
    NonMonotoneSchemeError,
    NotContactPointError,
    NumericalError,
    OutsideBoxError,
    QuadratureError,
    RuleMismatchError,
    TolUnreachableError,
    ViscosityError,
    ZeroPointError,
)
from levyscope.outcomes import Divergent, is_divergent


def test_exception_hierarchy():
    """Verify the inheritance structure of Levyscope exceptions."""
    assert issubclass(MeasureError, LevyscopeError)
    assert issubclass(ZeroPointError, MeasureError)
    assert issubclass(NoDensityError, MeasureError)
    assert issubclass(InvalidMeasureError, MeasureError)
    assert issubclass(TolUnreachableError, QuadratureError)
    assert issubclass(RuleMismatchError, QuadratureError)
    assert issubclass(OutsideBoxError, GridError)
    assert issubclass(GridTooCoarseError, GridError)
    assert issubclass(InconsistentGridsError, GridError)
    assert issubclass(NotContactPointError, ViscosityError)
    assert issubclass(InvalidSampleError, ViscosityError)
    assert issubclass(CFLViolationError, NumericalError)
    assert issubclass(NonMonotoneSchemeError, NumericalError)
    assert issubclass(LimitUndecidedError, NumericalError)
    assert issubclass(NonConvergenceError, NumericalError)
    assert issubclass(ConfigError, LevyscopeError)
    assert not issubclass(ConfigError, NumericalError)


def test_zero_point_error_default_message():
    """Verify that ZeroPointError has a default message."""
    with pytest.raises(ZeroPointError) as exc_info:
        raise ZeroPointError()
    assert "z = 0" in str(exc_info.value)


def test_non_convergence_error_carries_residuals():
    """Verify the residual trace travels with the exception."""
    error = NonConvergenceError("stuck", (1.0, 0.5, 0.4))
    assert error.residuals == [1.0, 0.5, 0.4]
    assert NonConvergenceError("stuck").residuals == []


def test_config_error_location():
    """Verify field and line are part of the message."""
    error = ConfigError("must be positive", field="grid.h", line=7)
    assert error.field == "grid.h"
    assert error.line == 7
    assert str(error) == "line 7: grid.h: must be positive"
    assert str(ConfigError("bad")) == "bad"


@pytest.mark.parametrize("error", [NotContactPointError, OutsideBoxError])
def test_witness_point(error):
    """Verify witness errors keep the offending point as floats."""
    assert error("rejected", point=(1, 0.5)).point == [1.0, 0.5]
    assert error("rejected").point is None


def test_divergent_outcomes_are_values():
    """Verify infinite outcomes are enum values, not floats."""
    assert is_divergent(Divergent.NEG_INFINITY)
    assert is_divergent(Divergent.DIVERGENT)
    assert not is_divergent(float("-inf"))
    assert not is_divergent(0.0)
