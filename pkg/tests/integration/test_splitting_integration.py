"""tests/integration/test_splitting_integration.py

Integration tests for the split evaluation of Levy operators.

These runs cross the measure, quadrature, probe and grid layers: the split
radius must not change the value of the operator on smooth probes, and the
outer limit on sampled data must separate integrable kinks from divergent
ones.
"""

import math

import numpy as np
import pytest

from levyscope.measures import LevyMeasure, build_quadrature
from levyscope.operators.contact import certify_contact
from levyscope.operators.grid import PERIODIC, Grid
from levyscope.operators.nonlocal_ops import (
    LimitTrace,
    eval_levy_with_bound,
    eval_outer_limit,
)
from levyscope.operators.probes import Constant, Cosine, Gaussian
from levyscope.outcomes import Divergent, is_divergent

pytestmark = pytest.mark.integration

DELTAS = (1.0, 0.5, 0.25, 0.125)

MEASURES = {
    "stable-0.5": LevyMeasure.stable(0.5),
    "stable-1.5": LevyMeasure.stable(1.5, [1.0, 0.5]),
    "tempered": LevyMeasure.tempered(1.0, 2.0),
    "atoms": LevyMeasure.bounded([(0.5, 1.0), (-0.3, 2.0)]),
}


def _kink_limit(alpha, trace=None):
    measure = LevyMeasure.stable(alpha)
    grid = Grid(1, 2.0, 0.05)
    u = grid.sample(lambda x: -np.minimum(np.abs(x[..., 0]), 1.0))
    certificate = certify_contact(u, Constant(0.0), 0.0, None)
    return eval_outer_limit(measure, u, 0.0, 0.0, certificate=certificate, trace=trace)


class TestSplitIndependence:
    """The total does not depend on the split radius."""

    @pytest.mark.parametrize("name", sorted(MEASURES))
    @pytest.mark.parametrize("probe", [Cosine(1.3), Gaussian(0.2, 0.7)], ids=repr)
    @pytest.mark.parametrize("x", [0.0, 0.4])
    def test_totals_agree_within_bounds(self, name, probe, x):
        """Test every pair of radii agrees within the summed error bounds."""
        measure = MEASURES[name]
        splits = [
            eval_levy_with_bound(measure, probe, x, build_quadrature(measure, d, 1e-6))
            for d in DELTAS
        ]
        for first in splits:
            for second in splits:
                gap = abs(first.total - second.total)
                assert gap <= first.error_bound + second.error_bound + 1e-9

    def test_stable_cosine_symbol(self):
        """Test the split value reproduces the closed-form stable symbol."""
        alpha = 1.5
        measure = LevyMeasure.stable(alpha)
        symbol = -math.pi / (math.gamma(1.0 + alpha) * math.sin(math.pi * alpha / 2.0))
        for delta in DELTAS:
            split = eval_levy_with_bound(
                measure, Cosine(1.0), 0.0, build_quadrature(measure, delta, 1e-8)
            )
            assert split.total == pytest.approx(symbol, abs=1e-4)


class TestOuterLimit:
    """Outer limits on sampled grid data."""

    def test_integrable_kink_has_finite_limit(self):
        """Test -min(|x|, 1) has outer limit -8 when alpha is 0.5."""
        trace = LimitTrace()
        value = _kink_limit(0.5, trace)
        assert not is_divergent(value)
        assert value == pytest.approx(-8.0, abs=1e-3)
        assert trace.deltas[0] == 1.0
        assert all(b < a for a, b in zip(trace.values, trace.values[1:]))

    def test_steep_kink_diverges(self):
        """Test the same kink diverges to -inf when alpha is 1.5."""
        trace = LimitTrace()
        assert _kink_limit(1.5, trace) is Divergent.NEG_INFINITY
        assert trace.value is Divergent.NEG_INFINITY

    def test_smooth_periodic_data_match_symbol(self):
        """Test periodic cosine data give the stable symbol up to interpolation."""
        alpha = 0.5
        measure = LevyMeasure.stable(alpha)
        grid = Grid(1, math.pi, math.pi / 40, extension=PERIODIC)
        u = grid.sample(Cosine(1.0))
        certificate = certify_contact(u, Constant(1.0), 0.0, None)
        value = eval_outer_limit(measure, u, 0.0, 0.0, certificate=certificate)
        symbol = -math.pi / (math.gamma(1.0 + alpha) * math.sin(math.pi * alpha / 2.0))
        assert not is_divergent(value)
        assert value == pytest.approx(symbol, abs=0.1)
