import _thread
import threading
from contextlib import contextmanager

import numpy as np
import pytest

from levyscope.measures import LevyMeasure, build_quadrature
from levyscope.operators import Grid


@pytest.fixture
def timeout_context():
    """Fixture providing a timeout context manager for runtime budgets."""

    @contextmanager
    def _timeout_context(seconds):
        def timeout_handler():
            _thread.interrupt_main()

        timer = threading.Timer(seconds, timeout_handler)
        timer.start()
        try:
            yield
        except KeyboardInterrupt:
            pytest.fail(f"Test timed out after {seconds} seconds")
        finally:
            timer.cancel()

    return _timeout_context


@pytest.fixture
def stable_1d():
    """Isotropic 1D stable measure with alpha = 1.5."""
    return LevyMeasure.stable(1.5)


@pytest.fixture
def tempered():
    """Symmetric tempered measure."""
    return LevyMeasure.tempered(1.0, 1.0)


@pytest.fixture
def atoms():
    """Symmetric two-atom measure of total mass 2."""
    return LevyMeasure.bounded([(0.5, 1.0), (-0.5, 1.0)])


@pytest.fixture
def grid_1d():
    """1D grid on [-2, 2] with h = 0.05."""
    return Grid(1, 2.0, 0.05)


@pytest.fixture
def stable_rule(stable_1d):
    """Split rule of the stable fixture at delta = 0.5."""
    return build_quadrature(stable_1d, 0.5, 1e-6)


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(1234)
