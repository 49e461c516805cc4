"""tests/unit/test_builders.py"""

import numpy as np
import pytest

from levyscope.cli.builders import (
    build_budget,
    build_grid,
    build_jump,
    build_measure,
    build_probe,
    build_problem,
    build_settings,
    build_weight,
)
from levyscope.cli.config import parse_config
from levyscope.exceptions import ConfigError
from levyscope.measures import BOUNDED, STABLE, TEMPERED
from levyscope.operators.grid import PERIODIC
from levyscope.operators.jump_maps import IdentityJump, ShearJump
from levyscope.viscosity.nonlinearity import BELLMAN


class TestBuildMeasure:
    """Tests for build_measure."""

    def test_stable_with_angular_pair(self):
        """Test an asymmetric 1D stable measure."""
        text = "measure.kind = stable\nmeasure.alpha = 0.8\nmeasure.angular = 1, 0.5"
        measure = build_measure(parse_config(text))
        assert measure.kind == STABLE
        assert measure.alpha == 0.8
        assert not measure.is_symmetric

    def test_tempered(self):
        """Test a tempered measure."""
        config = parse_config(
            "measure.kind = tempered\nmeasure.gamma_plus = 1\nmeasure.gamma_minus = 2"
        )
        assert build_measure(config).kind == TEMPERED

    def test_bounded_atoms(self):
        """Test atoms are read as point:mass pairs."""
        config = parse_config("measure.kind = bounded\nmeasure.atoms = 0.5:1; -0.5:2")
        measure = build_measure(config)
        assert measure.kind == BOUNDED
        assert [m for _, m in measure.atoms] == [1.0, 2.0]

    @pytest.mark.parametrize(
        "text",
        [
            "measure.kind = stable\nmeasure.alpha = 2.5",
            "measure.kind = bounded\nmeasure.atoms = 0.5",
            "measure.kind = bounded\nmeasure.atoms = 0.5,1:1",
            "measure.kind = bounded\nmeasure.atoms = 0:1",
            "measure.kind = gaussian",
        ],
    )
    def test_invalid_measures(self, text):
        """Test invalid measures surface as ConfigError."""
        with pytest.raises(ConfigError):
            build_measure(parse_config(text))


class TestBuildSettings:
    """Tests for build_settings."""

    def test_defaults(self):
        """Test the default tolerance and unresolved far field."""
        tol, settings = build_settings(parse_config(""))
        assert tol == 1e-6
        assert settings.r_resolved is None

    @pytest.mark.parametrize(
        "text", ["quadrature.tol = 1.5", "quadrature.n_angular = 33"]
    )
    def test_invalid(self, text):
        """Test out-of-range tolerance and odd angular counts."""
        with pytest.raises(ConfigError):
            build_settings(parse_config(text))


class TestBuildGrid:
    """Tests for build_grid."""

    def test_periodic(self):
        """Test the grid section with a periodic extension."""
        config = parse_config(
            "grid.half_width = 1\ngrid.h = 0.25\ngrid.extension = periodic"
        )
        grid = build_grid(config, 1)
        assert grid.n == 9
        assert grid.extension == PERIODIC

    def test_dimension_mismatch(self):
        """Test the grid must live where the measure lives."""
        with pytest.raises(ConfigError, match="R\\^1"):
            build_grid(parse_config("grid.dim = 2"), 1)

    def test_incommensurate_spacing(self):
        """Test 2L/h must be an integer."""
        with pytest.raises(ConfigError) as info:
            build_grid(parse_config("grid.half_width = 1\ngrid.h = 0.3"), 1)
        assert info.value.field == "grid"


class TestCatalogBuilders:
    """Tests for probe, jump and weight builders."""

    def test_probe_parameters(self):
        """Test probe parameters are forwarded."""
        config = parse_config("probe.name = bump\nprobe.radius = 0.5\nprobe.height = 2")
        probe = build_probe(config, "probe", 1)
        assert probe.at(0.0) == pytest.approx(2.0)

    def test_probe_default_and_errors(self):
        """Test the default name and unknown probes."""
        assert build_probe(parse_config(""), "candidate", 1, "cosine").name == "cosine"
        with pytest.raises(ConfigError) as info:
            build_probe(parse_config("probe.name = sawtooth"), "probe", 1)
        assert info.value.line == 1

    def test_jumps(self):
        """Test identity by default and shear parameters."""
        assert isinstance(build_jump(parse_config("")), IdentityJump)
        shear = build_jump(parse_config("jump.name = shear\njump.amplitude = 0.25"))
        assert isinstance(shear, ShearJump)
        assert shear.amplitude == 0.25

    def test_weight(self):
        """Test the default weight map."""
        assert build_weight(parse_config("")).name == "saturated_linear"


class TestBuildProblem:
    """Tests for build_problem and build_budget."""

    def test_bellman_controls(self, atoms):
        """Test controls are read from parallel lists."""
        config = parse_config(
            "problem.kind = bellman\ncontrols.sigma = 0.5; 1\n"
            "controls.drift = 1; -1\ncontrols.source = 0; 0.25"
        )
        problem = build_problem(config, atoms, IdentityJump())
        assert problem.kind == BELLMAN
        assert [c.name for c in problem.controls] == ["a0", "a1"]
        np.testing.assert_array_equal(problem.controls[1].drift_at(np.zeros(1)), [-1.0])
        assert problem.controls[1].source == 0.25

    def test_control_count_mismatch(self, atoms):
        """Test lists of different lengths are rejected."""
        config = parse_config(
            "problem.kind = bellman\ncontrols.sigma = 0.5; 1\ncontrols.source = 0"
        )
        with pytest.raises(ConfigError, match="different numbers"):
            build_problem(config, atoms, IdentityJump())

    def test_invalid_gamma(self, atoms):
        """Test a nonpositive gamma in a stationary problem."""
        with pytest.raises(ConfigError) as info:
            build_problem(parse_config("problem.gamma = 0"), atoms, IdentityJump())
        assert info.value.field == "problem"

    def test_budget(self):
        """Test solver knobs."""
        budget = build_budget(parse_config("solver.tol = 1e-6\nsolver.max_iter = 10"))
        assert (budget.tol, budget.max_iter, budget.max_policies) == (1e-6, 10, 50)
