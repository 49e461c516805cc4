"""tests/integration/test_viscosity_integration.py

Integration tests for viscosity audits.

Exact solutions are manufactured on periodic grids and audited through the
probe bank; the vanishing-viscosity family is produced by the stationary
solver and its relaxed limits are audited against the inviscid equation.
"""

import numpy as np
import pytest

from levyscope.measures import LevyMeasure, build_quadrature
from levyscope.nonsmooth.relaxed import LOWER, UPPER
from levyscope.operators.contact import MAX, MIN
from levyscope.operators.grid import PERIODIC, Grid
from levyscope.operators.jump_maps import IdentityJump, ShearJump
from levyscope.operators.probes import Cosine
from levyscope.solvers.problem import ProblemSpec
from levyscope.solvers.stationary import solve_stationary
from levyscope.viscosity.assumptions import (
    check_A1,
    check_A2_A4,
    check_ellipticity,
    ordered_samples,
    structure_samples,
)
from levyscope.viscosity.doubling import (
    doubled_variable_surrogate,
    localizer_properties,
)
from levyscope.viscosity.nonlinearity import (
    STATIONARY_SEMILINEAR,
    Control,
    bellman,
    parabolic_interface,
    stationary_semilinear,
)
from levyscope.viscosity.probe_bank import build_probe_bank
from levyscope.viscosity.stability import stability_experiment
from levyscope.viscosity.verify import (
    manufactured_source,
    verify_subsolution,
    verify_supersolution,
)

pytestmark = pytest.mark.integration

VISCOSITIES = (0.1, 0.05, 0.025, 0.0125)


def _source(x):
    return 0.5 * np.cos(np.pi * x[0])


def _manufactured(measure, jmap):
    grid = Grid(1, 1.0, 0.02, extension=PERIODIC)
    w = Cosine(np.pi)
    rule = build_quadrature(measure, 0.25, 1e-6)
    source = manufactured_source(w, grid, measure, rule, jmap=jmap)
    return grid.sample(w), source, rule


class TestManufacturedSolutions:
    """Exact solutions pass both audits."""

    @pytest.mark.parametrize(
        "measure,jmap",
        [
            (LevyMeasure.stable(0.7), IdentityJump()),
            (LevyMeasure.stable(1.5), ShearJump(0.3, 2.0)),
            (LevyMeasure.tempered(1.0, 2.0), IdentityJump()),
        ],
        ids=["stable-0.7", "stable-1.5-shear", "tempered"],
    )
    def test_both_audits_pass(self, measure, jmap):
        """Test the manufactured cosine is both a sub- and a supersolution."""
        u, source, rule = _manufactured(measure, jmap)
        F = stationary_semilinear(1.0, 0.0, source)
        nodes = range(5, u.grid.size, 15)
        for audit, kind in ((verify_subsolution, MAX), (verify_supersolution, MIN)):
            bank = build_probe_bank(u, kind, delta=0.25, nodes=nodes, free=0)
            report = audit(u, F, measure, jmap, 0.25, bank, 0.05, rule=rule)
            assert report.passed, report.witness.to_dict()
            assert report.verdict == "pass"

    def test_free_probes_pass(self):
        """Test seeded cosines and gaussians alone pass on the exact solution."""
        measure = LevyMeasure.stable(0.7)
        u, source, rule = _manufactured(measure, IdentityJump())
        F = stationary_semilinear(1.0, 0.0, source)
        for audit, kind in ((verify_subsolution, MAX), (verify_supersolution, MIN)):
            bank = build_probe_bank(u, kind, delta=0.25, nodes=[], free=8)
            report = audit(u, F, measure, None, 0.25, bank, 0.05, rule=rule)
            assert report.verdict == "pass"
            assert all(record.probe_id.startswith("free") for record in report.contacts)

    def test_wrong_source_is_caught(self):
        """Test lowering the source by 3 breaks the subsolution property."""
        measure = LevyMeasure.stable(0.7)
        u, source, rule = _manufactured(measure, IdentityJump())
        lowered = stationary_semilinear(1.0, 0.0, source - 3.0)
        bank = build_probe_bank(u, MAX, delta=0.25, nodes=range(5, u.grid.size, 15))
        report = verify_subsolution(
            u, lowered, measure, None, 0.25, bank, 0.05, rule=rule
        )
        assert not report.passed
        assert report.witness.F_value > 2.0


@pytest.fixture(scope="module")
def viscous_family():
    """Stationary solutions with viscosity nu = eps on an atom measure."""
    measure = LevyMeasure.bounded([(0.5, 1.0), (-0.5, 1.0)])
    grid = Grid(1, 1.0, 0.05)
    members = {}
    for eps in VISCOSITIES:
        problem = ProblemSpec(STATIONARY_SEMILINEAR, measure, nu=eps, source=_source)
        members[eps] = solve_stationary(problem, grid).solution
    return measure, members


class TestVanishingViscosity:
    """Relaxed limits of viscous solutions solve the inviscid equation."""

    @pytest.mark.parametrize("sign", [UPPER, LOWER])
    def test_limit_passes(self, viscous_family, sign):
        """Test the relaxed limit passes against the nu = 0 equation."""
        measure, members = viscous_family
        F = stationary_semilinear(1.0, 0.0, _source)
        report = stability_experiment(
            members.__getitem__, VISCOSITIES, F, measure, sign=sign, tol=0.05
        )
        assert report.passed
        assert list(report.members) == ["0.1", "0.05", "0.025", "0.0125"]

    def test_members_converge(self, viscous_family):
        """Test consecutive members get closer as eps halves."""
        _, members = viscous_family
        values = [members[eps].values for eps in VISCOSITIES]
        gaps = [float(np.max(np.abs(a - b))) for a, b in zip(values, values[1:])]
        assert gaps[-1] < gaps[0]

    def test_shifted_equation_fails(self, viscous_family):
        """Test the limit fails as a subsolution once the source drops by 3."""
        measure, members = viscous_family
        F = stationary_semilinear(1.0, 0.0, lambda x: _source(x) - 3.0)
        report = stability_experiment(members.__getitem__, VISCOSITIES, F, measure)
        assert not report.passed
        assert report.verification.verdict == "fail"


class TestStructuralAudits:
    """Ellipticity, structure and jump-map audits over the catalog."""

    CATALOG = [
        stationary_semilinear(1.0, 0.2, 0.3),
        parabolic_interface(),
        bellman(1.0, [Control(sigma=0.5), Control(drift=[1.0, -1.0], source=0.5)]),
    ]

    @pytest.mark.parametrize("F", CATALOG, ids=lambda F: F.name)
    def test_ellipticity_in_2d(self, F):
        """Test every catalog nonlinearity is degenerate elliptic in 2D."""
        report = check_ellipticity(F, ordered_samples(2, count=64, seed=11))
        assert report.passed

    def test_structure_of_stationary_in_2d(self):
        """Test monotonicity and Lipschitz bounds hold in 2D."""
        F = stationary_semilinear(2.0, 0.1, 0.0)
        report = check_A2_A4(F, *structure_samples(2))
        assert report.passed

    def test_shear_in_2d(self):
        """Test the saturated shear meets its declared constant in 2D."""
        measure = LevyMeasure.stable(1.2, dim=2)
        pairs = [([0.0, 0.0], [0.4, 0.1]), ([-0.5, 0.3], [0.1, -0.2])]
        report = check_A1(measure, ShearJump(0.5, 1.0), pairs)
        assert report.passed


class TestDoubling:
    """Doubled variables and the localizer across measures."""

    @pytest.mark.parametrize(
        "measure",
        [
            LevyMeasure.stable(0.5),
            LevyMeasure.stable(1.8),
            LevyMeasure.tempered(2.0, 1.0),
        ],
        ids=["stable-0.5", "stable-1.8", "tempered"],
    )
    def test_surrogate_passes(self, measure):
        """Test the doubled-variable inequalities on several measures."""
        for eps in (0.2, 0.1, 0.05):
            report = doubled_variable_surrogate(measure, eps=eps)
            assert report.passed, report.to_dict()

    def test_localizer_on_tempered(self):
        """Test the localizer properties with an exponentially light tail."""
        report = localizer_properties(LevyMeasure.tempered(1.0, 1.0), samples=48)
        assert report.passed
