"""src/levyscope/cli/builders.py

Library objects from a ``RunConfig``.

Every builder validates its section by constructing the object; library
errors are re-raised as ``ConfigError`` naming the section at fault, so a
run aborts before any computation starts.
"""

from contextlib import contextmanager
from typing import Iterator, List, Optional, Tuple

import numpy as np

from levyscope.cli.config import RunConfig
from levyscope.exceptions import ConfigError, LevyscopeError
from levyscope.measures import (
    BOUNDED,
    STABLE,
    TEMPERED,
    LevyMeasure,
    QuadratureSettings,
    load_angular_csv,
)
from levyscope.operators import (
    CLAMP,
    PERIODIC,
    Grid,
    JumpMap,
    TestFunction,
    WeightMap,
    make_jump_map,
    make_probe,
    make_weight_map,
)
from levyscope.solvers.problem import KINDS, ProblemSpec
from levyscope.utils.budget import SolverBudget
from levyscope.viscosity.nonlinearity import (
    BELLMAN,
    STATIONARY_SEMILINEAR,
    Control,
)

__all__ = [
    "MEASURE_KINDS",
    "EXTENSIONS",
    "invalid",
    "build_measure",
    "build_settings",
    "build_grid",
    "build_probe",
    "build_jump",
    "build_weight",
    "build_problem",
    "build_budget",
]

MEASURE_KINDS = {"stable": STABLE, "tempered": TEMPERED, "bounded": BOUNDED}
EXTENSIONS = {"clamp": CLAMP, "periodic": PERIODIC}
ATOMS_KEY = "measure.atoms"


@contextmanager
def invalid(config: RunConfig, field: str) -> Iterator[None]:
    """Re-raise library validation errors as ``ConfigError`` for ``field``."""
    try:
        yield
    except ConfigError:
        raise
    except (ValueError, OSError, LevyscopeError) as exc:
        entry = config.entries.get(field) or config.entries.get(field + ".name")
        line = entry.line if entry else None
        raise ConfigError(str(exc), field=field, line=line) from exc


def _atoms(config: RunConfig, dim: int) -> List[Tuple[List[float], float]]:
    # "point:mass; point:mass", points comma-separated in 2D
    text = config.get_str(ATOMS_KEY, "")
    atoms = []
    for item in (part.strip() for part in text.split(";")):
        if not item:
            continue
        point, sep, mass = item.partition(":")
        if not sep:
            raise ConfigError(f"atom {item!r} is not 'point:mass'", field=ATOMS_KEY)
        try:
            vector = [float(c) for c in point.split(",")]
            atoms.append((vector, float(mass)))
        except ValueError as exc:
            raise ConfigError(f"malformed atom {item!r}", field=ATOMS_KEY) from exc
        if len(vector) != dim:
            raise ConfigError(
                f"atom {item!r} is not a point of R^{dim}", field=ATOMS_KEY
            )
    return atoms


def build_measure(config: RunConfig) -> LevyMeasure:
    """Measure from the ``measure`` section."""
    kind = MEASURE_KINDS[config.get_choice("measure.kind", tuple(MEASURE_KINDS))]
    dim = config.get_int("measure.dim", 1, minimum=1)
    with invalid(config, "measure"):
        if kind == STABLE:
            alpha = config.get_float("measure.alpha")
            if config.has("measure.angular_csv"):
                angular = load_angular_csv(config.get_str("measure.angular_csv"))
            else:
                angular = np.asarray(config.get_vector("measure.angular", [1.0]))
            return LevyMeasure.stable(alpha, angular, dim=dim)
        if kind == TEMPERED:
            return LevyMeasure.tempered(
                config.get_float("measure.gamma_plus", positive=True),
                config.get_float("measure.gamma_minus", positive=True),
            )
        return LevyMeasure.bounded(_atoms(config, dim), dim=dim)


def build_settings(config: RunConfig) -> Tuple[float, QuadratureSettings]:
    """Quadrature tolerance and settings from the ``quadrature`` section."""
    defaults = QuadratureSettings()
    tol = config.get_float("quadrature.tol", 1e-6, positive=True)
    if tol >= 1.0:
        raise ConfigError(f"must lie in (0, 1), got {tol}", field="quadrature.tol")
    settings = QuadratureSettings(
        n_gauss=config.get_int("quadrature.n_gauss", defaults.n_gauss, minimum=1),
        n_angular=config.get_int("quadrature.n_angular", defaults.n_angular, minimum=2),
        panel_width=config.get_float(
            "quadrature.panel_width", defaults.panel_width, positive=True
        ),
        r_resolved=config.get_optional_float("quadrature.r_resolved", positive=True),
        max_levels=config.get_int(
            "quadrature.max_levels", defaults.max_levels, minimum=1
        ),
    )
    if settings.n_angular % 2:
        raise ConfigError("must be even", field="quadrature.n_angular")
    return tol, settings


def build_grid(config: RunConfig, dim: int) -> Grid:
    """Grid from the ``grid`` section; the dimension defaults to the measure's."""
    grid_dim = config.get_int("grid.dim", dim, minimum=1)
    if grid_dim != dim:
        raise ConfigError(f"measure lives in R^{dim}", field="grid.dim")
    choice = config.get_choice("grid.extension", tuple(EXTENSIONS), "clamp")
    extension = EXTENSIONS[choice]
    with invalid(config, "grid"):
        return Grid(
            grid_dim,
            config.get_float("grid.half_width", 4.0, positive=True),
            config.get_float("grid.h", 0.05, positive=True),
            extension=extension,
        )


def build_probe(
    config: RunConfig, section: str, dim: int, default: Optional[str] = None
) -> TestFunction:
    """Catalog probe from a parameter section such as ``probe`` or ``initial``."""
    name = config.get_str(section + ".name", default)
    with invalid(config, section):
        return make_probe(name, dim=dim, **config.params(section))


def build_jump(config: RunConfig) -> JumpMap:
    """Jump map from the ``jump`` section (identity by default)."""
    name = config.get_str("jump.name", "identity")
    with invalid(config, "jump"):
        return make_jump_map(name, **config.params("jump"))


def build_weight(config: RunConfig) -> WeightMap:
    """Weight map of operator B from the ``weight`` section."""
    name = config.get_str("weight.name", "saturated_linear")
    with invalid(config, "weight"):
        return make_weight_map(name, **config.params("weight"))


def _controls(config: RunConfig) -> List[Control]:
    sigmas = config.get_list("controls.sigma")
    sources = config.get_list("controls.source", [0.0] * len(sigmas))
    drifts = config.get_vectors("controls.drift", [[0.0]] * len(sigmas))
    if not len(sigmas) == len(sources) == len(drifts):
        raise ConfigError(
            "sigma, source and drift list different numbers of controls",
            field="controls",
        )
    return [
        Control(sigma=s, drift=d[0] if len(d) == 1 else d, source=f, name=f"a{k}")
        for k, (s, d, f) in enumerate(zip(sigmas, drifts, sources))
    ]


def build_problem(
    config: RunConfig,
    measure: LevyMeasure,
    jmap: JumpMap,
    default_kind: str = STATIONARY_SEMILINEAR,
) -> ProblemSpec:
    """Model problem from the ``problem`` and ``controls`` sections."""
    kind = config.get_choice("problem.kind", KINDS, default_kind)
    controls = _controls(config) if kind == BELLMAN else []
    with invalid(config, "problem"):
        return ProblemSpec(
            kind=kind,
            measure=measure,
            nu=config.get_float("problem.nu", 0.0, minimum=0.0),
            gamma=config.get_float("problem.gamma", 1.0),
            source=config.get_float("problem.source", 0.0),
            horizon=config.get_float("problem.horizon", 1.0, positive=True),
            jmap=jmap,
            controls=controls,
            hamiltonian=config.get_float("problem.hamiltonian", 0.5, minimum=0.0),
            slope_bound=config.get_float("problem.slope_bound", 1.0, positive=True),
        )


def build_budget(config: RunConfig) -> SolverBudget:
    """Iteration budget from the ``solver`` section."""
    defaults = SolverBudget()
    return SolverBudget(
        tol=config.get_float("solver.tol", defaults.tol, positive=True),
        max_iter=config.get_int("solver.max_iter", defaults.max_iter, minimum=1),
        max_policies=config.get_int(
            "solver.max_policies", defaults.max_policies, minimum=1
        ),
    )
