"""src/levyscope/cli/main.py

Command-line entry point::

    levyscope <subcommand> --config <path> [--seed N] [--out <dir>] [--verbose]

Exit status: 0 on success, 1 when a verification or comparison fails, 2 on
a configuration error, 3 on numerical non-convergence.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

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
from levyscope.cli.config import SUBCOMMANDS, RunConfig, load_config
from levyscope.exceptions import (
    ConfigError,
    LevyscopeError,
    NotContactPointError,
    NumericalError,
    OutsideBoxError,
    QuadratureError,
)
from levyscope.measures import (
    build_quadrature,
    large_ball_moment,
    levy_integral,
    small_ball_moment,
    tail_mass,
    verify_levy_condition,
)
from levyscope.nonsmooth import LOWER, UPPER
from levyscope.operators import (
    MAX,
    MIN,
    GridFunction,
    SplitEvaluation,
    eval_B,
    eval_K,
    eval_levy_ito,
    eval_levy_with_bound,
)
from levyscope.outcomes import is_divergent
from levyscope.solvers import (
    discrete_comparison_test,
    random_ordered_pairs,
    solve_bellman,
    solve_parabolic,
    solve_stationary,
    write_policy_csv,
    write_residuals_csv,
    write_trajectory_csv,
)
from levyscope.utils.serialization import write_csv, write_json
from levyscope.version import __version__
from levyscope.viscosity import (
    BELLMAN,
    FREE_PROBES,
    GLOBAL,
    LOCAL,
    STATIONARY_SEMILINEAR,
    build_probe_bank,
    manufactured_source,
    stability_experiment,
    stationary_semilinear,
    verify_subsolution,
    verify_supersolution,
)

__all__ = ["EXIT_OK", "EXIT_FAILED", "EXIT_CONFIG", "EXIT_NUMERICAL", "run", "main"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

OPERATORS = ("levy", "levy_ito", "K", "B")
VERIFY_KINDS = ("sub", "super")

Runner = Callable[[RunConfig, Path, int], int]


def _delta(config: RunConfig, key: str, default: Optional[float]) -> Optional[float]:
    if default is None:
        value = config.get_optional_float(key, positive=True)
    else:
        value = config.get_float(key, default, positive=True)
    if value is not None and value > 1.0:
        raise ConfigError(f"must lie in (0, 1], got {value}", field=key)
    return value


def _coordinates(grid_dim: int) -> List[str]:
    return ["x", "y"][:grid_dim]


def _write_values(path: Path, u: GridFunction, config: Dict[str, Any]) -> None:
    rows = [
        [float(c) for c in node] + [float(v)] for node, v in zip(u.grid.nodes, u.flat)
    ]
    write_csv(path, _coordinates(u.dim) + ["value"], rows, config)


def _split_row(x: np.ndarray, split: SplitEvaluation) -> List[Any]:
    outer = split.outer.value if is_divergent(split.outer) else float(split.outer)
    return [float(c) for c in x] + [split.inner, outer, split.error_bound]


def run_eval_op(config: RunConfig, out: Path, _seed: int) -> int:
    """Split evaluation of one operator at the configured points."""
    measure = build_measure(config)
    quad_tol, settings = build_settings(config)
    dim = measure.dim
    probe = build_probe(config, "probe", dim, "cosine")
    name = config.get_choice("operator.name", OPERATORS, "levy")
    delta = _delta(config, "operator.delta", 0.5)
    points = config.get_vectors("operator.points", [[0.0] * dim])
    if any(len(x) != dim for x in points):
        raise ConfigError(f"points must lie in R^{dim}", field="operator.points")
    slope = config.get_vector("operator.p") if config.has("operator.p") else None
    jmap = build_jump(config)
    weight = build_weight(config) if name == "B" else None

    rule = build_quadrature(measure, delta, quad_tol, settings)
    rows = []
    for point in points:
        x = np.asarray(point, dtype=float)
        if name == "levy":
            split = eval_levy_with_bound(measure, probe, x, rule)
        elif name == "levy_ito":
            split = eval_levy_ito(measure, jmap, probe, x, slope, delta, rule)
        elif name == "K":
            split = eval_K(measure, jmap, probe, x, delta, rule, p=slope)
        else:
            split = eval_B(measure, jmap, weight, probe, x, delta, rule)
        rows.append(_split_row(x, split))
    resolved = dict(config.resolved)
    header = _coordinates(dim) + ["inner", "outer", "error_bound"]
    write_csv(out / "eval-op.csv", header, rows, resolved)
    write_json(
        out / "eval-op.json",
        {
            "operator": name,
            "probe": probe.describe(),
            "rule": rule.summary(),
            "rows": rows,
        },
        resolved,
    )
    logger.info("evaluated %s at %d points", name, len(rows))
    return EXIT_OK


def run_verify(config: RunConfig, out: Path, seed: int) -> int:
    """Audit a sampled candidate against the stationary model."""
    measure = build_measure(config)
    quad_tol, settings = build_settings(config)
    grid = build_grid(config, measure.dim)
    candidate = build_probe(config, "candidate", measure.dim, "gaussian")
    jmap = build_jump(config)
    kind = config.get_choice("verify.kind", VERIFY_KINDS, "sub")
    delta = _delta(config, "verify.delta", 0.25)
    tol = config.get_float("verify.tol", 0.0, minimum=0.0)
    scope = config.get_choice("verify.scope", (LOCAL, GLOBAL), LOCAL)
    free = config.get_int("verify.free_probes", FREE_PROBES)
    gamma = config.get_float("equation.gamma", 1.0, positive=True)
    nu = config.get_float("equation.nu", 0.0, minimum=0.0)
    source_text = config.get_str("equation.source", "manufactured")
    constant = None
    if source_text != "manufactured":
        constant = config.get_float("equation.source")
    slack = config.get_float("equation.slack", 0.0)

    rule = build_quadrature(measure, delta, quad_tol, settings)
    if constant is None:
        source: Any = manufactured_source(
            candidate, grid, measure, rule, gamma=gamma, nu=nu, jmap=jmap
        ) + slack
    else:
        source = constant + slack
    F = stationary_semilinear(gamma, nu, source)
    audit = verify_subsolution if kind == "sub" else verify_supersolution
    u = grid.sample(candidate)
    bank = build_probe_bank(
        u, MAX if kind == "sub" else MIN, delta=delta, scope=scope, free=free, seed=seed
    )
    report = audit(
        u,
        F,
        measure,
        jmap,
        delta,
        bank,
        tol,
        scope=scope,
        rule=rule,
        quad_tol=quad_tol,
        settings=settings,
    )
    write_json(out / "verify.json", report.to_dict(), dict(config.resolved))
    if not report.passed:
        witness = report.witness
        logger.error(
            "%s audit failed at node %s (F=%.6g)",
            report.kind,
            witness.node if witness else "?",
            witness.F_value if witness else float("nan"),
        )
        return EXIT_FAILED
    logger.info(
        "%s audit: %s over %d contacts",
        report.kind,
        report.verdict,
        len(report.contacts),
    )
    return EXIT_OK


def run_stability(config: RunConfig, out: Path, _seed: int) -> int:
    """Vanishing-viscosity family, relaxed limit and its audit."""
    measure = build_measure(config)
    quad_tol, settings = build_settings(config)
    grid = build_grid(config, measure.dim)
    jmap = build_jump(config)
    problem = build_problem(config, measure, jmap)
    if problem.kind != STATIONARY_SEMILINEAR:
        raise ConfigError(
            "stability runs need a stationary_semilinear problem", field="problem.kind"
        )
    eps_values = config.get_list("stability.eps", [0.1, 0.05, 0.025, 0.0125])
    if not eps_values or min(eps_values) <= 0:
        raise ConfigError("must list positive values", field="stability.eps")
    sign = config.get_choice("stability.sign", (UPPER, LOWER), UPPER)
    delta = _delta(config, "stability.delta", 0.25)
    tol = config.get_float("stability.tol", 0.0, minimum=0.0)
    scope = config.get_choice("stability.scope", (LOCAL, GLOBAL), LOCAL)
    solver_delta = _delta(config, "solver.delta", None)
    budget = build_budget(config)

    def member(eps: float) -> GridFunction:
        viscous = dataclasses.replace(problem, nu=problem.nu + eps)
        return solve_stationary(
            viscous,
            grid,
            solver_delta,
            budget=budget,
            quad_tol=quad_tol,
            settings=settings,
        ).solution

    limit_equation = stationary_semilinear(problem.gamma, problem.nu, problem.source)
    report = stability_experiment(
        member,
        eps_values,
        limit_equation,
        measure,
        jmap=jmap,
        delta=delta,
        tol=tol,
        sign=sign,
        scope=scope,
        quad_tol=quad_tol,
        settings=settings,
    )
    resolved = dict(config.resolved)
    write_json(out / "stability.json", report.to_dict(), resolved)
    _write_values(out / "stability-limit.csv", report.limit, resolved)
    return EXIT_OK if report.passed else EXIT_FAILED


def run_solve(config: RunConfig, out: Path, _seed: int) -> int:
    """Run the solver of the configured problem."""
    measure = build_measure(config)
    quad_tol, settings = build_settings(config)
    grid = build_grid(config, measure.dim)
    jmap = build_jump(config)
    problem = build_problem(config, measure, jmap)
    delta = _delta(config, "solver.delta", None)
    budget = build_budget(config)
    if problem.kind == BELLMAN:
        result = solve_bellman(
            problem, grid, delta, budget=budget, quad_tol=quad_tol, settings=settings
        )
        resolved = dict(config.resolved)
        _write_values(out / "value.csv", result.value, resolved)
        write_policy_csv(out / "policy.csv", grid, result.policy, resolved)
        summary = result.to_dict()
    elif problem.stationary:
        solved = solve_stationary(
            problem, grid, delta, budget=budget, quad_tol=quad_tol, settings=settings
        )
        resolved = dict(config.resolved)
        _write_values(out / "solution.csv", solved.solution, resolved)
        write_residuals_csv(out / "residuals.csv", solved.residuals, resolved)
        summary = solved.to_dict()
    else:
        initial = grid.sample(build_probe(config, "initial", measure.dim, "gaussian"))
        times = config.get_list("problem.times", [problem.horizon])
        dt = config.get_optional_float("solver.dt", positive=True)
        trajectory = solve_parabolic(
            problem,
            initial,
            grid,
            delta,
            times=times,
            dt=dt,
            quad_tol=quad_tol,
            settings=settings,
        )
        resolved = dict(config.resolved)
        write_trajectory_csv(out / "trajectory.csv", trajectory, resolved)
        summary = trajectory.to_dict()
    summary = {"problem": problem.describe(), "grid": grid.describe(), **summary}
    write_json(out / "solve.json", summary, resolved)
    return EXIT_OK


def run_compare(config: RunConfig, out: Path, seed: int) -> int:
    """Seeded ordered pairs through the solver; ordering must survive."""
    measure = build_measure(config)
    quad_tol, settings = build_settings(config)
    grid = build_grid(config, measure.dim)
    jmap = build_jump(config)
    problem = build_problem(config, measure, jmap)
    count = config.get_int("compare.pairs", 10, minimum=1)
    amplitude = config.get_float("compare.amplitude", 1.0, minimum=0.0)
    delta = _delta(config, "solver.delta", None)
    budget = build_budget(config)

    pairs: List[Any]
    if problem.kind == BELLMAN:
        rng = np.random.default_rng(seed)
        pairs = []
        for _ in range(count):
            low = float(rng.uniform(-amplitude, amplitude))
            pairs.append((low, low + float(rng.uniform(0.0, amplitude))))
    else:
        pairs = random_ordered_pairs(grid, count, seed, amplitude=amplitude)
    report = discrete_comparison_test(
        problem, pairs, grid, delta, quad_tol=quad_tol, settings=settings, budget=budget
    )
    write_json(out / "compare.json", report.to_dict(), dict(config.resolved))
    return EXIT_OK if report.passed else EXIT_FAILED


def run_quadrature_report(config: RunConfig, out: Path, _seed: int) -> int:
    """Rules of the measure over a list of split radii."""
    measure = build_measure(config)
    quad_tol, settings = build_settings(config)
    deltas = config.get_list("quadrature.deltas", [1.0, 0.5, 0.25, 0.125])
    if not deltas or min(deltas) <= 0 or max(deltas) > 1:
        raise ConfigError("split radii must lie in (0, 1]", field="quadrature.deltas")

    rules = [build_quadrature(measure, d, quad_tol, settings) for d in deltas]
    condition = verify_levy_condition(measure)
    summaries = []
    for rule in rules:
        summary = rule.summary()
        summary["inner_moment"] = rule.inner_moment()
        summary["small_ball_moment"] = small_ball_moment(measure, 2.0, rule.delta)
        summaries.append(summary)
    report = {
        "levy_condition": condition.to_dict(),
        "levy_integral": levy_integral(measure),
        "tail_mass_1": tail_mass(measure, 1.0),
        "first_moment_beyond_1": large_ball_moment(measure, 1.0),
        "rules": summaries,
    }
    resolved = dict(config.resolved)
    columns = [
        "delta",
        "levels",
        "inner_nodes",
        "outer_nodes",
        "inner_floor",
        "inner_remainder",
        "r_max",
        "tail_bound",
    ]
    rows = [[s[c] for c in columns] for s in summaries]
    write_csv(out / "quadrature.csv", columns, rows, resolved)
    write_json(out / "quadrature.json", report, resolved)
    return EXIT_OK


RUNNERS: Dict[str, Runner] = {
    "eval-op": run_eval_op,
    "verify": run_verify,
    "stability": run_stability,
    "solve": run_solve,
    "compare": run_compare,
    "quadrature-report": run_quadrature_report,
}


def run(
    subcommand: str,
    config: RunConfig,
    *,
    seed: Optional[int] = None,
    out: Optional[str] = None,
) -> int:
    """
    Dispatch one subcommand and map its outcome to an exit status.

    ``seed`` and ``out`` override ``run.seed`` and ``run.out``.
    """
    try:
        if subcommand not in RUNNERS:
            raise ConfigError(f"unknown subcommand {subcommand!r}")
        config.resolved["subcommand"] = subcommand
        resolved_seed = seed if seed is not None else config.get_int("run.seed", 0)
        config.resolved["run.seed"] = resolved_seed
        target = Path(out if out is not None else config.get_str("run.out", "."))
        config.resolved["run.out"] = str(target)
        return RUNNERS[subcommand](config, target, resolved_seed)
    except ConfigError as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except (NumericalError, QuadratureError) as exc:
        logger.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except (NotContactPointError, OutsideBoxError) as exc:
        witness = exc.point if exc.point is not None else "unknown point"
        logger.error("rejected at witness %s: %s", witness, exc)
        return EXIT_FAILED
    except (ValueError, LevyscopeError) as exc:
        logger.error("invalid input: %s", exc)
        return EXIT_CONFIG


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="Run configuration file.")
    common.add_argument("--seed", type=int, default=None, help="Seed of random sweeps.")
    common.add_argument("--out", default=None, help="Output directory.")
    common.add_argument("--verbose", action="store_true", help="Debug logging.")

    parser = argparse.ArgumentParser(
        prog="levyscope",
        description="Split Levy operators, viscosity audits and monotone PIDE solvers.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        commands.add_parser(name, parents=[common], help=RUNNERS[name].__doc__)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Console entry point."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG
    return run(args.subcommand, config, seed=args.seed, out=args.out)


if __name__ == "__main__":
    sys.exit(main())
