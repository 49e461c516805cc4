"""src/levyscope/viscosity/assumptions.py

Sampled audits of the structural assumptions behind comparison.

- ellipticity: F is nonincreasing in X (semidefinite order) and in l;
- A1: the jump map is Lipschitz in x in the two integral senses and
  grows at most linearly in z;
- A2: F is strictly increasing in u with constant gamma;
- A4: F is Lipschitz in l.

The matrix-continuity assumption is existential and is not sampled; the
shipped catalog is attested instead (see ``catalog_attestation``).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from levyscope.exceptions import InvalidSampleError
from levyscope.measures import (
    LevyMeasure,
    QuadratureSettings,
    build_quadrature,
    levy_integral,
    tail_mass,
)
from levyscope.operators.jump_maps import JumpMap
from levyscope.viscosity.nonlinearity import (
    BELLMAN,
    STATIONARY_SEMILINEAR,
    Nonlinearity,
)

__all__ = [
    "SAMPLE_TOL",
    "AuditReport",
    "EllipticitySample",
    "MonotonicitySample",
    "LipschitzSample",
    "ordered_samples",
    "structure_samples",
    "check_ellipticity",
    "check_A1",
    "check_A2_A4",
    "catalog_attestation",
]

logger = logging.getLogger(__name__)

SAMPLE_TOL = 1e-12


@dataclass
class AuditReport:
    """
    Verdict of one assumption audit.

    Attributes:
        name: Audited assumption.
        passed: Overall verdict.
        checked: Number of samples evaluated.
        failures: Witnesses of every failed sample.
        details: Audit-specific estimates.
    """

    name: str
    passed: bool
    checked: int
    failures: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {
            "name": self.name,
            "pass": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "details": self.details,
        }


@dataclass
class EllipticitySample:
    """Ordered pair (M, l1) >= (N, l2) at a fixed (x, u, p)."""

    x: np.ndarray
    u: float
    p: np.ndarray
    M: np.ndarray
    N: np.ndarray
    l1: float
    l2: float


@dataclass
class MonotonicitySample:
    """Ordered pair u >= v at a fixed (x, p, X, l)."""

    x: np.ndarray
    u: float
    v: float
    p: np.ndarray
    X: np.ndarray
    l: float


@dataclass
class LipschitzSample:
    """Two values of l at a fixed (x, u, p, X)."""

    x: np.ndarray
    u: float
    p: np.ndarray
    X: np.ndarray
    l1: float
    l2: float


def _random_symmetric(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim))
    return 0.5 * (a + a.T)


def ordered_samples(
    dim: int, count: int = 32, seed: int = 0
) -> List[EllipticitySample]:
    """Random ordered pairs M = N + B B^T, l1 = l2 + |e|."""
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(count):
        N = _random_symmetric(rng, dim)
        B = rng.normal(size=(dim, dim))
        l2 = float(rng.normal())
        samples.append(
            EllipticitySample(
                x=rng.uniform(-1.0, 1.0, dim),
                u=float(rng.normal()),
                p=rng.normal(size=dim),
                M=N + B @ B.T,
                N=N,
                l1=l2 + abs(float(rng.normal())),
                l2=l2,
            )
        )
    return samples


def structure_samples(
    dim: int, count: int = 32, seed: int = 0
) -> Tuple[List[MonotonicitySample], List[LipschitzSample]]:
    """Random u >= v pairs and l perturbations."""
    rng = np.random.default_rng(seed)
    monotone, lipschitz = [], []
    for _ in range(count):
        x = rng.uniform(-1.0, 1.0, dim)
        p = rng.normal(size=dim)
        X = _random_symmetric(rng, dim)
        v = float(rng.normal())
        u = v + abs(float(rng.normal()))
        monotone.append(MonotonicitySample(x, u, v, p, X, float(rng.normal())))
        w, l1, l2 = (float(t) for t in rng.normal(size=3))
        lipschitz.append(LipschitzSample(x, w, p, X, l1, l2))
    return monotone, lipschitz


def _slack(*values: float) -> float:
    return SAMPLE_TOL * (1.0 + max(abs(v) for v in values))


def check_ellipticity(
    F: Nonlinearity, samples: Sequence[EllipticitySample]
) -> AuditReport:
    """
    Degenerate ellipticity on ordered samples.

    Passes iff F(x, u, p, M, l1) <= F(x, u, p, N, l2) + 1e-12 for every pair.

    Raises:
        InvalidSampleError: If a pair is not ordered.
    """
    failures = []
    for k, s in enumerate(samples):
        gap = np.atleast_2d(s.M) - np.atleast_2d(s.N)
        floor = float(np.min(np.linalg.eigvalsh(0.5 * (gap + gap.T))))
        if floor < -SAMPLE_TOL * (1.0 + float(np.max(np.abs(gap)))) or s.l1 < s.l2:
            raise InvalidSampleError(
                f"sample {k} is not ordered (M - N >= 0, l1 >= l2)"
            )
        upper = F(s.x, s.u, s.p, s.M, s.l1)
        lower = F(s.x, s.u, s.p, s.N, s.l2)
        if upper > lower + SAMPLE_TOL:
            failures.append(
                {
                    "sample": k,
                    "x": np.atleast_1d(s.x).tolist(),
                    "F_M_l1": upper,
                    "F_N_l2": lower,
                }
            )
    if failures:
        logger.warning("ellipticity of %s fails on %d samples", F.name, len(failures))
    return AuditReport("ellipticity", not failures, len(samples), failures)


def check_A2_A4(
    F: Nonlinearity,
    monotone: Sequence[MonotonicitySample],
    lipschitz: Sequence[LipschitzSample],
) -> AuditReport:
    """
    Strict monotonicity in u and Lipschitz continuity in l.

    Passes iff F(u) - F(v) >= gamma (u - v) and
    |F(l1) - F(l2)| <= l_lipschitz |l1 - l2| on every sample, with the
    constants declared by ``F``.

    Raises:
        InvalidSampleError: If a monotonicity sample has u < v.
    """
    failures = []
    for k, s in enumerate(monotone):
        if s.u < s.v:
            raise InvalidSampleError(f"monotonicity sample {k} has u < v")
        high = F(s.x, s.u, s.p, s.X, s.l)
        low = F(s.x, s.v, s.p, s.X, s.l)
        if high - low < F.gamma * (s.u - s.v) - _slack(high, low):
            failures.append(
                {
                    "assumption": "A2",
                    "sample": k,
                    "difference": high - low,
                    "required": F.gamma * (s.u - s.v),
                }
            )
    for k, s in enumerate(lipschitz):
        first = F(s.x, s.u, s.p, s.X, s.l1)
        second = F(s.x, s.u, s.p, s.X, s.l2)
        allowed = F.l_lipschitz * abs(s.l1 - s.l2)
        if abs(first - second) > allowed + _slack(first, second):
            failures.append(
                {
                    "assumption": "A4",
                    "sample": k,
                    "difference": abs(first - second),
                    "allowed": allowed,
                }
            )
    return AuditReport(
        "A2_A4",
        not failures,
        len(monotone) + len(lipschitz),
        failures,
        {"gamma": F.gamma, "l_lipschitz": F.l_lipschitz},
    )


def _declared_constant(measure: LevyMeasure, jmap: JumpMap) -> float:
    lip = jmap.lipschitz_x
    return max(lip**2 * levy_integral(measure), lip * tail_mass(measure, 1.0))


def check_A1(
    measure: LevyMeasure,
    jmap: JumpMap,
    point_pairs: Sequence[Tuple[Sequence[float], Sequence[float]]],
    *,
    c_bar: Optional[float] = None,
    tol: float = 1e-3,
    quad_tol: float = 1e-8,
    settings: Optional[QuadratureSettings] = None,
) -> AuditReport:
    """
    Integral Lipschitz bounds of a jump map.

    For each pair (x, y) the ratios

        int |j(x,z) - j(y,z)|^2 mu(dz) / |x - y|^2
        int_{|z|>1} |j(x,z) - j(y,z)| mu(dz) / |x - y|

    must stay below c_bar (1 + tol). Every quadrature node is also checked
    against |j(x, z)| <= linear_bound |z|.

    Args:
        measure: Levy measure.
        jmap: Jump map under audit.
        point_pairs: Distinct points (x, y).
        c_bar: Declared constant; derived from ``jmap.lipschitz_x`` when None.
        tol: Relative slack on c_bar.
        quad_tol: Tolerance of the quadrature rule split at |z| = 1.
        settings: Quadrature knobs.
    """
    rule = build_quadrature(measure, 1.0, quad_tol, settings)
    declared = _declared_constant(measure, jmap) if c_bar is None else float(c_bar)
    limit = declared * (1.0 + tol) + SAMPLE_TOL
    inner_nodes, outer_nodes = rule.inner_nodes, rule.outer_nodes
    failures: List[Dict[str, Any]] = []

    points: Dict[Tuple[float, ...], np.ndarray] = {}
    for x, y in point_pairs:
        for q in (x, y):
            row = np.atleast_1d(np.asarray(q, dtype=float))
            points.setdefault(tuple(row.tolist()), row)

    moment_sup = 0.0
    all_nodes = np.vstack([inner_nodes, outer_nodes])
    sizes = np.linalg.norm(all_nodes, axis=1)
    for row in points.values():
        inner = jmap.apply(row, inner_nodes)
        moment = float(rule.inner_weights @ np.sum(inner**2, axis=1))
        moment += jmap.linear_bound**2 * rule.inner_remainder
        moment_sup = max(moment_sup, moment)
        lengths = np.linalg.norm(jmap.apply(row, all_nodes), axis=1)
        excess = lengths - jmap.linear_bound * sizes * (1.0 + 1e-9)
        if np.any(excess > 0):
            k = int(np.argmax(excess))
            failures.append(
                {
                    "check": "linear_bound",
                    "x": row.tolist(),
                    "z": all_nodes[k].tolist(),
                    "jump": float(lengths[k]),
                    "bound": jmap.linear_bound * float(sizes[k]),
                }
            )

    ratios = []
    for x, y in point_pairs:
        px = np.atleast_1d(np.asarray(x, dtype=float))
        py = np.atleast_1d(np.asarray(y, dtype=float))
        distance = float(np.linalg.norm(px - py))
        if distance == 0.0:
            raise InvalidSampleError(f"point pair {px.tolist()} has coincident points")
        d_inner = jmap.apply(px, inner_nodes) - jmap.apply(py, inner_nodes)
        d_outer = np.linalg.norm(
            jmap.apply(px, outer_nodes) - jmap.apply(py, outer_nodes), axis=1
        )
        second = float(rule.inner_weights @ np.sum(d_inner**2, axis=1))
        second += float(rule.outer_weights @ d_outer**2)
        second += jmap.tail_difference(px, py, 2.0, measure, rule.r_max)
        first = float(rule.outer_weights @ d_outer)
        first += jmap.tail_difference(px, py, 1.0, measure, rule.r_max)
        ratio_2, ratio_1 = second / distance**2, first / distance
        ratios.append(
            {"x": px.tolist(), "y": py.tolist(), "second": ratio_2, "first": ratio_1}
        )
        if not (ratio_2 <= limit and ratio_1 <= limit):
            failures.append({"check": "lipschitz", **ratios[-1], "c_bar": declared})

    if failures:
        logger.warning("A1 audit of %s fails on %d checks", jmap.name, len(failures))
    return AuditReport(
        "A1",
        not failures and math.isfinite(moment_sup),
        len(points) + len(ratios),
        failures,
        {
            "c_bar": declared,
            "inner_moment_sup": moment_sup,
            "unresolved_moment": rule.inner_remainder,
            "ratios": ratios,
            "jump_map": jmap.describe(),
        },
    )


def catalog_attestation(F: Nonlinearity) -> Dict[str, Any]:
    """
    Attestation of the matrix-continuity assumption for catalog entries.

    The assumption quantifies over moduli of continuity and is not sampled.
    """
    if F.name == STATIONARY_SEMILINEAR:
        status, basis = "attested", "x-independent coefficients, linear in X and l"
    elif F.name == BELLMAN:
        status = "attested"
        basis = "requires globally bounded Lipschitz sigma_a and b_a"
    else:
        status, basis = "not_attested", "outside the shipped catalog"
    return {
        "assumption": "A3",
        "nonlinearity": F.name,
        "status": status,
        "basis": basis,
    }
