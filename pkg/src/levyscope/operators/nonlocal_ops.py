"""src/levyscope/operators/nonlocal_ops.py

Nonlocal operators and their delta-splitting.

The singular inner part on the ball of radius delta is evaluated on smooth
probes through their Taylor remainder; the ball below the rule's floor adds its
exact second-order term. The outer part accepts any bounded
field (probe or grid function) and a free slope p for the compensator.
Each evaluation carries an error bound built from the rule's inner
remainder, its tail mass and the field's far-field behaviour.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from levyscope.exceptions import (
    LimitUndecidedError,
    NotContactPointError,
    OutsideBoxError,
    RuleMismatchError,
)
from levyscope.measures.levy_measure import (
    STABLE,
    TEMPERED,
    LevyMeasure,
    small_ball_moment,
)
from levyscope.measures.quadrature import (
    QuadratureRule,
    QuadratureSettings,
    build_quadrature,
)
from levyscope.operators.contact import ContactCertificate
from levyscope.operators.grid import GridFunction
from levyscope.operators.jump_maps import IdentityJump, JumpMap, WeightMap
from levyscope.operators.probes import TestFunction
from levyscope.outcomes import Divergent, MaybeDivergent, is_divergent

__all__ = [
    "Field",
    "SplitEvaluation",
    "LimitTrace",
    "eval_levy",
    "eval_levy_with_bound",
    "eval_inner",
    "eval_outer",
    "eval_outer_limit",
    "eval_levy_ito",
    "eval_K",
    "eval_B",
]

logger = logging.getLogger(__name__)

Field = Union[TestFunction, GridFunction]
Point = Union[float, Sequence[float], np.ndarray]

_IDENTITY = IdentityJump()

# compensator modes
_BALL = "ball"
_FULL = "full"
_NONE = "none"

# Jumps shorter than this use the quadratic Taylor term; the difference
# phi(x + j) - phi(x) has no significant digits left against the weights there.
TAYLOR_RADIUS = 1e-5


@dataclass
class SplitEvaluation:
    """
    The two pieces of a split operator at one point.

    Attributes:
        inner: Value on the ball of radius ``delta``.
        outer: Value outside the ball (or ``Divergent.NEG_INFINITY``).
        delta: Split radius.
        error_bound: Combined quadrature, remainder and tail bound.
    """

    inner: float
    outer: MaybeDivergent
    delta: float
    error_bound: float

    @property
    def total(self) -> MaybeDivergent:
        """inner + outer."""
        if is_divergent(self.outer):
            return self.outer
        return self.inner + float(self.outer)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {
            "inner": self.inner,
            "outer": self.outer,
            "delta": self.delta,
            "error_bound": self.error_bound,
        }


@dataclass
class LimitTrace:
    """
    Dyadic sequence behind ``eval_outer_limit``.

    Attributes:
        deltas: Split radii 2^-m used.
        values: Outer values at each radius.
        value: Limit (finite) or ``Divergent.NEG_INFINITY``.
        ratio: Last ratio of consecutive increments.
    """

    deltas: List[float] = field(default_factory=list)
    values: List[float] = field(default_factory=list)
    value: MaybeDivergent = 0.0
    ratio: Optional[float] = None


def _product(a: float, b: float) -> float:
    # 0 * inf counts as 0 here: a vanishing mass kills an unbounded factor
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def _as_point(x: Point, dim: int) -> np.ndarray:
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if point.shape != (dim,):
        raise ValueError(f"expected a point of R^{dim}, got shape {point.shape}")
    return point


def _check_rule(rule: QuadratureRule, delta: float) -> None:
    if rule.delta != delta:
        raise RuleMismatchError(
            f"rule was built for delta={rule.delta}, not delta={delta}"
        )


def _check_box(u: Field, x: np.ndarray) -> None:
    if isinstance(u, GridFunction) and not u.grid.contains(x):
        raise OutsideBoxError(
            f"point {x.tolist()} lies outside the box of {u.grid!r}", point=x
        )


def _tail_first_moments(measure: LevyMeasure, rule: QuadratureRule) -> np.ndarray:
    """Per-direction first moment of the tail beyond ``r_max``."""
    if rule.tail_weights.size == 0:
        return np.zeros(0)
    if measure.kind == STABLE:
        if measure.alpha <= 1.0:
            return np.full(rule.tail_weights.size, math.inf)
        return rule.tail_weights * rule.r_max * measure.alpha / (measure.alpha - 1.0)
    if measure.kind == TEMPERED:
        rates = np.array([measure.gamma_plus, measure.gamma_minus])
        return np.exp(-rates * rule.r_max) / rates
    return np.zeros(rule.tail_weights.size)


def _floor_term(
    phi: TestFunction, x: np.ndarray, rule: QuadratureRule, jmap: JumpMap
) -> Tuple[float, float]:
    """Second-order Taylor term of the ball below the floor, with its bound."""
    if rule.inner_floor == 0.0:
        return 0.0, 0.0
    floor = rule.inner_floor
    live = rule.floor_weights > 0
    if not np.any(live):
        return 0.0, 0.0
    reach = jmap.apply(x, floor * rule.floor_directions[live])
    slopes = reach / floor
    weights = rule.floor_weights[live]
    hessian = phi.hessian(x)
    quadratic = np.einsum("ij,jk,ik->i", slopes, hessian, slopes)
    correction = 0.5 * float(weights @ quadratic)
    # sampled Hessian oscillation on the reach of the floor, doubled
    drift = 2.0 * max(
        float(np.linalg.norm(phi.hessian(x + step) - hessian, 2)) for step in reach
    )
    lin = jmap.linear_bound
    spread = min(drift, phi.hessian_bound) * rule.inner_remainder
    return correction, _product(lin * lin, spread)


def _inner_sum(
    measure: LevyMeasure,
    phi: TestFunction,
    x: np.ndarray,
    rule: QuadratureRule,
    jmap: JumpMap,
    *,
    compensate: bool = True,
    weight: Optional[WeightMap] = None,
) -> Tuple[float, float]:
    if rule.inner_weights.size == 0:
        return 0.0, 0.0
    jumps = jmap.apply(x, rule.inner_nodes)
    base = phi.at(x)
    grad = phi.gradient(x)
    slope = jumps @ grad
    quadratic = 0.5 * np.einsum("ij,jk,ik->i", jumps, phi.hessian(x), jumps)
    short = np.linalg.norm(jumps, axis=1) <= TAYLOR_RADIUS
    integrand = np.where(short, quadratic, phi.value(x + jumps) - base - slope)
    if not compensate:
        integrand = integrand + slope
    if weight is not None:
        integrand = integrand * weight.apply(x, rule.inner_nodes)
    terms = rule.inner_weights * integrand
    value = float(terms.sum())

    lin = jmap.linear_bound
    curvature = 0.5 * phi.hessian_bound * lin * lin
    if weight is None:
        correction, remainder = _floor_term(phi, x, rule, jmap)
        value += correction
    elif rule.inner_floor == 0.0 or weight.bound == 0.0:
        remainder = 0.0
    else:
        # |gamma (phi(x+j) - phi(x))| <= K |z|^order (|grad| lin |z| + curvature |z|^2)
        slope_part = float(np.linalg.norm(grad)) * lin
        low = small_ball_moment(measure, 1.0 + weight.order, rule.inner_floor)
        high = small_ball_moment(measure, 2.0 + weight.order, rule.inner_floor)
        if is_divergent(low) or is_divergent(high):
            remainder = math.inf
        else:
            remainder = weight.bound * (
                _product(slope_part, float(low)) + _product(curvature, float(high))
            )
    error = remainder + rule.tol * float(np.abs(terms).sum())
    return value, error


def _outer_sum(
    measure: LevyMeasure,
    u: Field,
    x: np.ndarray,
    p: np.ndarray,
    rule: QuadratureRule,
    jmap: JumpMap,
    *,
    compensate: str = _BALL,
    weight: Optional[WeightMap] = None,
) -> Tuple[float, float]:
    nodes = rule.outer_nodes
    base = float(u.value(x)[0])
    far_mean = u.far_mean
    error = 0.0
    value = 0.0
    if nodes.shape[0]:
        jumps = jmap.apply(x, nodes)
        values = u.value(x + jumps)
        far = rule.outer_far
        if far_mean is not None and np.any(far):
            values = np.where(far, far_mean, values)
            reach = float(np.min(np.linalg.norm(jumps[far], axis=1)))
            error += float(rule.outer_weights[far].sum()) * u.far_deviation(x, reach)
        integrand = values - base
        skip = rule.symmetric and jmap.odd
        if compensate == _BALL and not skip:
            inside = np.linalg.norm(nodes, axis=1) <= 1.0
            integrand = integrand - np.where(inside, jumps @ p, 0.0)
        elif compensate == _FULL and not skip:
            integrand = integrand - jumps @ p
        if weight is not None:
            integrand = integrand * weight.apply(x, nodes)
        terms = rule.outer_weights * integrand
        value = float(terms.sum())
        error += rule.tol * float(np.abs(terms).sum())

    if rule.tail_bound > 0:
        tail_nodes = rule.r_max * rule.tail_directions
        scale = 1.0
        if weight is not None:
            scale = float(np.max(np.abs(weight.apply(x, tail_nodes))))
        if far_mean is not None:
            tail_jumps = jmap.apply(x, tail_nodes)
            reach = float(np.min(np.linalg.norm(tail_jumps, axis=1)))
            gammas = weight.apply(x, tail_nodes) if weight is not None else 1.0
            value += float(np.sum(rule.tail_weights * gammas)) * (far_mean - base)
            error += scale * rule.tail_bound * u.far_deviation(x, reach)
        else:
            error += scale * _product(2.0 * u.sup_bound, rule.tail_bound)
        if compensate == _FULL and not (rule.symmetric and jmap.odd) and np.any(p):
            moments = _tail_first_moments(measure, rule)
            if np.all(np.isfinite(moments)):
                slopes = jmap.apply(x, tail_nodes) @ p / rule.r_max
                value -= float(np.sum(slopes * moments))
            else:
                error = math.inf
    return value, error


def eval_levy(
    measure: LevyMeasure,
    phi: TestFunction,
    x: Point,
    rule: QuadratureRule,
) -> float:
    """
    Full Levy operator on a smooth probe.

    The integral of phi(x+z) - phi(x) - grad phi(x) . z 1_{|z|<=1} against
    the measure, using ``rule`` at whatever split radius it was built for.
    """
    point = _as_point(x, phi.dim)
    inner, _ = _inner_sum(measure, phi, point, rule, _IDENTITY)
    outer, _ = _outer_sum(measure, phi, point, phi.gradient(point), rule, _IDENTITY)
    return inner + outer


def eval_levy_with_bound(
    measure: LevyMeasure, phi: TestFunction, x: Point, rule: QuadratureRule
) -> SplitEvaluation:
    """``eval_levy`` split into its pieces, with the error bound."""
    return eval_levy_ito(measure, _IDENTITY, phi, x, None, rule.delta, rule)


def eval_inner(
    measure: LevyMeasure,
    phi: TestFunction,
    x: Point,
    delta: float,
    rule: QuadratureRule,
) -> float:
    """Inner operator: the Taylor remainder of phi integrated on B(0, delta)."""
    _check_rule(rule, delta)
    value, _ = _inner_sum(measure, phi, _as_point(x, phi.dim), rule, _IDENTITY)
    return value


def eval_outer(
    measure: LevyMeasure,
    u: Field,
    x: Point,
    p: Point,
    delta: float,
    rule: QuadratureRule,
) -> SplitEvaluation:
    """
    Outer operator of a bounded field outside B(0, delta).

    Returns:
        SplitEvaluation: ``inner`` is 0; ``outer`` and ``error_bound`` carry
        the quadrature value and its tail correction bound.

    Raises:
        RuleMismatchError: If ``rule`` was built for another delta.
        OutsideBoxError: If ``u`` is a grid function and ``x`` leaves its box.
    """
    _check_rule(rule, delta)
    point = _as_point(x, u.dim)
    _check_box(u, point)
    slope = _as_point(p, u.dim)
    value, error = _outer_sum(measure, u, point, slope, rule, _IDENTITY)
    return SplitEvaluation(inner=0.0, outer=value, delta=delta, error_bound=error)


def eval_outer_limit(
    measure: LevyMeasure,
    u: Field,
    x: Point,
    p: Point,
    *,
    certificate: Optional[ContactCertificate],
    tol: float = 1e-6,
    max_level: int = 60,
    min_level: int = 4,
    floor_factor: float = 1e6,
    settings: Optional[QuadratureSettings] = None,
    trace: Optional[LimitTrace] = None,
) -> MaybeDivergent:
    """
    Limit of the outer operator as the split radius shrinks to zero.

    Evaluates the outer operator for delta = 2^-m. The sequence stabilizes
    (a finite limit, extrapolated from the geometric decay of increments)
    or keeps decreasing below ``-floor_factor * (1 + sup_bound)`` with
    relative increments above 10 % (``Divergent.NEG_INFINITY``).

    Raises:
        NotContactPointError: Without a certificate covering (x, p).
        LimitUndecidedError: If neither outcome is reached by ``max_level``.
    """
    point = _as_point(x, u.dim)
    slope = _as_point(p, u.dim)
    certified = (
        certificate is not None
        and certificate.kind == "max"
        and certificate.matches(point, slope)
    )
    if not certified:
        raise NotContactPointError(
            f"no max-contact certificate for x={point.tolist()}", point=point
        )
    trace = trace if trace is not None else LimitTrace()
    floor = -floor_factor * (1.0 + u.sup_bound)
    previous_increment: Optional[float] = None
    for level in range(max_level + 1):
        delta = 2.0**-level
        rule = build_quadrature(measure, delta, tol, settings)
        value = float(eval_outer(measure, u, point, slope, delta, rule).outer)
        trace.deltas.append(delta)
        trace.values.append(value)
        if level == 0:
            continue
        increment = value - trace.values[-2]
        logger.debug(
            "outer limit level %d: value %.6e increment %.3e", level, value, increment
        )
        if (
            value < floor
            and increment < 0
            and abs(increment) > 0.1 * abs(trace.values[-2])
        ):
            trace.value = Divergent.NEG_INFINITY
            trace.ratio = None
            if previous_increment not in (None, 0.0):
                trace.ratio = increment / previous_increment
            return Divergent.NEG_INFINITY
        if previous_increment not in (None, 0.0) and level >= min_level:
            ratio = increment / previous_increment
            trace.ratio = ratio
            if 0.0 <= ratio < 1.0:
                remainder = increment * ratio / (1.0 - ratio)
                if abs(remainder) <= tol * (1.0 + abs(value)):
                    trace.value = value + remainder
                    return trace.value
        elif increment == 0.0 and level >= min_level:
            trace.value = value
            return value
        previous_increment = increment
    raise LimitUndecidedError(
        f"outer limit at x={point.tolist()} undecided after {max_level} dyadic levels"
    )


def eval_levy_ito(
    measure: LevyMeasure,
    jmap: JumpMap,
    phi: TestFunction,
    x: Point,
    p: Optional[Point],
    delta: float,
    rule: QuadratureRule,
    *,
    u: Optional[Field] = None,
) -> SplitEvaluation:
    """
    Split Levy-Ito operator with jumps j(x, z).

    The inner piece integrates the Taylor remainder of ``phi`` along
    j(x, z); the outer piece integrates ``u`` (``phi`` by default) with the
    compensator p . j(x, z) 1_{|z|<=1}, p defaulting to grad phi(x).
    """
    _check_rule(rule, delta)
    point = _as_point(x, phi.dim)
    field_ = phi if u is None else u
    _check_box(field_, point)
    slope = phi.gradient(point) if p is None else _as_point(p, phi.dim)
    inner, inner_error = _inner_sum(measure, phi, point, rule, jmap)
    outer, outer_error = _outer_sum(measure, field_, point, slope, rule, jmap)
    return SplitEvaluation(inner, outer, delta, inner_error + outer_error)


def eval_K(
    measure: LevyMeasure,
    beta_map: JumpMap,
    phi: TestFunction,
    x: Point,
    delta: float,
    rule: QuadratureRule,
    *,
    u: Optional[Field] = None,
    p: Optional[Point] = None,
) -> SplitEvaluation:
    """
    Split compensated operator with jumps beta(x, z).

    phi(x + beta) - phi(x) - grad phi(x) . beta integrated over all of R^d,
    the compensator acting at every jump size.
    """
    _check_rule(rule, delta)
    point = _as_point(x, phi.dim)
    field_ = phi if u is None else u
    _check_box(field_, point)
    slope = phi.gradient(point) if p is None else _as_point(p, phi.dim)
    inner, inner_error = _inner_sum(measure, phi, point, rule, beta_map)
    outer, outer_error = _outer_sum(
        measure, field_, point, slope, rule, beta_map, compensate=_FULL
    )
    return SplitEvaluation(inner, outer, delta, inner_error + outer_error)


def eval_B(
    measure: LevyMeasure,
    beta_map: JumpMap,
    gamma_weight: WeightMap,
    phi: TestFunction,
    x: Point,
    delta: float,
    rule: QuadratureRule,
    *,
    u: Optional[Field] = None,
) -> SplitEvaluation:
    """
    Split weighted operator (phi(x + beta) - phi(x)) gamma(x, z).

    No compensator is applied; integrability near the origin comes from
    the weight.
    """
    _check_rule(rule, delta)
    point = _as_point(x, phi.dim)
    field_ = phi if u is None else u
    _check_box(field_, point)
    inner, inner_error = _inner_sum(
        measure, phi, point, rule, beta_map, compensate=False, weight=gamma_weight
    )
    outer, outer_error = _outer_sum(
        measure,
        field_,
        point,
        np.zeros(phi.dim),
        rule,
        beta_map,
        compensate=_NONE,
        weight=gamma_weight,
    )
    return SplitEvaluation(inner, outer, delta, inner_error + outer_error)
