"""src/levyscope/viscosity/stability.py

Desk-scale stability experiment: the half-relaxed limit of a family of
subsolutions (supersolutions) is audited as a subsolution (supersolution)
of the limit equation.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence

from levyscope.measures import LevyMeasure, QuadratureSettings
from levyscope.nonsmooth.relaxed import UPPER, relaxed_limit, relaxed_limit_schedule
from levyscope.operators.grid import GridFunction
from levyscope.operators.jump_maps import JumpMap
from levyscope.viscosity.nonlinearity import Nonlinearity
from levyscope.viscosity.probe_bank import LOCAL, ProbeEntry
from levyscope.viscosity.verify import (
    VerificationReport,
    verify_subsolution,
    verify_supersolution,
)

__all__ = ["StabilityReport", "stability_experiment"]

logger = logging.getLogger(__name__)


@dataclass
class StabilityReport:
    """
    Outcome of a stability experiment.

    Attributes:
        sign: ``upper`` (subsolution family) or ``lower`` (supersolutions).
        schedule: eps / neighborhood radius schedule of the relaxed limit.
        limit: The relaxed limit on the family grid.
        verification: Audit of the limit against the limit equation.
    """

    sign: str
    schedule: Dict[str, Any]
    limit: GridFunction
    verification: VerificationReport
    members: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Verdict of the audit."""
        return self.verification.passed

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return {
            "sign": self.sign,
            "schedule": self.schedule,
            "limit_sup": self.limit.sup_bound,
            "members": self.members,
            "verification": self.verification.to_dict(),
        }


def stability_experiment(
    family_builder: Callable[[float], GridFunction],
    eps_values: Sequence[float],
    F: Nonlinearity,
    measure: LevyMeasure,
    *,
    jmap: Optional[JumpMap] = None,
    delta: float = 0.25,
    probe_bank: Optional[Sequence[ProbeEntry]] = None,
    tol: float = 0.0,
    sign: str = UPPER,
    scope: str = LOCAL,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
) -> StabilityReport:
    """
    Build the family, take its relaxed limit and audit it.

    Args:
        family_builder: Map eps -> member of the family on a common grid.
        eps_values: Family parameters, any order.
        F: Limit nonlinearity (the fixed F or its vanishing-viscosity limit).
        measure: Levy measure.
        sign: ``upper`` audits limsup* as a subsolution, ``lower`` audits
            liminf* as a supersolution.

    Raises:
        ValueError: If ``eps_values`` is empty or not positive.
    """
    ordered = sorted((float(e) for e in eps_values), reverse=True)
    if not ordered:
        raise ValueError("eps_values must not be empty")
    family = [(eps, family_builder(eps)) for eps in ordered]
    members = {f"{eps:g}": member.sup_bound for eps, member in family}
    logger.info("stability experiment over %d members, sign %s", len(family), sign)
    limit = relaxed_limit(family, sign)
    audit = verify_subsolution if sign == UPPER else verify_supersolution
    verification = audit(
        limit,
        F,
        measure,
        jmap,
        delta,
        probe_bank,
        tol,
        scope=scope,
        quad_tol=quad_tol,
        settings=settings,
    )
    return StabilityReport(
        sign=sign,
        schedule=relaxed_limit_schedule(family, sign),
        limit=limit,
        verification=verification,
        members=members,
    )
