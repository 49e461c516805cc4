"""src/levyscope/viscosity/verify.py

Sub- and supersolution audits of sampled candidates.

At every discrete contact of the candidate u with a probe phi the nonlinearity
is evaluated as

    F(x, u(x), grad phi(x), D^2 phi(x), I_inner[phi](x) + I_outer[grad phi(x), u](x))

and compared with zero up to a tolerance that absorbs quadrature and
first-order interpolation errors.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from levyscope.exceptions import NotContactPointError
from levyscope.measures import (
    LevyMeasure,
    QuadratureRule,
    QuadratureSettings,
    build_quadrature,
)
from levyscope.operators.contact import (
    MAX,
    MIN,
    ContactCertificate,
    certify_contact,
    contact_mask,
)
from levyscope.operators.grid import Grid, GridFunction
from levyscope.operators.jump_maps import IdentityJump, JumpMap
from levyscope.operators.nonlocal_ops import eval_levy_ito
from levyscope.operators.probes import TestFunction
from levyscope.viscosity.assumptions import catalog_attestation
from levyscope.viscosity.nonlinearity import Nonlinearity
from levyscope.viscosity.probe_bank import (
    LOCAL,
    ProbeEntry,
    build_probe_bank,
    central_curvature,
)

__all__ = [
    "PASS",
    "FAIL",
    "NO_CONTACTS",
    "ContactRecord",
    "VerificationReport",
    "find_contacts",
    "verify_subsolution",
    "verify_supersolution",
    "manufactured_source",
]

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
NO_CONTACTS = "no_contacts"

_KINDS = {MAX: "subsolution", MIN: "supersolution"}


@dataclass
class ContactRecord:
    """
    One evaluated contact.

    Attributes:
        node: Flat index of the contact node.
        x: Node coordinates.
        probe_id: Label of the bank entry.
        kind: ``max`` or ``min``.
        p: Probe gradient at x.
        X: Probe Hessian at x.
        l_inner: Inner nonlocal piece of the probe.
        l_outer: Outer nonlocal piece of the candidate.
        error_bound: Quadrature bound of l_inner + l_outer.
        F_value: Value of the nonlinearity.
        tolerance: Slack granted to this contact.
        verdict: ``pass`` or ``fail``.
    """

    node: int
    x: List[float]
    probe_id: str
    kind: str
    p: List[float]
    X: List[List[float]]
    l_inner: float
    l_outer: float
    error_bound: float
    F_value: float
    tolerance: float
    verdict: str

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        return dict(self.__dict__)


@dataclass
class VerificationReport:
    """
    Outcome of a sub- or supersolution audit.

    Attributes:
        kind: ``subsolution`` or ``supersolution``.
        verdict: ``pass``, ``fail`` or ``no_contacts``.
        delta: Split radius.
        scope: ``local`` or ``global`` contact balls.
        tol: Base tolerance.
        contacts: Every evaluated contact, ordered by (probe, node).
        bank: Description of the probe bank.
        nonlinearity: Description of F.
        attestation: Catalog attestation of the matrix-continuity assumption.
    """

    kind: str
    verdict: str
    delta: float
    scope: str
    tol: float
    contacts: List[ContactRecord] = field(default_factory=list)
    bank: List[Dict[str, Any]] = field(default_factory=list)
    nonlinearity: Dict[str, Any] = field(default_factory=dict)
    attestation: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True unless some contact fails."""
        return self.verdict != FAIL

    @property
    def failures(self) -> List[ContactRecord]:
        """Failing contacts."""
        return [c for c in self.contacts if c.verdict == FAIL]

    @property
    def witness(self) -> Optional[ContactRecord]:
        """Contact with the worst F-value relative to its tolerance."""
        if not self.contacts:
            return None
        sign = 1.0 if self.kind == _KINDS[MAX] else -1.0
        return max(self.contacts, key=lambda c: sign * c.F_value - c.tolerance)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view."""
        witness = self.witness
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "delta": self.delta,
            "scope": self.scope,
            "tol": self.tol,
            "contacts": [c.to_dict() for c in self.contacts],
            "witness": witness.to_dict() if witness else None,
            "bank": self.bank,
            "nonlinearity": self.nonlinearity,
            "attestation": self.attestation,
        }


def find_contacts(
    u: GridFunction, entry: ProbeEntry, kind: str, radius: Optional[float]
) -> List[ContactCertificate]:
    """
    Contacts of one bank entry.

    Matched entries are certified at their own node only; free entries are
    scanned over the interior nodes.
    """
    if entry.node is not None:
        try:
            x = u.grid.nodes[entry.node]
            return [certify_contact(u, entry.probe, x, radius, kind)]
        except NotContactPointError:
            return []
    difference = u - u.grid.sample(entry.probe)
    mask = contact_mask(difference, radius, kind).ravel()
    certificates = []
    for node in np.intersect1d(np.flatnonzero(mask), u.grid.interior(1)):
        try:
            certificates.append(
                certify_contact(u, entry.probe, u.grid.nodes[int(node)], radius, kind)
            )
        except NotContactPointError:
            continue
    return certificates


def _free_slack(
    u: GridFunction, probe: TestFunction, node: int, p: np.ndarray
) -> float:
    """Slope error of a free contact, which lies within h of the continuous one."""
    curvature = probe.hessian_bound + central_curvature(u, node)
    reach = 0.5 * u.grid.h * math.sqrt(u.grid.dim)
    return reach * curvature * (1.0 + float(np.max(np.abs(p))))


def _verify(
    u: GridFunction,
    F: Nonlinearity,
    measure: LevyMeasure,
    jmap: Optional[JumpMap],
    delta: float,
    probe_bank: Optional[Sequence[ProbeEntry]],
    tol: float,
    kind: str,
    scope: str,
    rule: Optional[QuadratureRule],
    quad_tol: float,
    settings: Optional[QuadratureSettings],
) -> VerificationReport:
    jmap = jmap or IdentityJump()
    rule = rule or build_quadrature(measure, delta, quad_tol, settings)
    bank = list(probe_bank) if probe_bank is not None else build_probe_bank(
        u, kind, delta=delta, scope=scope
    )
    radius = delta if scope == LOCAL else None
    sign = 1.0 if kind == MAX else -1.0
    h = u.grid.h

    records: List[ContactRecord] = []
    for entry in bank:
        for cert in find_contacts(u, entry, kind, radius):
            x = cert.x
            p = entry.probe.gradient(x)
            X = entry.probe.hessian(x)
            split = eval_levy_ito(measure, jmap, entry.probe, x, p, delta, rule, u=u)
            l_outer = float(split.outer)
            value = F(x, float(u.flat[cert.node]), p, X, split.inner + l_outer)
            slack = tol + split.error_bound * F.l_lipschitz
            slack += 10.0 * h * (1.0 + float(np.max(np.abs(p))))
            if entry.node is None:
                slack += _free_slack(u, entry.probe, cert.node, p)
            records.append(
                ContactRecord(
                    node=cert.node,
                    x=x.tolist(),
                    probe_id=entry.label,
                    kind=kind,
                    p=np.atleast_1d(p).tolist(),
                    X=np.atleast_2d(X).tolist(),
                    l_inner=split.inner,
                    l_outer=l_outer,
                    error_bound=split.error_bound,
                    F_value=value,
                    tolerance=slack,
                    verdict=PASS if sign * value <= slack else FAIL,
                )
            )

    if not records:
        verdict = NO_CONTACTS
        logger.info("probe bank of %d entries produced no contacts", len(bank))
    else:
        verdict = FAIL if any(r.verdict == FAIL for r in records) else PASS
        logger.info(
            "%s audit: %d contacts, verdict %s", _KINDS[kind], len(records), verdict
        )
    return VerificationReport(
        kind=_KINDS[kind],
        verdict=verdict,
        delta=delta,
        scope=scope,
        tol=tol,
        contacts=records,
        bank=[e.describe() for e in bank],
        nonlinearity=F.describe(),
        attestation=catalog_attestation(F),
    )


def verify_subsolution(
    u: GridFunction,
    F: Nonlinearity,
    measure: LevyMeasure,
    jmap: Optional[JumpMap] = None,
    delta: float = 0.25,
    probe_bank: Optional[Sequence[ProbeEntry]] = None,
    tol: float = 0.0,
    *,
    scope: str = LOCAL,
    rule: Optional[QuadratureRule] = None,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
) -> VerificationReport:
    """
    Audit F(...) <= 0 at every maximum contact of ``u`` with the bank.

    Args:
        u: Sampled candidate.
        F: Nonlinearity.
        measure: Levy measure.
        jmap: Jump map (identity by default).
        delta: Split radius; also the local contact radius.
        probe_bank: Bank entries; slope-matched quadratics when None.
        tol: Base tolerance added to the per-contact slack.
        scope: ``local`` or ``global`` contact balls.
        rule: Prebuilt quadrature rule at ``delta``.
        quad_tol: Tolerance of the rule built when ``rule`` is None.
        settings: Quadrature knobs.

    Returns:
        VerificationReport: ``no_contacts`` when the bank never touches u.
    """
    return _verify(
        u,
        F,
        measure,
        jmap,
        delta,
        probe_bank,
        tol,
        MAX,
        scope,
        rule,
        quad_tol,
        settings,
    )


def verify_supersolution(
    v: GridFunction,
    F: Nonlinearity,
    measure: LevyMeasure,
    jmap: Optional[JumpMap] = None,
    delta: float = 0.25,
    probe_bank: Optional[Sequence[ProbeEntry]] = None,
    tol: float = 0.0,
    *,
    scope: str = LOCAL,
    rule: Optional[QuadratureRule] = None,
    quad_tol: float = 1e-6,
    settings: Optional[QuadratureSettings] = None,
) -> VerificationReport:
    """Audit F(...) >= 0 at every minimum contact; mirror of ``verify_subsolution``."""
    return _verify(
        v,
        F,
        measure,
        jmap,
        delta,
        probe_bank,
        tol,
        MIN,
        scope,
        rule,
        quad_tol,
        settings,
    )


def manufactured_source(
    w: TestFunction,
    grid: Grid,
    measure: LevyMeasure,
    rule: QuadratureRule,
    *,
    gamma: float = 1.0,
    nu: float = 0.0,
    jmap: Optional[JumpMap] = None,
) -> GridFunction:
    """
    Source f making ``w`` an exact solution of the stationary model.

    f(x) = gamma w + |grad w|^2 / 2 - nu lap w - I[w](x) at every node, with
    I evaluated through the split at ``rule.delta``.
    """
    jmap = jmap or IdentityJump()
    values = np.empty(grid.size)
    for k, x in enumerate(grid.nodes):
        grad = w.gradient(x)
        split = eval_levy_ito(measure, jmap, w, x, None, rule.delta, rule)
        values[k] = (
            gamma * w.at(x)
            + 0.5 * float(grad @ grad)
            - nu * float(np.trace(w.hessian(x)))
            - float(split.total)
        )
    return GridFunction(grid, values.reshape(grid.shape))
