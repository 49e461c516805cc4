"""src/levyscope/viscosity/__init__.py

Viscosity audits: nonlinearities, probe banks, sub/supersolution checks,
structural assumption audits and stability experiments.
"""

from levyscope.operators.contact import ContactCertificate
from levyscope.viscosity.assumptions import (
    AuditReport,
    EllipticitySample,
    LipschitzSample,
    MonotonicitySample,
    catalog_attestation,
    check_A1,
    check_A2_A4,
    check_ellipticity,
    ordered_samples,
    structure_samples,
)
from levyscope.viscosity.doubling import (
    DoubledVariableReport,
    LocalizerReport,
    doubled_variable_surrogate,
    localizer_properties,
    penalty_hessian,
)
from levyscope.viscosity.nonlinearity import (
    BELLMAN,
    PARABOLIC_INTERFACE,
    STATIONARY_SEMILINEAR,
    Control,
    Nonlinearity,
    bellman,
    custom,
    parabolic_interface,
    stationary_semilinear,
)
from levyscope.viscosity.probe_bank import (
    FREE_PROBES,
    GLOBAL,
    LOCAL,
    ProbeEntry,
    build_probe_bank,
    free_probes,
)
from levyscope.viscosity.stability import StabilityReport, stability_experiment
from levyscope.viscosity.verify import (
    FAIL,
    NO_CONTACTS,
    PASS,
    ContactRecord,
    VerificationReport,
    find_contacts,
    manufactured_source,
    verify_subsolution,
    verify_supersolution,
)

__all__ = [
    "ContactCertificate",
    "AuditReport",
    "EllipticitySample",
    "LipschitzSample",
    "MonotonicitySample",
    "catalog_attestation",
    "check_A1",
    "check_A2_A4",
    "check_ellipticity",
    "ordered_samples",
    "structure_samples",
    "DoubledVariableReport",
    "LocalizerReport",
    "doubled_variable_surrogate",
    "localizer_properties",
    "penalty_hessian",
    "BELLMAN",
    "PARABOLIC_INTERFACE",
    "STATIONARY_SEMILINEAR",
    "Control",
    "Nonlinearity",
    "bellman",
    "custom",
    "parabolic_interface",
    "stationary_semilinear",
    "FREE_PROBES",
    "GLOBAL",
    "LOCAL",
    "ProbeEntry",
    "build_probe_bank",
    "free_probes",
    "StabilityReport",
    "stability_experiment",
    "FAIL",
    "NO_CONTACTS",
    "PASS",
    "ContactRecord",
    "VerificationReport",
    "find_contacts",
    "manufactured_source",
    "verify_subsolution",
    "verify_supersolution",
]
