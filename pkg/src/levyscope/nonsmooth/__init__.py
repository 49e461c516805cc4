"""src/levyscope/nonsmooth/__init__.py

Regularizations of nonsmooth functions: sup/inf-convolutions, half-relaxed
limits and jets.
"""

from levyscope.nonsmooth.convolution import (
    INF,
    MAX_MESH,
    SUP,
    ConvolutionResult,
    SemiconvexityReport,
    check_semiconvexity,
    inf_convolution,
    sup_convolution,
    write_convolution_csv,
)
from levyscope.nonsmooth.jets import SemiJet, jet_probe
from levyscope.nonsmooth.relaxed import (
    LOWER,
    UPPER,
    neighborhood_radius,
    relaxed_limit,
    relaxed_limit_schedule,
)

__all__ = [
    "INF",
    "MAX_MESH",
    "SUP",
    "ConvolutionResult",
    "SemiconvexityReport",
    "check_semiconvexity",
    "inf_convolution",
    "sup_convolution",
    "write_convolution_csv",
    "SemiJet",
    "jet_probe",
    "LOWER",
    "UPPER",
    "neighborhood_radius",
    "relaxed_limit",
    "relaxed_limit_schedule",
]
