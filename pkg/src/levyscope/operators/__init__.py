"""src/levyscope/operators/__init__.py

Probes, grid functions, jump maps and the split nonlocal operators.
"""

from levyscope.operators.contact import (
    MAX,
    MIN,
    ContactCertificate,
    certify_contact,
    contact_mask,
)
from levyscope.operators.grid import CLAMP, PERIODIC, Grid, GridFunction
from levyscope.operators.jump_maps import (
    ConstantWeight,
    CustomJump,
    IdentityJump,
    JumpMap,
    LinearInZ,
    SaturatedLinearWeight,
    ShearJump,
    WeightMap,
    make_jump_map,
    make_weight_map,
)
from levyscope.operators.nonlocal_ops import (
    Field,
    LimitTrace,
    SplitEvaluation,
    eval_B,
    eval_inner,
    eval_K,
    eval_levy,
    eval_levy_ito,
    eval_levy_with_bound,
    eval_outer,
    eval_outer_limit,
)
from levyscope.operators.probes import (
    Affine,
    Bump,
    Constant,
    Cosine,
    Gaussian,
    Localizer,
    QuadraticClamped,
    SumProbe,
    TestFunction,
    make_probe,
)

__all__ = [
    "MAX",
    "MIN",
    "ContactCertificate",
    "certify_contact",
    "contact_mask",
    "CLAMP",
    "PERIODIC",
    "Grid",
    "GridFunction",
    "ConstantWeight",
    "CustomJump",
    "IdentityJump",
    "JumpMap",
    "LinearInZ",
    "SaturatedLinearWeight",
    "ShearJump",
    "WeightMap",
    "make_jump_map",
    "make_weight_map",
    "Field",
    "LimitTrace",
    "SplitEvaluation",
    "eval_B",
    "eval_inner",
    "eval_K",
    "eval_levy",
    "eval_levy_ito",
    "eval_levy_with_bound",
    "eval_outer",
    "eval_outer_limit",
    "Affine",
    "Bump",
    "Constant",
    "Cosine",
    "Gaussian",
    "Localizer",
    "QuadraticClamped",
    "SumProbe",
    "TestFunction",
    "make_probe",
]
