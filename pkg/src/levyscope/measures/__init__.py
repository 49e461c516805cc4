"""src/levyscope/measures/__init__.py

Levy measures and their split quadrature rules.
"""

from levyscope.measures.levy_measure import (
    BOUNDED,
    STABLE,
    TEMPERED,
    LevyConditionReport,
    LevyMeasure,
    RadialDensity,
    density,
    large_ball_moment,
    levy_integral,
    load_angular_csv,
    small_ball_moment,
    tail_mass,
    verify_levy_condition,
)
from levyscope.measures.quadrature import (
    QuadratureRule,
    QuadratureSettings,
    build_quadrature,
)

__all__ = [
    "BOUNDED",
    "STABLE",
    "TEMPERED",
    "LevyConditionReport",
    "LevyMeasure",
    "RadialDensity",
    "density",
    "large_ball_moment",
    "levy_integral",
    "load_angular_csv",
    "small_ball_moment",
    "tail_mass",
    "verify_levy_condition",
    "QuadratureRule",
    "QuadratureSettings",
    "build_quadrature",
]
