"""
cvwitness Moments

Weyl-ordered moments and cumulants of quadrature polynomials.
"""

from cvwitness.moments.moments import (
    MAX_ORDER,
    LinearForm,
    MomentTable,
    check_mode_preconditions,
    cumulants_from_moments,
    gaussian_scalar_moment,
    joint_cumulant_22,
    linear_form_cumulants,
    linear_form_moments,
    mode_second_moments,
    weyl_moment_22,
)

__all__ = [
    "MAX_ORDER",
    "LinearForm",
    "MomentTable",
    "check_mode_preconditions",
    "cumulants_from_moments",
    "gaussian_scalar_moment",
    "joint_cumulant_22",
    "linear_form_cumulants",
    "linear_form_moments",
    "mode_second_moments",
    "weyl_moment_22",
]
