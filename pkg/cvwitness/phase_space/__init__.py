"""
cvwitness Phase-Space Core

Affine sums of complex-weighted Gaussians and the Gaussian operations acting on them.
"""

from cvwitness.phase_space.channels import (
    apply_loss,
    apply_loss_all,
    center_state,
    check_centered_standard_form,
    partial_trace,
    project_vacuum,
    reduce_to_standard_form,
    tensor_product,
    vacuum_log_probability,
)
from cvwitness.phase_space.serialization import dumps_state, load_state, loads_state, save_state
from cvwitness.phase_space.state import (
    ComplexGaussianComponent,
    GaussianSumState,
    compensated_sum,
    first_moments,
    gaussian_densities,
    real_part,
    second_moments,
    state_covariance,
    state_overlap,
    wigner_eval,
    wigner_values,
)
from cvwitness.phase_space.symplectic import (
    SymplecticMap,
    apply_symplectic,
    beamsplitter,
    is_physical_gaussian,
    make_symplectic,
    rotate,
    squeeze,
    symplectic_form,
    two_mode_squeeze,
)

__all__ = [
    "ComplexGaussianComponent",
    "GaussianSumState",
    "SymplecticMap",
    "apply_loss",
    "apply_loss_all",
    "apply_symplectic",
    "beamsplitter",
    "center_state",
    "check_centered_standard_form",
    "compensated_sum",
    "dumps_state",
    "first_moments",
    "gaussian_densities",
    "is_physical_gaussian",
    "load_state",
    "loads_state",
    "make_symplectic",
    "partial_trace",
    "project_vacuum",
    "real_part",
    "reduce_to_standard_form",
    "rotate",
    "save_state",
    "second_moments",
    "squeeze",
    "state_covariance",
    "state_overlap",
    "symplectic_form",
    "tensor_product",
    "two_mode_squeeze",
    "vacuum_log_probability",
    "wigner_eval",
    "wigner_values",
]
