"""
cvwitness Fock Oracle

Truncated Fock-space density operators for cross-checking the phase-space engine.
Slow by construction; used by tests and the hidden ``oracle`` command.
"""

from cvwitness.fock_oracle.operators import (
    annihilation,
    beamsplitter_generator,
    commutator_sides,
    loss_kraus,
    quadratures,
    squeeze_generator,
    two_mode_squeeze_generator,
    weyl_symmetrized,
)
from cvwitness.fock_oracle.oracle import (
    LEAKAGE_LIMIT,
    ORACLE_STATES,
    FockState,
    apply_gate,
    apply_loss_fock,
    build_fock,
    crop,
    fock_cumulant_set,
    fock_number_state,
    fock_ring_state,
    fock_squeezed_vacuum,
    fock_tmsv,
    fock_vacuum,
    herald_click,
    split_from_vacuum,
    tensor_fock,
    uncertainty_residual,
    verify_commutator_identity,
    weyl_ordered_expectation,
    wigner_value,
)

__all__ = [
    "LEAKAGE_LIMIT",
    "ORACLE_STATES",
    "FockState",
    "annihilation",
    "apply_gate",
    "apply_loss_fock",
    "beamsplitter_generator",
    "build_fock",
    "commutator_sides",
    "crop",
    "fock_cumulant_set",
    "fock_number_state",
    "fock_ring_state",
    "fock_squeezed_vacuum",
    "fock_tmsv",
    "fock_vacuum",
    "herald_click",
    "loss_kraus",
    "quadratures",
    "split_from_vacuum",
    "squeeze_generator",
    "tensor_fock",
    "two_mode_squeeze_generator",
    "uncertainty_residual",
    "verify_commutator_identity",
    "weyl_ordered_expectation",
    "weyl_symmetrized",
    "wigner_value",
]
