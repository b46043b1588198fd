"""
cvwitness States

Reference states: Gaussian products, TMSV, split squeezed vacuum, coherent-ring Fock
approximations, split Fock states and the heralded PhSSV circuit.
"""

from cvwitness.states.factory import (
    TAP_THETA,
    make_coherent,
    make_lossy,
    make_phssv,
    make_split_fock,
    make_split_fock_for_fidelity,
    make_split_lossy_phssv,
    make_split_squeezed_vacuum,
    make_squeezed_vacuum,
    make_tmsv,
    make_vacuum,
    split_on_vacuum,
)
from cvwitness.states.registry import (
    STATE_PARAMETERS,
    StateDescriptor,
    build_state,
    parse_descriptor,
    required_param,
    state_family,
)
from cvwitness.states.ring import (
    RingApproximation,
    calibrate_epsilon,
    fock_target,
    make_fock_ring,
    ring_fock_amplitudes,
    ring_infidelity,
)

__all__ = [
    "STATE_PARAMETERS",
    "TAP_THETA",
    "RingApproximation",
    "StateDescriptor",
    "build_state",
    "calibrate_epsilon",
    "fock_target",
    "make_coherent",
    "make_fock_ring",
    "make_lossy",
    "make_phssv",
    "make_split_fock",
    "make_split_fock_for_fidelity",
    "make_split_lossy_phssv",
    "make_split_squeezed_vacuum",
    "make_squeezed_vacuum",
    "make_tmsv",
    "make_vacuum",
    "parse_descriptor",
    "required_param",
    "ring_fock_amplitudes",
    "ring_infidelity",
    "split_on_vacuum",
    "state_family",
]
