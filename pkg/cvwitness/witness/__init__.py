"""
cvwitness Witness

Fourth-order cumulant criterion, Duan limit, loss scaling and threshold search.
"""

from cvwitness.witness.criteria import (
    DEFAULT_PAIR,
    Criterion,
    CumulantSet,
    EprOperatorPair,
    WitnessReport,
    compute_cumulant_set,
    duan_witness,
    evaluate_state,
    fourth_moment_uncertainty_margin,
    fourth_order_witness,
    loss_scaled_cumulants,
)
from cvwitness.witness.threshold import (
    DEFAULT_TOL,
    find_margin_root,
    find_threshold,
    witness_margin_family,
)

__all__ = [
    "DEFAULT_PAIR",
    "DEFAULT_TOL",
    "Criterion",
    "CumulantSet",
    "EprOperatorPair",
    "WitnessReport",
    "compute_cumulant_set",
    "duan_witness",
    "evaluate_state",
    "find_margin_root",
    "find_threshold",
    "fourth_moment_uncertainty_margin",
    "fourth_order_witness",
    "loss_scaled_cumulants",
    "witness_margin_family",
]
