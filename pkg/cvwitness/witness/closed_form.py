"""
Closed-form witness values for reference states with pair (1, −1, 1, 1).

These are regression anchors for the numerical engine.
"""

import math


def vacuum_lhs() -> float:
    return 1.0


def tmsv_lhs(r: float) -> float:
    """Fourth-order LHS of the two-mode squeezed vacuum."""
    return 21.0 / 4.0 * math.exp(-4 * r) - 3.0 / 4.0 * math.exp(4 * r) - 7.0 / 2.0


def split_squeezed_vacuum_lhs(r: float) -> float:
    """Fourth-order LHS of a squeezed vacuum split on a balanced beamsplitter."""
    e2 = math.exp(2 * r)
    return (-3 * e2**4 - 6 * e2**3 + 2 * e2**2 - 6 * e2 + 21) / (8 * e2**2)


def split_single_photon_lhs(eta: float) -> float:
    """
    Fourth-order LHS of |1⟩ after loss η, split on a balanced beamsplitter.

    Equals 1 + 6η − 4η², so the margin 6η − 4η² is never negative on [0, 1].
    """
    return 1.0 + 6.0 * eta - 4.0 * eta * eta


def split_squeezed_photon_lhs(r: float) -> float:
    """Fourth-order LHS of S(r)|1⟩ split on a balanced beamsplitter."""
    return (
        15 * math.exp(-4 * r)
        - 0.75
        - 2.25 * (math.exp(2 * r) + math.exp(-2 * r))
        - 3.375 * (math.exp(4 * r) + math.exp(-4 * r))
    )


def duan_tmsv_lhs(r: float) -> float:
    return 2.0 * math.exp(-2 * r)
