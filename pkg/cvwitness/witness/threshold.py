"""
Threshold search on witness margins.
"""

from collections.abc import Callable

from scipy.optimize import bisect

from cvwitness.base import InvalidParameterError, NoCrossingError
from cvwitness.logger import WitnessLogger
from cvwitness.metrics import get_metrics
from cvwitness.phase_space import GaussianSumState
from cvwitness.witness.criteria import (
    DEFAULT_PAIR,
    Criterion,
    EprOperatorPair,
    compute_cumulant_set,
    duan_witness,
    fourth_order_witness,
)

logger = WitnessLogger.get_logger("witness")

DEFAULT_TOL = 1e-4

StateFamily = Callable[[float], GaussianSumState]


def witness_margin_family(
    family: StateFamily,
    pair: EprOperatorPair = DEFAULT_PAIR,
    criterion: Criterion = Criterion.FOURTH_ORDER,
) -> Callable[[float], float]:
    """
    Turn a parameterized state family into a margin function.

    Args:
        family: Maps the swept parameter to a centered, standard-form two-mode state
        pair: Operator pair (for Duan it must belong to the Duan family)
        criterion: Which witness to evaluate

    Returns:
        Callable parameter -> margin
    """

    def margin(parameter: float) -> float:
        cumulants = compute_cumulant_set(family(parameter), pair)
        if criterion is Criterion.DUAN:
            return duan_witness(cumulants, pair.g1).margin
        return fourth_order_witness(cumulants).margin

    return margin


def find_margin_root(
    margin: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = DEFAULT_TOL,
) -> float:
    """
    Bisect a margin function to an absolute parameter tolerance.

    Args:
        margin: Parameter -> witness margin
        bracket: (lo, hi) with a sign change
        tol: Absolute tolerance on the parameter

    Returns:
        Crossing parameter

    Raises:
        NoCrossingError: If the margin has the same strict sign at both ends
    """
    lo, hi = bracket
    if not lo < hi:
        raise InvalidParameterError(f"Bracket must satisfy lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise InvalidParameterError(f"Tolerance must be positive, got {tol}")

    metrics = get_metrics()

    def counted(parameter: float) -> float:
        metrics.threshold_evaluations.inc()
        value = margin(parameter)
        logger.debug(f"Bisection: margin({parameter:.8g}) = {value:.6g}")
        return value

    m_lo, m_hi = counted(lo), counted(hi)
    if m_lo == 0.0:
        return lo
    if m_hi == 0.0:
        return hi
    if (m_lo < 0) == (m_hi < 0):
        raise NoCrossingError(lo, hi, m_lo, m_hi)
    return float(bisect(counted, lo, hi, xtol=tol))


def find_threshold(
    family: StateFamily,
    pair: EprOperatorPair = DEFAULT_PAIR,
    bracket: tuple[float, float] = (0.0, 1.0),
    tol: float = DEFAULT_TOL,
    criterion: Criterion = Criterion.FOURTH_ORDER,
) -> float:
    """
    Parameter at which the witness margin of a state family changes sign.

    Args:
        family: Parameter -> two-mode state
        pair: Operator pair
        bracket: Search interval
        tol: Absolute parameter tolerance
        criterion: FourthOrder or Duan

    Returns:
        Crossing parameter

    Raises:
        NoCrossingError: If the margin does not change sign on the bracket
    """
    crossing = find_margin_root(witness_margin_family(family, pair, criterion), bracket, tol)
    logger.info(f"{criterion.value} margin crosses zero at {crossing:.6g}")
    return crossing
