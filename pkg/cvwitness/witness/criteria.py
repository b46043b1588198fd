"""
Fourth-order cumulant inseparability witness and its Gaussian (Duan) limit.

For EPR-type operators û = g₁x̂₁ + g₂x̂₂ and v̂ = h₁p̂₁ + h₂p̂₂, every separable state
satisfies LHS ≥ RHS with

    LHS = κ₄(û) + κ₄(v̂) + 3κ₂(û)² + 3κ₂(v̂)²
          − |2g₁²g₂²κ₂,₂(x̂₁,p̂₁) − 1| − |2h₁²h₂²κ₂,₂(x̂₂,p̂₂) − 1|
          − 6g₁²g₂²κ₂(x̂₁)κ₂(x̂₂) − 6h₁²h₂²κ₂(p̂₁)κ₂(p̂₂)
    RHS = ½(g₁²h₁² + g₂²h₂²)

A negative margin LHS − RHS certifies entanglement. A non-negative margin is inconclusive.
"""

import math
import time
import sys
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import ClassVar

from cvwitness.base import InvalidParameterError
from cvwitness.logger import WitnessLogger
from cvwitness.metrics import get_metrics
from cvwitness.moments import (
    LinearForm,
    check_mode_preconditions,
    joint_cumulant_22,
    linear_form_cumulants,
    mode_second_moments,
)
from cvwitness.phase_space import GaussianSumState

logger = WitnessLogger.get_logger("witness")

PAIR_MATCH_TOL = 1e-12


@dataclass(frozen=True)
class EprOperatorPair:
    """
    Coefficients of û = g₁x̂₁ + g₂x̂₂ and v̂ = h₁p̂₁ + h₂p̂₂.

    Attributes:
        g1, g2, h1, h2: Nonzero real coefficients
    """

    g1: float = 1.0
    g2: float = -1.0
    h1: float = 1.0
    h2: float = 1.0

    def __post_init__(self) -> None:
        for name in ("g1", "g2", "h1", "h2"):
            value = float(getattr(self, name))
            if value == 0.0 or not math.isfinite(value):
                raise InvalidParameterError(f"EPR coefficient {name} must be finite and nonzero")
            object.__setattr__(self, name, value)

    @classmethod
    def duan(cls, a: float) -> "EprOperatorPair":
        """The Duan family g₁ = h₁ = a, g₂ = −h₂ = −1/a."""
        if a == 0.0:
            raise InvalidParameterError("Duan parameter a must be nonzero")
        return cls(a, -1.0 / a, a, 1.0 / a)

    @property
    def u_form(self) -> LinearForm:
        return LinearForm.x_combination(self.g1, self.g2)

    @property
    def v_form(self) -> LinearForm:
        return LinearForm.p_combination(self.h1, self.h2)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.g1, self.g2, self.h1, self.h2)

    def matches(self, other: "EprOperatorPair", tol: float = PAIR_MATCH_TOL) -> bool:
        return all(
            abs(a - b) <= tol * max(1.0, abs(a))
            for a, b in zip(self.as_tuple(), other.as_tuple(), strict=True)
        )


DEFAULT_PAIR = EprOperatorPair()


@dataclass(frozen=True)
class CumulantSet:
    """
    Every cumulant entering the fourth-order witness for one state and pair.

    Attributes:
        k2_u, k4_u, k2_v, k4_v: Cumulants of û and v̂
        k22_m1, k22_m2: κ₂,₂(x̂_i, p̂_i) of each mode
        k2_x1, k2_x2, k2_p1, k2_p2: Quadrature variances
        pair: Operator pair the set was built with
        k3_u, k3_v: Third cumulants (unused by the witness, kept for additivity checks)
    """

    k2_u: float
    k4_u: float
    k2_v: float
    k4_v: float
    k22_m1: float
    k22_m2: float
    k2_x1: float
    k2_x2: float
    k2_p1: float
    k2_p2: float
    pair: EprOperatorPair = DEFAULT_PAIR
    k3_u: float = 0.0
    k3_v: float = 0.0

    FIELDS: ClassVar[tuple[str, ...]] = (
        "k2_u",
        "k4_u",
        "k2_v",
        "k4_v",
        "k22_m1",
        "k22_m2",
        "k2_x1",
        "k2_x2",
        "k2_p1",
        "k2_p2",
    )

    def values(self) -> dict[str, float]:
        """Witness fields as an ordered dict (pair and κ₃ omitted)."""
        data = asdict(self)
        return {name: data[name] for name in self.FIELDS}

    def satisfies_heisenberg(self, tol: float = 1e-9) -> bool:
        """κ₂(x̂_i)κ₂(p̂_i) ≥ 1/4 for both modes."""
        return (
            self.k2_x1 * self.k2_p1 >= 0.25 - tol and self.k2_x2 * self.k2_p2 >= 0.25 - tol
        )


if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # pragma: no cover - Python 3.10 backport of enum.StrEnum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__


class Criterion(StrEnum):
    FOURTH_ORDER = "FourthOrder"
    DUAN = "Duan"


@dataclass(frozen=True)
class WitnessReport:
    """
    Result of one criterion evaluation.

    ``violated`` certifies entanglement; otherwise the result is inconclusive.
    """

    lhs: float
    rhs: float
    criterion: Criterion

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def violated(self) -> bool:
        return self.margin < 0.0

    @property
    def verdict(self) -> str:
        return "violated" if self.violated else "inconclusive"


def compute_cumulant_set(
    state: GaussianSumState, pair: EprOperatorPair = DEFAULT_PAIR
) -> CumulantSet:
    """
    Assemble all witness cumulants of a two-mode state.

    Args:
        state: Centered two-mode state in standard form
        pair: EPR operator coefficients

    Returns:
        Populated CumulantSet

    Raises:
        InvalidParameterError: If the state does not have two modes
        PreconditionError: If the state is not centered or not in standard form
    """
    if state.n_modes != 2:
        raise InvalidParameterError(f"Witness needs a two-mode state, got {state.n_modes} modes")
    for mode in (0, 1):
        check_mode_preconditions(state, mode)

    k2_u, k3_u, k4_u = linear_form_cumulants(state, pair.u_form)
    k2_v, k3_v, k4_v = linear_form_cumulants(state, pair.v_form)
    x1, p1, _ = mode_second_moments(state, 0)
    x2, p2, _ = mode_second_moments(state, 1)

    return CumulantSet(
        k2_u=k2_u,
        k4_u=k4_u,
        k2_v=k2_v,
        k4_v=k4_v,
        k22_m1=joint_cumulant_22(state, 0),
        k22_m2=joint_cumulant_22(state, 1),
        k2_x1=x1,
        k2_x2=x2,
        k2_p1=p1,
        k2_p2=p2,
        pair=pair,
        k3_u=k3_u,
        k3_v=k3_v,
    )


def fourth_order_witness(c: CumulantSet, pair: EprOperatorPair | None = None) -> WitnessReport:
    """
    Evaluate the fourth-order truncated inequality.

    Args:
        c: Cumulant set
        pair: Operator pair (defaults to the pair stored in ``c``)

    Returns:
        WitnessReport with criterion FourthOrder
    """
    pair = pair or c.pair
    g1s, g2s, h1s, h2s = (v * v for v in pair.as_tuple())
    lhs = (
        c.k4_u
        + c.k4_v
        + 3 * c.k2_u**2
        + 3 * c.k2_v**2
        - abs(2 * g1s * g2s * c.k22_m1 - 1)
        - abs(2 * h1s * h2s * c.k22_m2 - 1)
        - 6 * g1s * g2s * c.k2_x1 * c.k2_x2
        - 6 * h1s * h2s * c.k2_p1 * c.k2_p2
    )
    rhs = 0.5 * (g1s * h1s + g2s * h2s)
    return WitnessReport(lhs, rhs, Criterion.FOURTH_ORDER)


def duan_witness(c: CumulantSet, a: float = 1.0) -> WitnessReport:
    """
    Duan criterion κ₂(û) + κ₂(v̂) ≥ a² + 1/a².

    Raises:
        InvalidParameterError: If ``c`` was not built with the pair (a, −1/a, a, 1/a)
    """
    expected = EprOperatorPair.duan(a)
    if not c.pair.matches(expected):
        raise InvalidParameterError(
            f"Duan criterion with a={a} needs pair {expected.as_tuple()}, "
            f"cumulants were built with {c.pair.as_tuple()}"
        )
    return WitnessReport(c.k2_u + c.k2_v, a * a + 1.0 / (a * a), Criterion.DUAN)


def fourth_moment_uncertainty_margin(state: GaussianSumState, mode: int) -> float:
    """
    Single-mode fourth-moment uncertainty bound, ≥ 0 for every physical state.

    μ₄(x̂) + μ₄(p̂) − |2κ₂,₂(x̂,p̂) − 1| − ⟨x̂²⟩² − ⟨p̂²⟩²

    Raises:
        PreconditionError: If the state is not centered or not in standard form
    """
    check_mode_preconditions(state, mode)
    n = state.n_modes
    _, _, k4_x = linear_form_cumulants(state, LinearForm.quadrature(mode, n, "x"))
    _, _, k4_p = linear_form_cumulants(state, LinearForm.quadrature(mode, n, "p"))
    xx, pp, _ = mode_second_moments(state, mode)
    mu4_x = k4_x + 3 * xx**2
    mu4_p = k4_p + 3 * pp**2
    k22 = joint_cumulant_22(state, mode)
    return mu4_x + mu4_p - abs(2 * k22 - 1) - xx**2 - pp**2


def loss_scaled_cumulants(c: CumulantSet, eta: float) -> CumulantSet:
    """
    Cumulants after equal pure loss η on both modes.

    Order-k cumulants scale as η^{k/2}; second-order ones gain vacuum noise.

    Raises:
        InvalidParameterError: If η is outside [0, 1]
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterError(f"Loss efficiency must lie in [0, 1], got {eta}")
    g1, g2, h1, h2 = c.pair.as_tuple()
    noise = 0.5 * (1.0 - eta)
    return replace(
        c,
        k2_u=eta * c.k2_u + noise * (g1 * g1 + g2 * g2),
        k2_v=eta * c.k2_v + noise * (h1 * h1 + h2 * h2),
        k4_u=eta**2 * c.k4_u,
        k4_v=eta**2 * c.k4_v,
        k22_m1=eta**2 * c.k22_m1,
        k22_m2=eta**2 * c.k22_m2,
        k2_x1=eta * c.k2_x1 + noise,
        k2_x2=eta * c.k2_x2 + noise,
        k2_p1=eta * c.k2_p1 + noise,
        k2_p2=eta * c.k2_p2 + noise,
        k3_u=eta**1.5 * c.k3_u,
        k3_v=eta**1.5 * c.k3_v,
    )


def evaluate_state(
    state: GaussianSumState, pair: EprOperatorPair = DEFAULT_PAIR
) -> tuple[CumulantSet, WitnessReport, WitnessReport]:
    """
    Fourth-order and Duan reports for one state.

    The Duan report uses ``pair`` when it belongs to the Duan family, otherwise the a = 1 pair.

    Returns:
        (cumulants for ``pair``, fourth-order report, Duan report)
    """
    metrics = get_metrics()
    start = time.perf_counter()
    cumulants = compute_cumulant_set(state, pair)
    fourth = fourth_order_witness(cumulants)
    metrics.witness_duration_seconds.labels(criterion=Criterion.FOURTH_ORDER.value).observe(
        time.perf_counter() - start
    )
    metrics.witness_evaluations.labels(criterion=Criterion.FOURTH_ORDER.value).inc()

    start = time.perf_counter()
    a = pair.g1
    if pair.matches(EprOperatorPair.duan(a)):
        duan = duan_witness(cumulants, a)
    else:
        duan = duan_witness(compute_cumulant_set(state, EprOperatorPair.duan(1.0)), 1.0)
    metrics.witness_duration_seconds.labels(criterion=Criterion.DUAN.value).observe(
        time.perf_counter() - start
    )
    metrics.witness_evaluations.labels(criterion=Criterion.DUAN.value).inc()

    logger.debug(
        f"Witness margins: fourth-order {fourth.margin:.6g}, Duan {duan.margin:.6g}"
    )
    return cumulants, fourth, duan
