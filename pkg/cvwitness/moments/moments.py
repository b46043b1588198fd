"""
Weyl-ordered moments and cumulants of affine Gaussian sums.

Moments are the classical moments of the Wigner quasi-distribution, which equal the
Weyl-ordered operator expectations and the statistics that homodyne detection reports.
Each component contributes a Gaussian moment with a (possibly complex) mean; weighted
sums use compensated summation followed by a reality check.
"""

import math
from dataclasses import dataclass

import numpy as np

from cvwitness.base import InvalidParameterError, PreconditionError
from cvwitness.logger import WitnessLogger
from cvwitness.phase_space.state import GaussianSumState, first_moments, mode_indices, real_part

logger = WitnessLogger.get_logger("moments")

MAX_ORDER = 8
CENTERED_TOL = 1e-10
STANDARD_FORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LinearForm:
    """
    Linear quadrature combination L = w·ξ.

    Attributes:
        coefficients: Real vector w of length 2N
    """

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.coefficients, dtype=float).ravel()
        if w.shape[0] == 0 or w.shape[0] % 2:
            raise InvalidParameterError(f"Linear form needs an even positive length, got {w.shape[0]}")
        if not np.any(w):
            raise InvalidParameterError("Linear form needs at least one nonzero coefficient")
        w.setflags(write=False)
        object.__setattr__(self, "coefficients", w)

    @classmethod
    def x_combination(cls, *coefficients: float) -> "LinearForm":
        """Σ_i a_i x̂_i over len(coefficients) modes."""
        w = np.zeros(2 * len(coefficients))
        w[0::2] = coefficients
        return cls(w)

    @classmethod
    def p_combination(cls, *coefficients: float) -> "LinearForm":
        """Σ_i b_i p̂_i over len(coefficients) modes."""
        w = np.zeros(2 * len(coefficients))
        w[1::2] = coefficients
        return cls(w)

    @classmethod
    def quadrature(cls, mode: int, n_modes: int, which: str) -> "LinearForm":
        """Single quadrature 'x' or 'p' of one mode."""
        ix, ip = mode_indices(mode, n_modes)
        w = np.zeros(2 * n_modes)
        w[ix if which == "x" else ip] = 1.0
        return cls(w)


@dataclass(frozen=True)
class MomentTable:
    """
    Raw moments μ₁..μ_n of a scalar quadrature variable.

    Attributes:
        raw: Tuple (μ₁, μ₂, ...) of real raw moments
    """

    raw: tuple[float, ...]

    @property
    def mu1(self) -> float:
        return self.raw[0]

    @property
    def mu2(self) -> float:
        return self.raw[1]

    @property
    def mu3(self) -> float:
        return self.raw[2]

    @property
    def mu4(self) -> float:
        return self.raw[3]

    def variance_nonnegative(self, tol: float = 1e-12) -> bool:
        return self.mu2 >= self.mu1**2 - tol


def _double_factorial_odd(j: int) -> int:
    """(2j − 1)!! with (−1)!! = 1."""
    return math.factorial(2 * j) // (2**j * math.factorial(j))


def gaussian_scalar_moment(mean: complex, variance: float, n: int) -> complex:
    """
    Raw moment E[z^n] of a scalar Gaussian with (possibly complex) mean.

    E[z^n] = Σ_{j=0}^{⌊n/2⌋} C(n, 2j)·(2j−1)!!·variance^j·mean^{n−2j}

    Args:
        mean: Mean m
        variance: Variance s
        n: Order, 0 ≤ n ≤ 8

    Returns:
        Complex moment

    Raises:
        InvalidParameterError: If n is negative or above 8
    """
    if not 0 <= n <= MAX_ORDER:
        raise InvalidParameterError(f"Moment order must lie in [0, {MAX_ORDER}], got {n}")
    mean = complex(mean)
    return sum(
        math.comb(n, 2 * j) * _double_factorial_odd(j) * variance**j * mean ** (n - 2 * j)
        for j in range(n // 2 + 1)
    )


def _form_vector(state: GaussianSumState, form: LinearForm | np.ndarray) -> np.ndarray:
    w = form.coefficients if isinstance(form, LinearForm) else LinearForm(form).coefficients
    if w.shape[0] != state.dim:
        raise InvalidParameterError(
            f"Linear form has length {w.shape[0]}, state has dimension {state.dim}"
        )
    return w


def linear_form_moments(
    state: GaussianSumState, form: LinearForm | np.ndarray, max_order: int = 4
) -> MomentTable:
    """
    Raw moments of L = w·ξ under the Wigner distribution.

    Each component makes L Gaussian with mean w·μ_k and variance wᵀΣ_k w.

    Args:
        state: State
        form: Linear form of matching dimension
        max_order: Highest raw moment (≤ 8)

    Returns:
        MomentTable with μ₁..μ_max_order

    Raises:
        RealityCheckError: If the state is not conjugate-paired
    """
    if not 1 <= max_order <= MAX_ORDER:
        raise InvalidParameterError(f"max_order must lie in [1, {MAX_ORDER}], got {max_order}")
    w = _form_vector(state, form)
    weights = state.weights
    means = state.means @ w
    variances = np.einsum("i,kij,j->k", w, state.covs, w)

    raw = []
    for n in range(1, max_order + 1):
        terms = [
            c * gaussian_scalar_moment(m, s, n)
            for c, m, s in zip(weights, means, variances, strict=True)
        ]
        raw.append(real_part(terms, f"Moment of order {n}"))

    table = MomentTable(tuple(raw))
    if max_order >= 2 and not table.variance_nonnegative():
        logger.warning(f"Negative variance {table.mu2 - table.mu1**2:.3e}: state may be unphysical")
    return table


def cumulants_from_moments(m: MomentTable) -> tuple[float, float, float]:
    """
    Cumulants κ₂, κ₃, κ₄ from raw moments with general mean.

    Returns:
        (κ₂, κ₃, κ₄)
    """
    mu1, mu2, mu3, mu4 = m.raw[:4]
    k2 = mu2 - mu1**2
    k3 = mu3 - 3 * mu2 * mu1 + 2 * mu1**3
    k4 = mu4 - 4 * mu3 * mu1 - 3 * mu2**2 + 12 * mu2 * mu1**2 - 6 * mu1**4
    return k2, k3, k4


def linear_form_cumulants(state: GaussianSumState, form: LinearForm | np.ndarray) -> tuple[float, float, float]:
    """Shortcut for cumulants_from_moments(linear_form_moments(state, form))."""
    return cumulants_from_moments(linear_form_moments(state, form, 4))


def _mode_blocks(state: GaussianSumState, mode: int):
    ix, ip = mode_indices(mode, state.n_modes)
    means = state.means
    covs = state.covs
    return means[:, ix], means[:, ip], covs[:, ix, ix], covs[:, ix, ip], covs[:, ip, ip]


def mode_second_moments(state: GaussianSumState, mode: int) -> tuple[float, float, float]:
    """
    E_W[x²], E_W[p²] and the symmetrized E_W[xp] of one mode.

    Returns:
        (E[x²], E[p²], E[xp])
    """
    mx, mp, sxx, sxp, spp = _mode_blocks(state, mode)
    c = state.weights
    return (
        real_part(c * (sxx + mx**2), "E[x^2]"),
        real_part(c * (spp + mp**2), "E[p^2]"),
        real_part(c * (sxp + mx * mp), "E[xp]"),
    )


def weyl_moment_22(state: GaussianSumState, mode: int) -> float:
    """
    E_W[x_i² p_i²] via the Isserlis-with-means identity per component.

    E[x²p²] = s_xx s_pp + 2s_xp² + s_xx m_p² + s_pp m_x² + 4 s_xp m_x m_p + m_x² m_p²

    Args:
        state: One- or multi-mode state
        mode: Mode index

    Returns:
        Real Weyl-ordered fourth moment
    """
    mx, mp, sxx, sxp, spp = _mode_blocks(state, mode)
    per_component = (
        sxx * spp
        + 2 * sxp**2
        + sxx * mp**2
        + spp * mx**2
        + 4 * sxp * mx * mp
        + mx**2 * mp**2
    )
    return real_part(state.weights * per_component, "E[x^2 p^2]")


def check_mode_preconditions(state: GaussianSumState, mode: int) -> None:
    """
    Require zero first moments and a vanishing ⟨{x_i, p_i}⟩ on the given mode.

    Raises:
        PreconditionError: Naming center_state or reduce_to_standard_form as the fix
    """
    mu = first_moments(state)
    if np.max(np.abs(mu)) > CENTERED_TOL:
        raise PreconditionError(
            f"State is not centered (max |<ξ>| = {np.max(np.abs(mu)):.3e}); apply center_state"
        )
    _, _, xp = mode_second_moments(state, mode)
    if abs(xp) > STANDARD_FORM_TOL:
        raise PreconditionError(
            f"Mode {mode} has <{{x,p}}>/2 = {xp:.3e}; apply reduce_to_standard_form"
        )


def joint_cumulant_22(state: GaussianSumState, mode: int) -> float:
    """
    Joint cumulant κ₂,₂(x̂_i, p̂_i) of a centered, standard-form state.

    κ₂,₂ = E_W[x²p²] − E_W[x²]E_W[p²] − 2E_W[xp]²

    Raises:
        PreconditionError: If the state is not centered or the mode has x–p correlation
    """
    check_mode_preconditions(state, mode)
    xx, pp, xp = mode_second_moments(state, mode)
    return weyl_moment_22(state, mode) - xx * pp - 2 * xp**2
