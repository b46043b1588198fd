"""
Coherent-ring approximations of finite Fock superpositions.

A target Σ_{m≤k} c_m|m⟩ of stellar rank k is approximated by Σ_n a_n|α_n⟩ with
α_n = ε·exp(2πin/(k+1)). The a_n match the first k+1 Fock amplitudes exactly. Because
Σ_n a_n ω^{nm} only depends on m mod (k+1), the ring state's amplitude at every m is

    ψ_m = c_{m mod (k+1)} · ε^{m − m'} · √(m'!/m!),    m' = m mod (k+1),

which gives the fidelity in closed form. The Wigner function of each outer product
|α⟩⟨β| is ⟨β|α⟩·G_{μ, ½I} with μ = ((α + β*)/√2, −i(α − β*)/√2).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import bisect
from scipy.special import gammaln

from cvwitness.base import IllConditionedError, InvalidParameterError, PoorApproximationError
from cvwitness.logger import WitnessLogger
from cvwitness.phase_space import ComplexGaussianComponent, GaussianSumState

logger = WitnessLogger.get_logger("states")

MAX_STELLAR_RANK = 6
MAX_RING_CONDITION = 1e12
MAX_TAIL_NORM = 0.1
# Tail terms below this relative size no longer change the fidelity in double precision.
TAIL_EPS = 1e-40


@dataclass(frozen=True, eq=False)
class RingApproximation:
    """
    Parameters and quality of a coherent-ring approximation.

    Attributes:
        epsilon: Ring radius ε in phase space (coherent amplitude units)
        stellar_rank: Rank k of the target; the ring has k+1 coherent states
        amplitudes: Complex ring amplitudes a₀..a_k (unnormalized)
        fidelity: |⟨target|ring⟩|²/⟨ring|ring⟩
        infidelity: 1 − fidelity, computed without cancellation
        condition_number: Condition number of the amplitude-matching system
    """

    epsilon: float
    stellar_rank: int
    amplitudes: np.ndarray
    fidelity: float
    infidelity: float
    condition_number: float = 1.0

    @property
    def alphas(self) -> np.ndarray:
        return ring_alphas(self.epsilon, self.stellar_rank)

    @property
    def tail_norm(self) -> float:
        return math.sqrt(self.infidelity)


def fock_target(n: int) -> np.ndarray:
    """Coefficient vector (0, ..., 0, 1) of the number state |n⟩."""
    if n < 0:
        raise InvalidParameterError(f"Photon number must be non-negative, got {n}")
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    return c


def _validate_coefficients(coefficients) -> np.ndarray:
    c = np.array(coefficients, dtype=complex).ravel()
    if c.size == 0:
        raise InvalidParameterError("Fock coefficients must not be empty")
    if c.size - 1 > MAX_STELLAR_RANK:
        raise InvalidParameterError(
            f"Stellar rank {c.size - 1} exceeds the supported maximum {MAX_STELLAR_RANK}"
        )
    norm = math.fsum(np.abs(c) ** 2)
    if abs(norm - 1.0) > 1e-10:
        raise InvalidParameterError(f"Fock coefficients must be normalized, got norm² {norm:.12g}")
    if c[-1] == 0:
        # Trailing zeros would only enlarge the ring.
        last = int(np.flatnonzero(c)[-1])
        c = c[: last + 1]
    return c


def ring_alphas(epsilon: float, k: int) -> np.ndarray:
    return epsilon * np.exp(2j * np.pi * np.arange(k + 1) / (k + 1))


def _coherent_fock_matrix(alphas: np.ndarray, k: int) -> np.ndarray:
    """V[m, n] = ⟨m|α_n⟩ for m = 0..k."""
    m = np.arange(k + 1)
    log_norm = -0.5 * np.abs(alphas) ** 2
    return np.exp(log_norm)[None, :] * alphas[None, :] ** m[:, None] / np.sqrt(
        np.exp(gammaln(m + 1))
    )[:, None]


def ring_tail(coefficients, epsilon: float) -> float:
    """
    Squared norm of the ring state's Fock amplitudes above the target support.

    Uses the periodic closed form; the ring state's norm² is 1 + tail.
    """
    c = _validate_coefficients(coefficients)
    k = c.size - 1
    if epsilon <= 0:
        raise InvalidParameterError(f"Ring radius must be positive, got {epsilon}")
    log_eps = math.log(epsilon)
    terms: list[float] = []
    for residue in range(k + 1):
        if c[residue] == 0:
            continue
        log_c2 = 2 * math.log(abs(c[residue]))
        base = gammaln(residue + 1)
        step = 1
        while True:
            m = residue + step * (k + 1)
            log_term = log_c2 + 2 * (m - residue) * log_eps + base - gammaln(m + 1)
            term = math.exp(log_term) if log_term > -745 else 0.0
            terms.append(term)
            if term < TAIL_EPS or step > 400:
                break
            step += 1
    return math.fsum(terms)


def ring_infidelity(coefficients, epsilon: float) -> float:
    """1 − fidelity of the ring approximation, tail/(1 + tail)."""
    c = _validate_coefficients(coefficients)
    if c.size == 1:
        return 0.0
    tail = ring_tail(c, epsilon)
    return tail / (1.0 + tail)


def ring_fock_amplitudes(approx: RingApproximation, cutoff: int) -> np.ndarray:
    """
    Normalized Fock amplitudes ⟨m|ψ_ring⟩ for m < cutoff, summed from the coherent states.

    Args:
        approx: Ring parameters
        cutoff: Number of Fock levels

    Returns:
        Complex vector of length ``cutoff``
    """
    alphas = approx.alphas
    m = np.arange(cutoff)
    log_fact = 0.5 * gammaln(m + 1)
    psi = np.zeros(cutoff, dtype=complex)
    for a, alpha in zip(approx.amplitudes, alphas, strict=True):
        if alpha == 0:
            psi[0] += a
            continue
        log_mag = -0.5 * abs(alpha) ** 2 + m * math.log(abs(alpha)) - log_fact
        psi += a * np.exp(log_mag + 1j * m * np.angle(alpha))
    return psi / np.linalg.norm(psi)


def _outer_product_component(
    a_n: complex, alpha_n: complex, a_m: complex, alpha_m: complex
) -> ComplexGaussianComponent:
    """Component of a_n a_m* |α_n⟩⟨α_m|."""
    overlap = np.exp(
        -0.5 * abs(alpha_n) ** 2 - 0.5 * abs(alpha_m) ** 2 + np.conj(alpha_m) * alpha_n
    )
    mean = np.array(
        [
            (alpha_n + np.conj(alpha_m)) / math.sqrt(2),
            -1j * (alpha_n - np.conj(alpha_m)) / math.sqrt(2),
        ]
    )
    return ComplexGaussianComponent(a_n * np.conj(a_m) * overlap, mean, 0.5 * np.eye(2))


def make_fock_ring(coefficients, epsilon: float) -> tuple[GaussianSumState, RingApproximation]:
    """
    Coherent-ring approximation of a Fock superposition as a Gaussian sum.

    Args:
        coefficients: Normalized target amplitudes c₀..c_k (k ≤ 6)
        epsilon: Ring radius ε > 0

    Returns:
        (single-mode state with (k+1)² components, ring parameters)

    Raises:
        InvalidParameterError: For unnormalized targets, ε ≤ 0 or k > 6
        IllConditionedError: If the amplitude system is too ill-conditioned
        PoorApproximationError: If the ring tail norm exceeds 10%
    """
    c = _validate_coefficients(coefficients)
    if epsilon <= 0:
        raise InvalidParameterError(f"Ring radius must be positive, got {epsilon}")
    k = c.size - 1

    if k == 0:
        # A single coherent state only reproduces |0⟩ in the ε → 0 limit; use it exactly.
        vacuum = GaussianSumState(
            (ComplexGaussianComponent(1.0, np.zeros(2), 0.5 * np.eye(2)),), 1
        )
        approx = RingApproximation(epsilon, 0, np.array([c[0]]), 1.0, 0.0)
        return vacuum, approx

    alphas = ring_alphas(epsilon, k)
    system = _coherent_fock_matrix(alphas, k)
    condition = float(np.linalg.cond(system))
    if not np.isfinite(condition) or condition > MAX_RING_CONDITION:
        raise IllConditionedError(condition)
    amplitudes = np.linalg.solve(system, c)

    infidelity = ring_infidelity(c, epsilon)
    approx = RingApproximation(
        epsilon, k, amplitudes, 1.0 - infidelity, infidelity, condition
    )
    if approx.tail_norm > MAX_TAIL_NORM:
        raise PoorApproximationError(approx.tail_norm)

    components = tuple(
        _outer_product_component(a_n, alpha_n, a_m, alpha_m)
        for a_n, alpha_n in zip(amplitudes, alphas, strict=True)
        for a_m, alpha_m in zip(amplitudes, alphas, strict=True)
    )
    state = GaussianSumState(components, 1).normalized()
    logger.debug(
        f"Ring of rank {k} at epsilon={epsilon:.6g}: infidelity {infidelity:.3e}, "
        f"condition {condition:.3e}"
    )
    return state, approx


def calibrate_epsilon(coefficients, fidelity: float, bracket: tuple[float, float] = (1e-4, 1.0)) -> float:
    """
    Ring radius giving the requested fidelity, by bisection on the exact infidelity.

    Args:
        coefficients: Normalized target amplitudes with stellar rank ≥ 1
        fidelity: Target fidelity in (0, 1)
        bracket: Search interval for ε

    Returns:
        Calibrated ε

    Raises:
        InvalidParameterError: If the target is rank 0, the fidelity is out of range,
            or the bracket does not contain the requested fidelity
    """
    c = _validate_coefficients(coefficients)
    if c.size == 1:
        raise InvalidParameterError("Vacuum targets are exact; there is no epsilon to calibrate")
    if not 0.0 < fidelity < 1.0:
        raise InvalidParameterError(f"Fidelity must lie in (0, 1), got {fidelity}")
    log_target = math.log(1.0 - fidelity)

    def excess(log_eps: float) -> float:
        return math.log(ring_infidelity(c, math.exp(log_eps))) - log_target

    lo, hi = math.log(bracket[0]), math.log(bracket[1])
    if excess(lo) > 0 or excess(hi) < 0:
        raise InvalidParameterError(
            f"Fidelity {fidelity} is not reachable for epsilon in {bracket}"
        )
    epsilon = math.exp(bisect(excess, lo, hi, xtol=1e-13))
    logger.debug(f"Calibrated epsilon={epsilon:.8g} for fidelity 1-{1.0 - fidelity:.3e}")
    return epsilon


@lru_cache(maxsize=64)
def calibrated_fock_epsilon(n: int, fidelity: float) -> float:
    """Cached ε for the number state |n⟩ at the given fidelity."""
    return calibrate_epsilon(fock_target(n), fidelity)
