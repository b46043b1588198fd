"""
Non-unitary Gaussian operations on affine Gaussian sums.

Every operation acts component by component and keeps the conjugate pairing of the
input, so real-valued marginals stay real.
"""

import math

import numpy as np

from cvwitness.base import InvalidParameterError, PreconditionError
from cvwitness.logger import WitnessLogger
from cvwitness.phase_space.state import (
    ComplexGaussianComponent,
    GaussianSumState,
    check_condition,
    first_moments,
    mode_indices,
    real_part,
    second_moments,
)
from cvwitness.phase_space.symplectic import apply_symplectic, rotate

logger = WitnessLogger.get_logger("phase_space")

CENTERED_TOL = 1e-10
STANDARD_FORM_TOL = 1e-10


def apply_loss(state: GaussianSumState, mode: int, eta: float) -> GaussianSumState:
    """
    Pure-loss channel of efficiency η on one mode.

    The mode's mean scales by √η, its covariance block becomes η·block + (1−η)/2·I,
    and its cross-covariances with other modes scale by √η.

    Args:
        state: Input state
        mode: Mode index
        eta: Transmission efficiency in [0, 1]

    Returns:
        State after the channel

    Raises:
        InvalidParameterError: If η is outside [0, 1] or the mode is invalid
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterError(f"Loss efficiency must lie in [0, 1], got {eta}")
    idx = mode_indices(mode, state.n_modes)
    scale = np.ones(state.dim)
    scale[idx] = math.sqrt(eta)
    noise = np.zeros((state.dim, state.dim))
    noise[idx, idx] = 0.5 * (1.0 - eta)

    components = tuple(
        ComplexGaussianComponent(
            c.weight, scale * c.mean, scale[:, None] * c.cov * scale[None, :] + noise
        )
        for c in state.components
    )
    return GaussianSumState(components, state.n_modes)


def apply_loss_all(state: GaussianSumState, eta: float) -> GaussianSumState:
    """Apply the same pure-loss channel to every mode."""
    for mode in range(state.n_modes):
        state = apply_loss(state, mode, eta)
    return state


def _remaining(mode: int, n_modes: int) -> tuple[list[int], list[int]]:
    a = mode_indices(mode, n_modes)
    b = [i for i in range(2 * n_modes) if i not in a]
    return a, b


def partial_trace(state: GaussianSumState, mode: int) -> GaussianSumState:
    """
    Trace out one mode by marginalizing every component.

    Raises:
        InvalidParameterError: If the state has a single mode or the index is invalid
    """
    if state.n_modes < 2:
        raise InvalidParameterError("partial_trace needs at least two modes")
    _, keep = _remaining(mode, state.n_modes)
    components = tuple(
        ComplexGaussianComponent(c.weight, c.mean[keep], c.cov[np.ix_(keep, keep)])
        for c in state.components
    )
    return GaussianSumState(components, state.n_modes - 1)


def _vacuum_projection(
    component: ComplexGaussianComponent, a: list[int], b: list[int], index: int
) -> tuple[complex, np.ndarray, np.ndarray]:
    """
    Condition one component on the vacuum outcome of the modes in ``a``.

    Returns:
        (log of the overlap factor, new mean_B, new Σ_BB)
    """
    m = component.cov[np.ix_(a, a)] + 0.5 * np.eye(len(a))
    check_condition(m, index)
    mean_a = component.mean[a]
    cross = component.cov[np.ix_(b, a)]
    m_inv = np.linalg.inv(m)
    _, logdet = np.linalg.slogdet(m)
    log_factor = -0.5 * (mean_a @ m_inv @ mean_a) - 0.5 * logdet
    mean_b = component.mean[b] - cross @ m_inv @ mean_a
    cov_b = component.cov[np.ix_(b, b)] - cross @ m_inv @ cross.T
    return complex(log_factor), mean_b, cov_b


def project_vacuum(state: GaussianSumState, mode: int) -> tuple[GaussianSumState, float]:
    """
    Apply ⟨0|·|0⟩ on one mode (vacuum heralding).

    For each component with blocks A (the mode) and B (the rest), the Gaussian integral
    of the A-marginal against the vacuum Gaussian gives the weight factor
    exp(−½μ_Aᵀ(Σ_AA+½I)⁻¹μ_A)/√det(Σ_AA+½I), and the remainder is the Gaussian
    conditional with Schur-complement covariance.

    Args:
        state: State with at least two modes
        mode: Mode projected on vacuum

    Returns:
        (unnormalized remainder state, vacuum probability)

    Raises:
        InvalidParameterError: If the state has a single mode
        DegenerateComponentError: If Σ_AA + ½I is singular for some component
    """
    if state.n_modes < 2:
        raise InvalidParameterError("project_vacuum needs at least two modes")
    a, b = _remaining(mode, state.n_modes)
    components = []
    for index, c in enumerate(state.components):
        log_factor, mean_b, cov_b = _vacuum_projection(c, a, b, index)
        components.append(ComplexGaussianComponent(c.weight * np.exp(log_factor), mean_b, cov_b))
    projected = GaussianSumState(tuple(components), state.n_modes - 1)
    probability = real_part(projected.weights, "Vacuum probability")
    return projected, probability


def vacuum_log_probability(state: GaussianSumState, mode: int) -> float:
    """
    log⟨0|ρ_mode|0⟩ for a single-component, unit-weight state.

    Used where 1 − P(vacuum) is tiny and must be formed with expm1.

    Raises:
        InvalidParameterError: If the state is not a single normalized Gaussian
    """
    if len(state) != 1 or abs(state.components[0].weight - 1.0) > 1e-14:
        raise InvalidParameterError("vacuum_log_probability needs a single unit-weight Gaussian")
    a, b = _remaining(mode, state.n_modes)
    log_factor, _, _ = _vacuum_projection(state.components[0], a, b, 0)
    if abs(log_factor.imag) > 1e-12:
        raise InvalidParameterError("Vacuum log-probability is not real")
    return log_factor.real


def tensor_product(a: GaussianSumState, b: GaussianSumState) -> GaussianSumState:
    """
    ρ_a ⊗ ρ_b with the modes of ``a`` first.

    Component count is len(a)·len(b); weights multiply and covariances are block-diagonal.
    """
    dim_a, dim_b = a.dim, b.dim
    components = []
    for ca in a.components:
        for cb in b.components:
            cov = np.zeros((dim_a + dim_b, dim_a + dim_b))
            cov[:dim_a, :dim_a] = ca.cov
            cov[dim_a:, dim_a:] = cb.cov
            components.append(
                ComplexGaussianComponent(
                    ca.weight * cb.weight, np.concatenate([ca.mean, cb.mean]), cov
                )
            )
    return GaussianSumState(tuple(components), a.n_modes + b.n_modes)


def center_state(state: GaussianSumState) -> GaussianSumState:
    """Shift every component mean by −⟨ξ⟩ so the state has zero first moments."""
    shift = first_moments(state)
    components = tuple(
        ComplexGaussianComponent(c.weight, c.mean - shift, c.cov) for c in state.components
    )
    return GaussianSumState(components, state.n_modes)


def standard_form_angles(state: GaussianSumState) -> list[float]:
    """
    Per-mode rotation angles that remove the state-level x–p correlation.

    For a mode with marginal second moments (M_xx, M_xp, M_pp), rotate(θ) with
    θ = ½·atan2(−2M_xp, M_xx − M_pp) makes the rotated ⟨{x,p}⟩ vanish. Blocks that
    are already diagonal keep θ = 0.
    """
    second = second_moments(state)
    angles = []
    for mode in range(state.n_modes):
        ix, ip = mode_indices(mode, state.n_modes)
        m_xx, m_pp, m_xp = second[ix, ix], second[ip, ip], second[ix, ip]
        if abs(m_xp) <= 1e-14 * max(1.0, m_xx + m_pp):
            angles.append(0.0)
        else:
            angles.append(0.5 * math.atan2(-2.0 * m_xp, m_xx - m_pp))
    return angles


def reduce_to_standard_form(state: GaussianSumState) -> GaussianSumState:
    """
    Rotate each mode locally so that ⟨{x̂_i, p̂_i}⟩ = 0 for both modes.

    Only the per-mode x–p correlations are removed; cross-block sparsity is not enforced.

    Raises:
        InvalidParameterError: If the state does not have two modes
        PreconditionError: If the state is not centered
    """
    if state.n_modes != 2:
        raise InvalidParameterError("reduce_to_standard_form needs a two-mode state")
    mu = first_moments(state)
    if np.max(np.abs(mu)) > CENTERED_TOL:
        raise PreconditionError(
            f"State is not centered (max |<ξ>| = {np.max(np.abs(mu)):.3e}); apply center_state first"
        )
    for mode, angle in enumerate(standard_form_angles(state)):
        if angle != 0.0:
            logger.debug(f"Standard form: rotating mode {mode} by {angle:.6g} rad")
            state = apply_symplectic(state, rotate(angle, mode, state.n_modes))
    return state


def check_centered_standard_form(state: GaussianSumState) -> None:
    """
    Verify the preconditions of the fourth-order cumulant formulas.

    Raises:
        PreconditionError: With instructions naming the fixing operation
    """
    mu = first_moments(state)
    if np.max(np.abs(mu)) > CENTERED_TOL:
        raise PreconditionError(
            f"State is not centered (max |<ξ>| = {np.max(np.abs(mu)):.3e}); apply center_state"
        )
    second = second_moments(state)
    for mode in range(state.n_modes):
        ix, ip = mode_indices(mode, state.n_modes)
        if abs(second[ix, ip]) > STANDARD_FORM_TOL:
            raise PreconditionError(
                f"Mode {mode} has <{{x,p}}>/2 = {second[ix, ip]:.3e}; apply reduce_to_standard_form"
            )
