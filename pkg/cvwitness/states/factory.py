"""
Constructors for the reference states.

Split states put the non-vacuum input on mode 1 and vacuum on mode 0, then mix them on
beamsplitter(π/4, 0, 1). With the pair (1, −1, 1, 1) the operator u = x₁ − x₂ is then the
vacuum port and v = p₁ + p₂ = √2·p_in carries the input.
"""

import math

import numpy as np

from cvwitness.base import HeraldingError, InvalidParameterError
from cvwitness.logger import WitnessLogger
from cvwitness.phase_space import (
    ComplexGaussianComponent,
    GaussianSumState,
    apply_loss,
    apply_loss_all,
    apply_symplectic,
    beamsplitter,
    partial_trace,
    project_vacuum,
    squeeze,
    tensor_product,
    vacuum_log_probability,
)
from cvwitness.states.ring import calibrated_fock_epsilon, fock_target, make_fock_ring

logger = WitnessLogger.get_logger("states")

# Tap beamsplitter angle of the heralding circuit: 1% reflectivity.
TAP_THETA = math.acos(math.sqrt(0.99))
MIN_CLICK_PROBABILITY = 1e-12
MAX_SPLIT_PHOTONS = 4


def _check_squeezing(r: float) -> None:
    if not math.isfinite(r) or r < 0:
        raise InvalidParameterError(f"Squeezing must be finite and non-negative, got {r}")


def _check_efficiency(eta: float) -> None:
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterError(f"Loss efficiency must lie in [0, 1], got {eta}")


def _single(cov: np.ndarray, mean: np.ndarray | None = None) -> GaussianSumState:
    n = cov.shape[0]
    mean = np.zeros(n) if mean is None else mean
    return GaussianSumState((ComplexGaussianComponent(1.0, mean, cov),), n // 2)


def make_vacuum(n_modes: int = 1) -> GaussianSumState:
    """N-mode vacuum: one component with covariance ½I."""
    if n_modes < 1:
        raise InvalidParameterError(f"n_modes must be positive, got {n_modes}")
    return _single(0.5 * np.eye(2 * n_modes))


def make_coherent(*alphas: complex) -> GaussianSumState:
    """
    Product of coherent states |α₁⟩⊗|α₂⟩⊗..., one amplitude per mode.

    Means follow x = √2·Re α, p = √2·Im α.
    """
    if not alphas:
        raise InvalidParameterError("make_coherent needs at least one amplitude")
    mean = np.empty(2 * len(alphas))
    for mode, alpha in enumerate(alphas):
        mean[2 * mode] = math.sqrt(2) * complex(alpha).real
        mean[2 * mode + 1] = math.sqrt(2) * complex(alpha).imag
    return _single(0.5 * np.eye(2 * len(alphas)), mean)


def make_squeezed_vacuum(r: float) -> GaussianSumState:
    """Single-mode S(r)|0⟩ with Var(x) = e^{2r}/2 and Var(p) = e^{−2r}/2."""
    _check_squeezing(r)
    return apply_symplectic(make_vacuum(1), squeeze(r, 0, 1))


def make_tmsv(r: float) -> GaussianSumState:
    """
    Two-mode squeezed vacuum.

    Diagonal ½cosh2r, x–x correlation +½sinh2r and p–p correlation −½sinh2r,
    so Var(x₁ − x₂) = Var(p₁ + p₂) = e^{−2r}.
    """
    _check_squeezing(r)
    ch, sh = 0.5 * math.cosh(2 * r), 0.5 * math.sinh(2 * r)
    cov = np.array(
        [
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ]
    )
    return _single(cov)


def make_split_squeezed_vacuum(r: float) -> GaussianSumState:
    """Squeezed vacuum on mode 1 split with vacuum on a balanced beamsplitter."""
    _check_squeezing(r)
    up, down = math.exp(2 * r), math.exp(-2 * r)
    cov = 0.25 * np.array(
        [
            [1 + up, 0.0, up - 1, 0.0],
            [0.0, 1 + down, 0.0, down - 1],
            [up - 1, 0.0, 1 + up, 0.0],
            [0.0, down - 1, 0.0, 1 + down],
        ]
    )
    return _single(cov)


def split_on_vacuum(state: GaussianSumState) -> GaussianSumState:
    """Send a single-mode state into port 1 of beamsplitter(π/4) with vacuum in port 0."""
    if state.n_modes != 1:
        raise InvalidParameterError("Only single-mode states can be split")
    joint = tensor_product(make_vacuum(1), state)
    return apply_symplectic(joint, beamsplitter(math.pi / 4, 0, 1))


def make_split_fock(n: int, epsilon: float, eta: float = 1.0) -> GaussianSumState:
    """
    Ring-approximated |n⟩, after optional loss η, split on a balanced beamsplitter.

    Args:
        n: Photon number, at most 4
        epsilon: Ring radius
        eta: Loss efficiency applied before the split

    Returns:
        Two-mode state with (n+1)² components (one for n = 0)
    """
    if not 0 <= n <= MAX_SPLIT_PHOTONS:
        raise InvalidParameterError(f"Photon number must lie in [0, {MAX_SPLIT_PHOTONS}], got {n}")
    _check_efficiency(eta)
    ring, _ = make_fock_ring(fock_target(n), epsilon)
    if eta < 1.0:
        ring = apply_loss(ring, 0, eta)
    return split_on_vacuum(ring)


def make_split_fock_for_fidelity(n: int, fidelity: float, eta: float = 1.0) -> GaussianSumState:
    """Split Fock state whose ring radius is calibrated to the requested fidelity."""
    if n == 0:
        return make_split_fock(0, 1.0, eta)
    return make_split_fock(n, calibrated_fock_epsilon(n, fidelity), eta)


def make_phssv(r: float, tap_theta: float = TAP_THETA) -> tuple[GaussianSumState, float]:
    """
    Heralded photon-subtracted squeezed vacuum.

    Squeezed vacuum on mode 1 is tapped by beamsplitter(θ) into mode 0. A click on mode 0
    keeps Tr₀[ρ] − Tr₀[ρ|0⟩⟨0|₀], which is a mixed two-component Gaussian sum.

    Args:
        r: Squeezing parameter
        tap_theta: Tap beamsplitter angle (default gives 1% reflectivity)

    Returns:
        (normalized single-mode state, click probability)

    Raises:
        HeraldingError: If the click probability is below 1e-12
    """
    _check_squeezing(r)
    phi = apply_symplectic(make_vacuum(2), squeeze(r, 1, 2))
    phi = apply_symplectic(phi, beamsplitter(tap_theta, 0, 1))

    traced = partial_trace(phi, 0)
    projected, _ = project_vacuum(phi, 0)
    # 1 − P(vacuum) without cancellation at small r.
    p_click = -math.expm1(vacuum_log_probability(phi, 0))
    if p_click < MIN_CLICK_PROBABILITY:
        raise HeraldingError(
            f"Click probability {p_click:.3e} is below {MIN_CLICK_PROBABILITY:g} (r={r:g})"
        )

    heralded = traced.scaled(1.0 / p_click).concat(projected.scaled(-1.0 / p_click))
    logger.debug(f"PhSSV r={r:g}: p(click) = {p_click:.6e}")
    return heralded.normalized(), p_click


def make_split_lossy_phssv(r: float, eta: float) -> GaussianSumState:
    """Heralded PhSSV through loss η, then split with vacuum on a balanced beamsplitter."""
    _check_efficiency(eta)
    heralded, _ = make_phssv(r)
    if eta < 1.0:
        heralded = apply_loss(heralded, 0, eta)
    return split_on_vacuum(heralded)


def make_lossy(state: GaussianSumState, eta: float) -> GaussianSumState:
    """Same pure-loss channel on every mode; a no-op at η = 1."""
    _check_efficiency(eta)
    return state if eta == 1.0 else apply_loss_all(state, eta)
