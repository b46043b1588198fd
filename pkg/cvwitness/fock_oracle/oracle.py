"""
Brute-force truncated-Fock engine used to cross-check the phase-space engine.

States are kept as ensembles of (probability, pure vector). Every preparation is exact on
the levels it keeps: squeezed vacua and TMSV come from closed-form amplitudes and a
beamsplitter fed by vacuum from binomial amplitudes. ``leakage`` is the trace those
truncations dropped, accumulated through heralding and the final crop.
"""

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln

from cvwitness.base import (
    DEFAULT_FOCK_CUTOFF,
    CutoffLeakageError,
    HeraldingError,
    IllConditionedError,
    InvalidParameterError,
    PreconditionError,
)
from cvwitness.fock_oracle.operators import (
    annihilation,
    commutator_sides,
    loss_kraus,
    quadratures,
    weyl_symmetrized,
)
from cvwitness.logger import WitnessLogger
from cvwitness.states.factory import MAX_SPLIT_PHOTONS, TAP_THETA
from cvwitness.states.registry import (
    STATE_PARAMETERS,
    StateDescriptor,
    parse_descriptor,
    required_param,
)
from cvwitness.states.ring import calibrated_fock_epsilon, fock_target, ring_alphas
from cvwitness.witness.criteria import DEFAULT_PAIR, CumulantSet, EprOperatorPair

logger = WitnessLogger.get_logger("fock_oracle")

LEAKAGE_LIMIT = 1e-6
# Ensemble members lighter than this are dropped after loss and heralding.
MIN_BRANCH_PROBABILITY = 1e-16
# Operator products of order ≤ 4 are exact on a space padded by 4 levels.
MOMENT_PAD = 4
WIGNER_PAD = 30
SPLIT_THETA = math.pi / 4

# Single-mode names are oracle-only; the split names mirror the factory.
ORACLE_STATES: dict[str, dict[str, float | None]] = {
    **STATE_PARAMETERS,
    "fock": {"n": None},
    "ring": {"n": None, "eps": None, "fid": None},
    "squeezed": {"r": None},
    "phssv": {"r": None, "eta": 1.0},
}
SPLIT_STATES = ("split-sqv", "split-fock", "split-phssv")


def _combined_leakage(a: float, b: float) -> float:
    return 1.0 - (1.0 - a) * (1.0 - b)


@dataclass(frozen=True, eq=False)
class FockState:
    """
    Mixed state on a truncated n-mode Fock space as a probability-weighted ensemble.

    Attributes:
        probabilities: Ensemble weights, summing to one
        vectors: Flattened state vectors over dim^n_modes levels, mode 0 outermost
        n_modes: Number of modes
        dim: Levels per mode of the vectors
        leakage: Trace of the exact state lying outside the kept levels
    """

    probabilities: np.ndarray
    vectors: np.ndarray
    n_modes: int
    dim: int
    leakage: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def cutoff(self) -> int:
        return self.dim

    @property
    def moment_leakage(self) -> float:
        """
        Trace deficit scaled by (dim + 1)², the order of a fourth quadrature moment at the edge.

        Fourth-order moments of the kept state are off by roughly this much.
        """
        return self.leakage * (self.dim + 1) ** 2

    @cached_property
    def density_matrix(self) -> np.ndarray:
        """ρ = Σ p_k |v_k⟩⟨v_k| over the full truncated space."""
        return (self.vectors.T * self.probabilities) @ self.vectors.conj()

    def reduced_density_matrix(self, mode: int) -> np.ndarray:
        """Single-mode ρ after tracing the other mode of a two-mode state."""
        if self.n_modes == 1:
            return self.density_matrix
        if self.n_modes != 2 or mode not in (0, 1):
            raise InvalidParameterError(f"Mode {mode} invalid for {self.n_modes} modes")
        tensors = self.vectors.reshape(-1, self.dim, self.dim)
        if mode == 0:
            return np.einsum("k,kij,klj->il", self.probabilities, tensors, tensors.conj())
        return np.einsum("k,kji,kjl->il", self.probabilities, tensors, tensors.conj())

    def mean_photon_number(self, mode: int) -> float:
        rho = self.reduced_density_matrix(mode)
        return float(np.real(np.trace(rho @ np.diag(np.arange(self.dim)))))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.density_matrix).min())


def _pure(vector: np.ndarray, n_modes: int, dim: int) -> FockState:
    """Normalized pure state; the missing norm of ``vector`` becomes the leakage."""
    kept = float(np.vdot(vector, vector).real)
    if kept <= 0.0:
        raise InvalidParameterError(f"State has no weight inside {dim} levels")
    leakage = max(0.0, 1.0 - kept)
    normalized = (vector / math.sqrt(kept))[None, :].astype(complex)
    return FockState(np.ones(1), normalized, n_modes, dim, leakage)


def fock_vacuum(n_modes: int, dim: int) -> FockState:
    v = np.zeros(dim**n_modes, dtype=complex)
    v[0] = 1.0
    return _pure(v, n_modes, dim)


def fock_number_state(n: int, dim: int) -> FockState:
    if not 0 <= n < dim:
        raise InvalidParameterError(f"|{n}⟩ does not fit in {dim} levels")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return _pure(v, 1, dim)


def fock_squeezed_vacuum(r: float, dim: int) -> FockState:
    """
    S(r)|0⟩ from its closed form ⟨2m|S(r)|0⟩ = tanh(r)^m·√((2m)!)/(2^m·m!)/√cosh r.

    Levels at and above ``dim`` are dropped and counted as leakage.
    """
    t = math.tanh(r)
    v = np.zeros(dim, dtype=complex)
    if t == 0.0:
        v[0] = 1.0
        return _pure(v, 1, dim)
    m = np.arange((dim + 1) // 2)
    log_amp = (
        m * math.log(abs(t))
        + 0.5 * gammaln(2 * m + 1)
        - m * math.log(2)
        - gammaln(m + 1)
        - 0.5 * math.log(math.cosh(r))
    )
    v[2 * m] = np.sign(t) ** m * np.exp(log_amp)
    return _pure(v, 1, dim)


def fock_tmsv(r: float, dim: int) -> FockState:
    """Two-mode squeezed vacuum Σ_n tanh(r)^n/cosh r·|n, n⟩ on ``dim`` levels per mode."""
    n = np.arange(dim)
    v = np.zeros((dim, dim), dtype=complex)
    v[n, n] = np.tanh(r) ** n / math.cosh(r)
    return _pure(v.ravel(), 2, dim)


def coherent_vector(alpha: complex, dim: int) -> np.ndarray:
    """⟨m|α⟩ = e^{−|α|²/2} α^m/√m! for m < dim."""
    m = np.arange(dim)
    if alpha == 0:
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        return v
    log_mag = -0.5 * abs(alpha) ** 2 + m * math.log(abs(alpha)) - 0.5 * gammaln(m + 1)
    return np.exp(log_mag + 1j * m * np.angle(alpha))


def fock_ring_state(coefficients, epsilon: float, dim: int) -> FockState:
    """
    Coherent-ring state Σ a_n|α_n⟩ built from Fock-basis coherent vectors.

    The amplitudes come from an independent solve of the first k+1 Fock rows. The exact
    norm follows from the coherent overlaps, so the weight above ``dim`` is the leakage.
    """
    c = np.asarray(coefficients, dtype=complex)
    k = c.size - 1
    alphas = ring_alphas(epsilon, k)
    coherent = np.stack([coherent_vector(alpha, dim) for alpha in alphas], axis=1)
    system = coherent[: k + 1]
    condition = float(np.linalg.cond(system))
    if condition > 1e12:
        raise IllConditionedError(condition)
    b = np.linalg.solve(system, c)
    # ⟨α_i|α_j⟩ = exp(−|α_i|²/2 − |α_j|²/2 + ᾱ_i α_j)
    gram = np.exp(
        -0.5 * np.abs(alphas[:, None]) ** 2
        - 0.5 * np.abs(alphas[None, :]) ** 2
        + alphas.conj()[:, None] * alphas[None, :]
    )
    full_norm = float(np.real(b.conj() @ gram @ b))
    return _pure(coherent @ b / math.sqrt(full_norm), 1, dim)


def tensor_fock(a: FockState, b: FockState) -> FockState:
    if a.dim != b.dim:
        raise InvalidParameterError("Tensor factors must share the per-mode dimension")
    probabilities = np.outer(a.probabilities, b.probabilities).ravel()
    vectors = np.einsum("ai,bj->abij", a.vectors, b.vectors).reshape(len(probabilities), -1)
    leakage = _combined_leakage(a.leakage, b.leakage)
    return FockState(probabilities, vectors, a.n_modes + b.n_modes, a.dim, leakage)


def apply_gate(state: FockState, generator: sp.spmatrix) -> FockState:
    """
    Apply U = exp(G) to every ensemble member.

    Exact only when the members have no weight near the top of the truncated space.
    """
    vectors = expm_multiply(generator.tocsc(), state.vectors.T).T
    return replace(state, vectors=np.ascontiguousarray(vectors))


def split_from_vacuum(single: FockState, theta: float, dim: int) -> FockState:
    """
    Beamsplitter U = exp(θ(a₀†a₁ − a₀a₁†)) on vacuum ⊗ ``single``.

    Uses U|0, n⟩ = Σ_k √C(n, k)·sin^k θ·cos^{n−k} θ·|k, n−k⟩, so every output amplitude
    with both modes below ``dim`` is exact. Output weight at or above ``dim`` is leakage.

    Args:
        single: Single-mode input on mode 1
        theta: Mixing angle in [0, π/2]
        dim: Levels per output mode

    Returns:
        Two-mode state on ``dim`` levels per mode
    """
    if single.n_modes != 1:
        raise InvalidParameterError("The beamsplitter input must be a single-mode state")
    if not 0.0 <= theta <= math.pi / 2:
        raise InvalidParameterError(f"Mixing angle must lie in [0, π/2], got {theta}")
    k = np.arange(dim)[:, None]
    m = np.arange(dim)[None, :]
    n = k + m
    inside = n < single.dim
    binomial = np.exp(0.5 * (gammaln(n + 1) - gammaln(k + 1) - gammaln(m + 1)))
    weights = np.where(inside, binomial * math.sin(theta) ** k * math.cos(theta) ** m, 0.0)
    amplitudes = single.vectors[:, np.minimum(n, single.dim - 1)] * weights
    vectors = amplitudes.reshape(len(single.probabilities), -1)
    kept = float(np.sum(single.probabilities * np.linalg.norm(vectors, axis=1) ** 2))
    p, v = _renormalized(single.probabilities, vectors)
    leakage = _combined_leakage(single.leakage, max(0.0, 1.0 - kept))
    return FockState(p, v, 2, dim, leakage, dict(single.extras))


def _mode_first(state: FockState, mode: int) -> np.ndarray:
    """Vectors reshaped to (K, dim, rest) with ``mode`` on axis 1."""
    tensors = state.vectors.reshape((-1,) + (state.dim,) * state.n_modes)
    return np.moveaxis(tensors, mode + 1, 1).reshape(len(state.probabilities), state.dim, -1)


def _from_mode_first(tensors: np.ndarray, mode: int, n_modes: int, dim: int) -> np.ndarray:
    shaped = tensors.reshape((-1,) + (dim,) * n_modes)
    return np.moveaxis(shaped, 1, mode + 1).reshape(tensors.shape[0], -1)


def _renormalized(probabilities: np.ndarray, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(vectors, axis=1)
    keep = probabilities * norms**2 > MIN_BRANCH_PROBABILITY
    weights = probabilities[keep] * norms[keep] ** 2
    return weights / weights.sum(), vectors[keep] / norms[keep, None]


def compress(state: FockState) -> FockState:
    """
    Replace a single-mode ensemble by the eigen-ensemble of its density matrix.

    Leaves at most ``dim`` members; pure and two-mode states are returned unchanged.
    """
    if state.n_modes != 1 or len(state.probabilities) == 1:
        return state
    weights, vectors = np.linalg.eigh(state.density_matrix)
    keep = weights > MIN_BRANCH_PROBABILITY
    p = weights[keep] / weights[keep].sum()
    return replace(state, probabilities=p, vectors=np.ascontiguousarray(vectors[:, keep].T))


def apply_loss_fock(state: FockState, mode: int, eta: float) -> FockState:
    """Pure-loss channel on one mode as a Kraus sum; exact since loss never raises a level."""
    if eta == 1.0:
        return state
    tensors = _mode_first(state, mode)
    probabilities, vectors = [], []
    for k in loss_kraus(eta, state.dim):
        out = np.einsum("ij,kjr->kir", k, tensors)
        probabilities.append(state.probabilities)
        vectors.append(_from_mode_first(out, mode, state.n_modes, state.dim))
    p, v = _renormalized(np.concatenate(probabilities), np.concatenate(vectors))
    return compress(replace(state, probabilities=p, vectors=v))


def herald_click(state: FockState, mode: int) -> tuple[FockState, float]:
    """
    Condition on a click (not vacuum) on ``mode`` and trace that mode out.

    The dropped trace L of the input can hold at most L of click weight, so the heralded
    leakage is bounded by L/((1−L)·p_click + L).

    Returns:
        (heralded state on the remaining modes, click probability of the kept levels)
    """
    tensors = _mode_first(state, mode)
    # Every branch ⟨k|_mode ψ with k ≥ 1 is one ensemble member.
    branches = tensors[:, 1:, :]
    probabilities = np.repeat(state.probabilities, branches.shape[1])
    vectors = branches.reshape(-1, branches.shape[2])
    p_click = float(np.sum(probabilities * np.linalg.norm(vectors, axis=1) ** 2))
    if p_click < 1e-12:
        raise HeraldingError(f"Click probability {p_click:.3e} is too small to herald")
    p, v = _renormalized(probabilities, vectors)
    lost = state.leakage
    leakage = lost / ((1.0 - lost) * p_click + lost) if lost > 0.0 else 0.0
    heralded = FockState(p, v, state.n_modes - 1, state.dim, leakage, dict(state.extras))
    return compress(heralded), p_click


def crop(state: FockState, cutoff: int, limit: float = LEAKAGE_LIMIT) -> FockState:
    """
    Restrict the state to ``cutoff`` levels per mode and check the accumulated leakage.

    Raises:
        CutoffLeakageError: If the trace deficit, weighted by the fourth-moment scale at
            the cutoff, exceeds ``limit``
    """
    if cutoff > state.dim:
        raise InvalidParameterError(f"Cannot crop {state.dim} levels to {cutoff}")
    tensors = state.vectors.reshape((-1,) + (state.dim,) * state.n_modes)
    index = (slice(None),) + (slice(0, cutoff),) * state.n_modes
    cropped = tensors[index].reshape(len(state.probabilities), -1)
    kept = float(np.sum(state.probabilities * np.linalg.norm(cropped, axis=1) ** 2))
    p, v = _renormalized(state.probabilities, cropped)
    leakage = _combined_leakage(state.leakage, max(0.0, 1.0 - kept))
    out = FockState(p, v, state.n_modes, cutoff, leakage, dict(state.extras))
    if out.moment_leakage > limit:
        raise CutoffLeakageError(out.moment_leakage, cutoff, limit)
    if leakage > 0.0:
        logger.debug(f"Cropped to cutoff {cutoff}: leakage {leakage:.3e}")
    return out


def _phssv(r: float, dim: int) -> tuple[FockState, float]:
    tapped = split_from_vacuum(fock_squeezed_vacuum(r, dim), TAP_THETA, dim)
    return herald_click(tapped, 0)


def _ring_or_fock(descriptor: StateDescriptor, dim: int) -> FockState:
    n = int(required_param(descriptor, "n", ORACLE_STATES))
    if not 0 <= n <= MAX_SPLIT_PHOTONS:
        raise InvalidParameterError(f"Photon number must lie in [0, {MAX_SPLIT_PHOTONS}], got {n}")
    if n == 0 or not {"eps", "fid"} & descriptor.params.keys():
        return fock_number_state(n, dim)
    if "eps" in descriptor.params:
        epsilon = descriptor.params["eps"]
    else:
        epsilon = calibrated_fock_epsilon(n, descriptor.params["fid"])
    return fock_ring_state(fock_target(n), epsilon, dim)


def build_fock(
    descriptor: StateDescriptor | str,
    cutoff: int = DEFAULT_FOCK_CUTOFF,
    limit: float = LEAKAGE_LIMIT,
) -> FockState:
    """
    Density-matrix counterpart of a named factory state.

    Accepts the factory names plus the single-mode ``fock``, ``ring``, ``squeezed`` and
    ``phssv``. A ``split-fock`` without ``eps`` or ``fid`` uses the exact number state.
    For ``phssv`` and ``split-phssv`` the click probability is stored in
    ``extras["p_click"]``.

    Single-mode inputs of the split states are prepared on 2·cutoff − 1 levels, which
    holds every input level that can reach an output pair below the cutoff.

    Args:
        descriptor: State name and parameters
        cutoff: Levels per mode of the returned state
        limit: Largest tolerated ``moment_leakage``

    Returns:
        FockState on ``cutoff`` levels per mode

    Raises:
        CutoffLeakageError: If the state does not fit in ``cutoff`` levels
    """
    if isinstance(descriptor, str):
        descriptor = parse_descriptor(descriptor, ORACLE_STATES)
    name = descriptor.name
    input_dim = 2 * cutoff - 1

    def param(key: str) -> float:
        return required_param(descriptor, key, ORACLE_STATES)

    extras: dict = {}
    if name == "vacuum":
        state = fock_vacuum(2, cutoff)
    elif name == "fock":
        state = fock_number_state(int(param("n")), cutoff)
    elif name == "ring":
        state = _ring_or_fock(descriptor, cutoff)
    elif name == "squeezed":
        state = fock_squeezed_vacuum(param("r"), cutoff)
    elif name == "tmsv":
        state = fock_tmsv(param("r"), cutoff)
        state = apply_loss_fock(apply_loss_fock(state, 0, param("eta")), 1, param("eta"))
    elif name in SPLIT_STATES or name == "phssv":
        if name == "split-sqv":
            single = fock_squeezed_vacuum(param("r"), input_dim)
        elif name == "split-fock":
            single = _ring_or_fock(descriptor, input_dim)
        else:
            single, extras["p_click"] = _phssv(param("r"), input_dim)
        # Equal loss on both outputs of the splitter is the same loss on its inputs.
        state = apply_loss_fock(single, 0, param("eta"))
        if name in SPLIT_STATES:
            state = split_from_vacuum(state, SPLIT_THETA, cutoff)
    else:
        raise InvalidParameterError(f"No Fock circuit for state '{name}'")

    cropped = crop(state, cutoff, limit)
    cropped.extras.update(extras)
    logger.debug(
        f"Built {descriptor} at cutoff {cutoff}: {len(cropped.probabilities)} ensemble "
        f"members, leakage {cropped.leakage:.3e}"
    )
    return cropped


def _padded_tensors(state: FockState, pad: int) -> np.ndarray:
    """Vectors as (K, D+pad, D+pad, ...) zero-padded tensors."""
    tensors = state.vectors.reshape((-1,) + (state.dim,) * state.n_modes)
    return np.pad(tensors, [(0, 0)] + [(0, pad)] * state.n_modes)


def weyl_ordered_expectation(state: FockState, monomial: dict[int, tuple[int, int]]) -> float:
    """
    Expectation of a product of per-mode Weyl-ordered monomials.

    Args:
        state: Oracle state
        monomial: Mode index -> (power of x, power of p), each with a + b ≤ 4

    Returns:
        Real expectation, equal to the Wigner moment

    Raises:
        InvalidParameterError: For invalid modes or orders
    """
    dim = state.dim + MOMENT_PAD
    x, p = quadratures(dim)
    tensors = _padded_tensors(state, MOMENT_PAD)
    out = tensors
    for mode, (a, b) in monomial.items():
        if not 0 <= mode < state.n_modes:
            raise InvalidParameterError(f"Mode index {mode} out of range for {state.n_modes} modes")
        op = weyl_symmetrized(x, p, a, b)
        out = np.moveaxis(np.tensordot(op, out, axes=([1], [mode + 1])), 0, mode + 1)
    per_member = np.sum(tensors.conj() * out, axis=tuple(range(1, state.n_modes + 1)))
    value = np.dot(state.probabilities, per_member)
    if abs(value.imag) > 1e-9 * max(1.0, abs(value.real)):
        raise InvalidParameterError(f"Weyl expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def _linear_moment(state: FockState, g1: float, g2: float, which: int, n: int) -> float:
    """E_W[(g1·q₁ + g2·q₂)^n] with q = x (which=0) or p (which=1)."""
    total = 0.0
    for a in range(n + 1):
        coefficient = math.comb(n, a) * g1**a * g2 ** (n - a)
        if coefficient == 0.0:
            continue
        powers = {0: (a, 0) if which == 0 else (0, a), 1: (n - a, 0) if which == 0 else (0, n - a)}
        total += coefficient * weyl_ordered_expectation(state, powers)
    return total


def _cumulants(state: FockState, g1: float, g2: float, which: int) -> tuple[float, float, float]:
    mu1, mu2, mu3, mu4 = (_linear_moment(state, g1, g2, which, n) for n in range(1, 5))
    k2 = mu2 - mu1**2
    k3 = mu3 - 3 * mu2 * mu1 + 2 * mu1**3
    k4 = mu4 - 4 * mu3 * mu1 - 3 * mu2**2 + 12 * mu2 * mu1**2 - 6 * mu1**4
    return k2, k3, k4


def _check_centered(state: FockState) -> None:
    for mode in range(state.n_modes):
        for powers in ((1, 0), (0, 1)):
            mean = weyl_ordered_expectation(state, {mode: powers})
            if abs(mean) > 1e-8:
                raise PreconditionError(f"Oracle state is not centered on mode {mode} ({mean:.3e})")


def _joint_22(state: FockState, mode: int) -> tuple[float, float, float]:
    """(κ₂,₂, E[x²], E[p²]) of one mode."""
    xx = weyl_ordered_expectation(state, {mode: (2, 0)})
    pp = weyl_ordered_expectation(state, {mode: (0, 2)})
    xp = weyl_ordered_expectation(state, {mode: (1, 1)})
    x2p2 = weyl_ordered_expectation(state, {mode: (2, 2)})
    return x2p2 - xx * pp - 2 * xp**2, xx, pp


def fock_cumulant_set(state: FockState, pair: EprOperatorPair = DEFAULT_PAIR) -> CumulantSet:
    """
    CumulantSet of a two-mode oracle state from Weyl-ordered operator expectations.

    Raises:
        InvalidParameterError: If the state does not have two modes
        PreconditionError: If the state is not centered
    """
    if state.n_modes != 2:
        raise InvalidParameterError("The oracle cumulant set needs a two-mode state")
    _check_centered(state)
    k2_u, k3_u, k4_u = _cumulants(state, pair.g1, pair.g2, 0)
    k2_v, k3_v, k4_v = _cumulants(state, pair.h1, pair.h2, 1)
    k22_1, x1, p1 = _joint_22(state, 0)
    k22_2, x2, p2 = _joint_22(state, 1)
    return CumulantSet(
        k2_u=k2_u,
        k4_u=k4_u,
        k2_v=k2_v,
        k4_v=k4_v,
        k22_m1=k22_1,
        k22_m2=k22_2,
        k2_x1=x1,
        k2_x2=x2,
        k2_p1=p1,
        k2_p2=p2,
        pair=pair,
        k3_u=k3_u,
        k3_v=k3_v,
    )


def uncertainty_residual(state: FockState, mode: int = 0) -> float:
    """
    Operator-ordered fourth-moment uncertainty residual, ≥ 0 for physical states.

    μ₄(x) + μ₄(p) − 2√(|⟨{x,p}⟩|² + |½⟨{x²,p²}⟩ − ⟨x²⟩⟨p²⟩|²) − ⟨x²⟩² − ⟨p²⟩²
    """
    rho = state.reduced_density_matrix(mode)
    dim = state.dim + MOMENT_PAD
    padded = np.zeros((dim, dim), dtype=complex)
    padded[: state.dim, : state.dim] = rho
    x, p = quadratures(dim)

    def expect(op: np.ndarray) -> complex:
        return np.trace(padded @ op)

    x2, p2 = x @ x, p @ p
    mu4 = (expect(x2 @ x2) + expect(p2 @ p2)).real
    anti = expect(x @ p + p @ x)
    mixed = 0.5 * expect(x2 @ p2 + p2 @ x2) - expect(x2) * expect(p2)
    bound = 2 * math.sqrt(abs(anti) ** 2 + abs(mixed) ** 2)
    return float(mu4 - bound - expect(x2).real ** 2 - expect(p2).real ** 2)


def wigner_value(state: FockState, point: tuple[float, float], mode: int = 0) -> float:
    """
    Wigner function of one mode at (x, p) via displaced parity.

    W(x, p) = (1/π)·Tr[ρ D(α) Π D(α)†] with α = (x + ip)/√2.
    """
    x, p = point
    rho = state.reduced_density_matrix(mode)
    dim = state.dim + WIGNER_PAD
    padded = np.zeros((dim, dim), dtype=complex)
    padded[: state.dim, : state.dim] = rho
    alpha = (x + 1j * p) / math.sqrt(2)
    a = annihilation(dim).toarray()
    displacement = expm(alpha * a.conj().T - np.conj(alpha) * a)
    parity = np.diag((-1.0) ** np.arange(dim))
    value = np.trace(padded @ displacement @ parity @ displacement.conj().T)
    return float(value.real / math.pi)


def verify_commutator_identity(k: int, cutoff: int = DEFAULT_FOCK_CUTOFF) -> float:
    """
    Operator-norm residual of [x^k, p^k] = i·k·Σ_m x^{k−1−m} p^{k−1} x^m on the interior.

    The outermost 5 levels are excluded, where truncation breaks the canonical algebra.

    Raises:
        InvalidParameterError: If k is not 1, 2 or 3
    """
    if k not in (1, 2, 3):
        raise InvalidParameterError(f"Commutator identity is checked for k in 1..3, got {k}")
    lhs, rhs = commutator_sides(k, cutoff)
    interior = slice(0, cutoff - 5)
    residual = float(np.linalg.norm((lhs - rhs)[interior, interior], 2))
    logger.debug(f"Commutator identity k={k}: residual {residual:.3e}")
    return residual
