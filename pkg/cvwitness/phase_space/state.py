"""
Phase-space state types.

A state is an affine combination of complex-weighted multivariate Gaussians,

    W(ξ) = Σ_k c_k G_{μ_k, Σ_k}(ξ),

over the quadrature vector ξ = (x₁, p₁, x₂, p₂, ...) in units where ħ = 1 and the
vacuum variance is 1/2. Weights and means may be complex; covariances are real.
Components need not be physical on their own, only the sum is.
"""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from cvwitness.base import DegenerateComponentError, InvalidParameterError, RealityCheckError

# Largest covariance condition number accepted before a component counts as degenerate.
MAX_CONDITION = 1e12
NORMALIZATION_TOL = 1e-10
REALITY_TOL = 1e-10
# Relative floor applied to the sum of |terms| when weights cancel catastrophically.
CANCELLATION_TOL = 1e-13


def compensated_sum(values: Iterable[complex]) -> complex:
    """
    Sum complex values with exact (compensated) summation of each part.

    Ring approximations produce weights of size ~1/ε^k with alternating signs,
    so naive summation loses most significant digits.

    Args:
        values: Complex or real terms

    Returns:
        The correctly rounded complex sum
    """
    terms = [complex(v) for v in values]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def real_part(
    terms: Sequence[complex] | np.ndarray, what: str, tolerance: float = REALITY_TOL
) -> float:
    """
    Sum terms and return the real result after a reality check.

    The allowed imaginary residue is ``tolerance·(1 + |Re|)`` plus a cancellation floor
    proportional to ``Σ|terms|``.

    Args:
        terms: Complex terms whose sum must be real
        what: Description used in the error message
        tolerance: Relative tolerance on the imaginary residue

    Returns:
        Real part of the compensated sum

    Raises:
        RealityCheckError: If the imaginary residue exceeds the tolerance
    """
    arr = np.asarray(terms, dtype=complex).ravel()
    total = compensated_sum(arr)
    scale = math.fsum(np.abs(arr))
    allowed = tolerance * (1.0 + abs(total.real)) + CANCELLATION_TOL * scale
    if abs(total.imag) > allowed:
        raise RealityCheckError(what, abs(total.imag), allowed)
    return total.real


@dataclass(frozen=True, eq=False)
class ComplexGaussianComponent:
    """
    One term c·G_{μ,Σ} of a Wigner function.

    Attributes:
        weight: Complex weight c
        mean: Complex mean vector μ of length 2N
        cov: Real symmetric covariance Σ of shape (2N, 2N)
    """

    weight: complex
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=complex).ravel()
        cov_in = np.asarray(self.cov)
        if np.iscomplexobj(cov_in):
            if np.max(np.abs(cov_in.imag), initial=0.0) > 0.0:
                raise InvalidParameterError("Complex covariances are not supported")
            cov_in = cov_in.real
        cov = np.array(cov_in, dtype=float)

        dim = mean.shape[0]
        if dim == 0 or dim % 2:
            raise InvalidParameterError(f"Mean length must be a positive even number, got {dim}")
        if cov.shape != (dim, dim):
            raise InvalidParameterError(f"Covariance shape {cov.shape} does not match mean length {dim}")

        scale = max(float(np.max(np.abs(cov))), 1e-300)
        if np.max(np.abs(cov - cov.T)) > 1e-12 * scale:
            raise InvalidParameterError("Covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)

        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "weight", complex(self.weight))
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.shape[0] // 2

    def conjugate(self) -> "ComplexGaussianComponent":
        return ComplexGaussianComponent(self.weight.conjugate(), self.mean.conj(), self.cov)

    def with_weight(self, weight: complex) -> "ComplexGaussianComponent":
        return ComplexGaussianComponent(weight, self.mean, self.cov)


@dataclass(frozen=True, eq=False)
class GaussianSumState:
    """
    N-mode state as an ordered tuple of complex Gaussian components.

    The state is normalized when Σ c_k = 1. Heralding primitives return
    unnormalized states; callers divide by the returned probability.

    Attributes:
        components: Components of the affine sum
        n_modes: Number of modes N
    """

    components: tuple[ComplexGaussianComponent, ...]
    n_modes: int

    def __post_init__(self) -> None:
        components = tuple(self.components)
        if not components:
            raise InvalidParameterError("A state needs at least one component")
        if self.n_modes < 1:
            raise InvalidParameterError(f"n_modes must be positive, got {self.n_modes}")
        for index, component in enumerate(components):
            if component.n_modes != self.n_modes:
                raise InvalidParameterError(
                    f"Component {index} has {component.n_modes} modes, state has {self.n_modes}"
                )
        object.__setattr__(self, "components", components)

    @classmethod
    def from_arrays(
        cls, weights: Sequence[complex], means: np.ndarray, covs: np.ndarray
    ) -> "GaussianSumState":
        """
        Build a state from stacked arrays.

        Args:
            weights: K complex weights
            means: (K, 2N) complex means
            covs: (K, 2N, 2N) real covariances

        Returns:
            GaussianSumState with K components
        """
        means = np.atleast_2d(np.asarray(means, dtype=complex))
        covs = np.asarray(covs, dtype=float)
        if covs.ndim == 2:
            covs = covs[None]
        components = tuple(
            ComplexGaussianComponent(w, m, c) for w, m, c in zip(weights, means, covs, strict=True)
        )
        return cls(components, means.shape[1] // 2)

    def __len__(self) -> int:
        return len(self.components)

    @property
    def dim(self) -> int:
        return 2 * self.n_modes

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components], dtype=complex)

    @property
    def means(self) -> np.ndarray:
        return np.stack([c.mean for c in self.components])

    @property
    def covs(self) -> np.ndarray:
        return np.stack([c.cov for c in self.components])

    @property
    def total_weight(self) -> complex:
        return compensated_sum(self.weights)

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return abs(self.total_weight - 1.0) <= tol

    def scaled(self, factor: complex) -> "GaussianSumState":
        """Return the state with every weight multiplied by ``factor``."""
        return GaussianSumState(
            tuple(c.with_weight(c.weight * factor) for c in self.components), self.n_modes
        )

    def normalized(self) -> "GaussianSumState":
        """
        Return the state rescaled so its weights sum to one.

        Raises:
            InvalidParameterError: If the total weight vanishes
        """
        total = self.total_weight
        if abs(total) < 1e-300:
            raise InvalidParameterError("Cannot normalize a state with zero total weight")
        return self.scaled(1.0 / total)

    def concat(self, other: "GaussianSumState") -> "GaussianSumState":
        """Affine sum of two states over the same modes (weights are not renormalized)."""
        if other.n_modes != self.n_modes:
            raise InvalidParameterError("Cannot add states with different mode counts")
        return GaussianSumState(self.components + other.components, self.n_modes)


def mode_indices(mode: int, n_modes: int) -> list[int]:
    """
    Quadrature indices (x, p) of a mode.

    Raises:
        InvalidParameterError: If the mode index is out of range
    """
    if not 0 <= mode < n_modes:
        raise InvalidParameterError(f"Mode index {mode} out of range for {n_modes} modes")
    return [2 * mode, 2 * mode + 1]


def check_condition(cov: np.ndarray, index: int) -> None:
    """Raise DegenerateComponentError if ``cov`` is too badly conditioned to invert."""
    condition = float(np.linalg.cond(cov))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise DegenerateComponentError(index, condition)


def gaussian_densities(means: np.ndarray, covs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """
    Evaluate normalized Gaussians with (possibly complex) means at real points.

    Args:
        means: (K, d) means
        covs: (K, d, d) real covariances
        points: (M, d) real evaluation points

    Returns:
        (K, M) complex array of G_k(point_m)

    Raises:
        DegenerateComponentError: If a covariance is ill-conditioned
    """
    means = np.atleast_2d(means)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    k_count, d = means.shape
    out = np.empty((k_count, points.shape[0]), dtype=complex)
    log_norm = -0.5 * d * math.log(2 * math.pi)
    for k in range(k_count):
        check_condition(covs[k], k)
        inv = np.linalg.inv(covs[k])
        _, logdet = np.linalg.slogdet(covs[k])
        diff = points - means[k]
        quad = np.einsum("mi,ij,mj->m", diff, inv, diff)
        out[k] = np.exp(log_norm - 0.5 * logdet - 0.5 * quad)
    return out


def wigner_values(state: GaussianSumState, points: np.ndarray) -> np.ndarray:
    """
    Evaluate the Wigner function on a batch of phase-space points.

    Args:
        state: State to evaluate
        points: (M, 2N) real points

    Returns:
        (M,) real Wigner values

    Raises:
        InvalidParameterError: If point dimension does not match the state
        RealityCheckError: If any value has a significant imaginary residue
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != state.dim:
        raise InvalidParameterError(
            f"Points have dimension {points.shape[1]}, state needs {state.dim}"
        )
    terms = state.weights[:, None] * gaussian_densities(state.means, state.covs, points)
    return np.array(
        [real_part(terms[:, m], "Wigner value") for m in range(points.shape[0])], dtype=float
    )


def wigner_eval(state: GaussianSumState, point: Sequence[float] | np.ndarray) -> float:
    """
    Evaluate the Wigner function at one phase-space point.

    Args:
        state: State to evaluate
        point: Real vector (x₁, p₁, ..., x_N, p_N)

    Returns:
        Σ_k c_k G_k(point) after the reality check

    Raises:
        DegenerateComponentError: If a component covariance is singular
        RealityCheckError: If the imaginary residue is significant
    """
    point = np.asarray(point, dtype=float).ravel()
    if point.shape[0] != state.dim:
        raise InvalidParameterError(f"Point has length {point.shape[0]}, state needs {state.dim}")
    return float(wigner_values(state, point[None, :])[0])


def first_moments(state: GaussianSumState) -> np.ndarray:
    """
    State-level first moments ⟨ξ⟩ = Σ_k c_k μ_k.

    Returns:
        Real vector of length 2N

    Raises:
        RealityCheckError: If a moment is not real
    """
    terms = state.weights[:, None] * state.means
    return np.array(
        [real_part(terms[:, i], f"First moment {i}") for i in range(state.dim)], dtype=float
    )


def second_moments(state: GaussianSumState) -> np.ndarray:
    """
    State-level raw second moments E_W[ξ_i ξ_j] = Σ_k c_k (Σ_k + μ_k μ_kᵀ)_ij.

    These are the symmetrized operator expectations ½⟨{ξ̂_i, ξ̂_j}⟩.

    Returns:
        Real symmetric (2N, 2N) matrix
    """
    means = state.means
    terms = state.weights[:, None, None] * (state.covs + means[:, :, None] * means[:, None, :])
    dim = state.dim
    out = np.empty((dim, dim), dtype=float)
    for i in range(dim):
        for j in range(i, dim):
            out[i, j] = out[j, i] = real_part(terms[:, i, j], f"Second moment ({i},{j})")
    return out


def state_covariance(state: GaussianSumState) -> np.ndarray:
    """Central covariance matrix of the whole state."""
    mu = first_moments(state)
    return second_moments(state) - np.outer(mu, mu)


def state_overlap(a: GaussianSumState, b: GaussianSumState) -> float:
    """
    Hilbert-Schmidt overlap Tr[ρ_a ρ_b] = (2π)^N ∫ W_a W_b.

    Each component pair contributes c_k c_l G_{0, Σ_k+Σ_l}(μ_k − μ_l), and the (2π)^N
    prefactor cancels the Gaussian normalization, leaving exp(−½δᵀ(Σ_k+Σ_l)⁻¹δ)/√det.

    Args:
        a: First state
        b: Second state over the same number of modes

    Returns:
        Real overlap (purity when a is b)

    Raises:
        InvalidParameterError: If mode counts differ
        DegenerateComponentError: If a pairwise covariance sum is singular
    """
    if a.n_modes != b.n_modes:
        raise InvalidParameterError(f"Cannot overlap {a.n_modes}-mode and {b.n_modes}-mode states")
    terms: list[complex] = []
    for k, ca in enumerate(a.components):
        for cb in b.components:
            total = ca.cov + cb.cov
            check_condition(total, k)
            delta = ca.mean - cb.mean
            quad = delta @ np.linalg.solve(total, delta)
            _, logdet = np.linalg.slogdet(total)
            terms.append(ca.weight * cb.weight * np.exp(-0.5 * quad - 0.5 * logdet))
    return real_part(terms, "State overlap")

