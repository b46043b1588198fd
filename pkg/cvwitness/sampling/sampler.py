"""
Exact rejection sampling of homodyne and heterodyne marginals.

A quadrature marginal of a Gaussian-sum state is a signed mixture f = Σ c_k G_k whose
components may have complex means μ_k = m_k + i·n_k. Because

    |c_k G(x; m_k + i n_k, Σ_k)| = |c_k|·exp(½ n_kᵀΣ_k⁻¹n_k)·G(x; m_k, Σ_k),

the real mixture with those weights bounds |f| pointwise. Proposals come from that
envelope and are accepted with probability f/envelope, giving exact draws from f with
acceptance rate 1/Z, where Z is the envelope's total weight.

Proposals are drawn in fixed-size chunks. Chunk j always uses the Philox stream keyed by
(seed, j), and accepted draws are concatenated in chunk order, so the output only
depends on the seed.
"""

import math
from concurrent.futures import ProcessPoolExecutor
import sys
from dataclasses import dataclass
from enum import Enum

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # pragma: no cover - Python 3.10 backport of enum.StrEnum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np
from scipy import stats

from cvwitness.base import DEFAULT_CHUNK_SIZE, InvalidParameterError, SamplingError
from cvwitness.logger import WitnessLogger
from cvwitness.metrics import get_metrics
from cvwitness.phase_space import GaussianSumState, gaussian_densities
from cvwitness.phase_space.state import check_condition, mode_indices

logger = WitnessLogger.get_logger("sampling")

MIN_ACCEPTANCE_RATE = 1e-4
ACCEPTANCE_TOL = 1e-12
# Rounding in f = Σ c G grows with the envelope weight Z.
CANCELLATION_TOL = 1e-15


class Layout(StrEnum):
    XX = "xx"
    PP = "pp"
    HET1 = "het1"
    HET2 = "het2"

    @classmethod
    def heterodyne(cls, mode: int) -> "Layout":
        return cls.HET1 if mode == 0 else cls.HET2


@dataclass(frozen=True, eq=False)
class QuadratureSamples:
    """
    Measured quadrature pairs.

    Attributes:
        layout: xx = (x₁, x₂), pp = (p₁, p₂), het1/het2 = (x_i, p_i) heterodyne on one mode
        data: (S, 2) real array
        seed: Seed the samples were drawn with
        state_descriptor: Name and parameters of the sampled state
    """

    layout: Layout
    data: np.ndarray
    seed: int
    state_descriptor: str = ""

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] == 0:
            raise InvalidParameterError(f"Samples must be a nonempty (S, 2) array, got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise InvalidParameterError("Samples contain non-finite values")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "layout", Layout(self.layout))

    @property
    def size(self) -> int:
        return self.data.shape[0]

    @property
    def a(self) -> np.ndarray:
        return self.data[:, 0]

    @property
    def b(self) -> np.ndarray:
        return self.data[:, 1]


@dataclass(frozen=True, eq=False)
class SignedMixture:
    """
    Real density Σ c_k G(μ_k, Σ_k) with complex weights and means, in d ≤ 2 dimensions.

    Attributes:
        weights: (K,) complex weights summing to one
        means: (K, d) complex means
        covs: (K, d, d) real covariances
    """

    weights: np.ndarray
    means: np.ndarray
    covs: np.ndarray

    @property
    def dim(self) -> int:
        return self.means.shape[1]

    def density(self, points: np.ndarray) -> np.ndarray:
        """Real part of Σ c_k G_k at (M, d) points."""
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        return np.real(self.weights @ gaussian_densities(self.means, self.covs, points))

    def envelope_weights(self) -> np.ndarray:
        """|c_k|·exp(½ n_kᵀΣ_k⁻¹n_k), the bounding real mixture's weights."""
        out = np.empty(len(self.weights))
        for k, (c, mu, cov) in enumerate(zip(self.weights, self.means, self.covs, strict=True)):
            check_condition(cov, k)
            n = mu.imag
            out[k] = abs(c) * math.exp(0.5 * n @ np.linalg.solve(cov, n))
        return out

    def marginal(self, index: int) -> "SignedMixture":
        """One-dimensional marginal on coordinate ``index``."""
        return SignedMixture(
            self.weights, self.means[:, [index]], self.covs[:, [index]][:, :, [index]]
        )


def marginal_mixture(state: GaussianSumState, indices: list[int]) -> SignedMixture:
    """Marginal of the Wigner function on the given quadrature indices."""
    if not 1 <= len(indices) <= 2:
        raise InvalidParameterError("Marginals are sampled in one or two dimensions")
    covs = state.covs[:, indices][:, :, indices]
    return SignedMixture(state.weights, state.means[:, indices], covs)


def husimi_mixture(state: GaussianSumState, mode: int) -> SignedMixture:
    """Heterodyne (Husimi) density of one mode: its Wigner marginal convolved with ½I."""
    idx = mode_indices(mode, state.n_modes)
    marginal = marginal_mixture(state, idx)
    return SignedMixture(marginal.weights, marginal.means, marginal.covs + 0.5 * np.eye(2))


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    """Counter-based stream for one proposal chunk."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _draw_chunk(
    mixture: SignedMixture, envelope: np.ndarray, seed: int, chunk: int, size: int
) -> np.ndarray:
    """Propose ``size`` points for one chunk and return the accepted ones."""
    rng = chunk_generator(seed, chunk)
    total = envelope.sum()
    choice = rng.choice(len(envelope), size=size, p=envelope / total)
    z = rng.standard_normal((size, mixture.dim))
    u = rng.random(size)

    centers = mixture.means.real
    factors = np.linalg.cholesky(mixture.covs)
    points = centers[choice] + np.einsum("mij,mj->mi", factors[choice], z)

    bound = envelope @ gaussian_densities(centers, mixture.covs, points).real
    target = mixture.density(points)
    ratio = np.divide(target, bound, out=np.zeros_like(target), where=bound > 0)
    slack = ACCEPTANCE_TOL + CANCELLATION_TOL * total
    if ratio.min() < -slack or ratio.max() > 1.0 + slack:
        worst = ratio.min() if ratio.min() < -slack else ratio.max()
        raise SamplingError(
            f"Acceptance probability {worst:.6g} outside [0, 1]: the target is not a "
            "probability density (is the state physical and the marginal correct?)"
        )
    return points[u < ratio]


def sample_signed_mixture(
    mixture: SignedMixture,
    size: int,
    seed: int,
    *,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int = 1,
    layout: str = "mixture",
) -> np.ndarray:
    """
    Draw exact samples from a nonnegative signed Gaussian mixture.

    Args:
        mixture: Target density
        size: Number of samples S
        seed: Unsigned 64-bit seed
        chunk_size: Proposals per chunk
        workers: Processes drawing chunks in parallel (does not change the result)
        layout: Label for metrics

    Returns:
        (S, d) array of samples

    Raises:
        SamplingError: If the acceptance probability leaves [0, 1] or the expected
            acceptance rate is below 1e-4
    """
    if size < 1:
        raise InvalidParameterError(f"Sample count must be positive, got {size}")
    envelope = mixture.envelope_weights()
    expected_rate = 1.0 / envelope.sum()
    if expected_rate < MIN_ACCEPTANCE_RATE:
        raise SamplingError(
            f"Expected acceptance rate {expected_rate:.3e} is below {MIN_ACCEPTANCE_RATE:g}: "
            f"the mixture's weights cancel too strongly (envelope weight {envelope.sum():.3e})"
        )

    accepted: list[np.ndarray] = []
    count, proposed, chunk = 0, 0, 0
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while count < size:
            batch = range(chunk, chunk + max(1, workers))
            args = [(mixture, envelope, seed, j, chunk_size) for j in batch]
            if executor is None:
                results = [_draw_chunk(*a) for a in args]
            else:
                results = list(executor.map(_draw_chunk, *zip(*args, strict=True)))
            for result in results:
                accepted.append(result)
                count += len(result)
            proposed += chunk_size * len(batch)
            chunk += len(batch)
    finally:
        if executor is not None:
            executor.shutdown()

    samples = np.concatenate(accepted)[:size]
    get_metrics().record_sampling(layout, size, proposed)
    logger.debug(
        f"Sampled {size} points from {len(mixture.weights)} components "
        f"(acceptance {count / proposed:.4f}, expected {expected_rate:.4f})"
    )
    return samples


def sample_homodyne_pair(
    state: GaussianSumState,
    layout: Layout | str,
    size: int,
    seed: int,
    *,
    descriptor: str = "",
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int = 1,
) -> QuadratureSamples:
    """
    Joint homodyne samples of (x₁, x₂) or (p₁, p₂) from a two-mode state.

    Raises:
        InvalidParameterError: If the state does not have two modes or the layout is not xx/pp
    """
    layout = Layout(layout)
    if state.n_modes != 2:
        raise InvalidParameterError("Homodyne pairs need a two-mode state")
    if layout not in (Layout.XX, Layout.PP):
        raise InvalidParameterError(f"Homodyne layout must be xx or pp, got {layout}")
    indices = [0, 2] if layout is Layout.XX else [1, 3]
    data = sample_signed_mixture(
        marginal_mixture(state, indices),
        size,
        seed,
        chunk_size=chunk_size,
        workers=workers,
        layout=layout.value,
    )
    return QuadratureSamples(layout, data, seed, descriptor)


def sample_heterodyne(
    state: GaussianSumState,
    mode: int,
    size: int,
    seed: int,
    *,
    descriptor: str = "",
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int = 1,
) -> QuadratureSamples:
    """
    Heterodyne (x_i + n_x, p_i + n_p) samples of one mode.

    The Husimi covariance of each component is its mode block plus ½I.
    """
    layout = Layout.heterodyne(mode)
    data = sample_signed_mixture(
        husimi_mixture(state, mode),
        size,
        seed,
        chunk_size=chunk_size,
        workers=workers,
        layout=layout.value,
    )
    return QuadratureSamples(layout, data, seed, descriptor)


def histogram_chi2(
    values: np.ndarray,
    mixture: SignedMixture,
    bins: int = 200,
    n_sigma: float = 5.0,
    min_expected: float = 5.0,
) -> float:
    """
    χ² goodness-of-fit p-value of 1-D samples against a 1-D signed mixture.

    Bins span ±n_sigma standard deviations around the mixture mean. Expected counts
    integrate the density over each bin with Simpson's rule. Bins expecting fewer than
    ``min_expected`` counts are dropped.

    Returns:
        p-value from scipy.stats.chi2
    """
    if mixture.dim != 1:
        raise InvalidParameterError("histogram_chi2 needs a one-dimensional mixture")
    values = np.asarray(values, dtype=float).ravel()
    mean = float(np.real(mixture.weights @ mixture.means[:, 0]))
    second = float(np.real(mixture.weights @ (mixture.covs[:, 0, 0] + mixture.means[:, 0] ** 2)))
    sigma = math.sqrt(max(second - mean**2, 1e-300))
    edges = np.linspace(mean - n_sigma * sigma, mean + n_sigma * sigma, bins + 1)
    observed, _ = np.histogram(values, bins=edges)

    fine = np.linspace(edges[0], edges[-1], 4 * bins + 1)
    density = mixture.density(fine[:, None])
    h = fine[1] - fine[0]
    panels = density.reshape(-1)[:-1].reshape(bins, 4)
    right = density[4::4]
    # Composite Simpson over four sub-intervals per bin.
    mass = h / 3 * (panels[:, 0] + 4 * panels[:, 1] + 2 * panels[:, 2] + 4 * panels[:, 3] + right)
    expected = len(values) * mass

    keep = expected >= min_expected
    chi2_value = float(np.sum((observed[keep] - expected[keep]) ** 2 / expected[keep]))
    dof = int(keep.sum()) - 1
    p_value = float(stats.chi2.sf(chi2_value, dof))
    logger.debug(f"Histogram chi2 = {chi2_value:.2f} on {dof} dof (p = {p_value:.4f})")
    return p_value
