"""
Cumulant estimators for homodyne and heterodyne data.

Univariate κ₂ and κ₄ use Fisher's k-statistics (unbiased). The joint κ₂,₂ of a heterodyne
pair uses the plug-in central-moment formula m₂₂ − m₂₀m₀₂ − 2m₁₁², which carries an O(1/S)
bias. Heterodyne noise adds ½ to each quadrature variance but leaves κ₂,₂ unchanged, so
quadrature variances come from the homodyne sets.

Standard errors are delete-one-block jackknife estimates over 100 contiguous blocks. Block
statistics are power sums, so leaving a block out is a subtraction.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from cvwitness.base import InvalidParameterError
from cvwitness.logger import WitnessLogger
from cvwitness.phase_space import GaussianSumState
from cvwitness.sampling.sampler import (
    Layout,
    QuadratureSamples,
    sample_heterodyne,
    sample_homodyne_pair,
)
from cvwitness.witness.criteria import (
    DEFAULT_PAIR,
    Criterion,
    CumulantSet,
    EprOperatorPair,
    WitnessReport,
    duan_witness,
    fourth_order_witness,
)

logger = WitnessLogger.get_logger("sampling")

JACKKNIFE_BLOCKS = 100
MIN_SAMPLES = 10_000
MAX_POWER = 4


@dataclass(frozen=True, eq=False)
class PowerSums:
    """
    Bivariate power sums S_ij = Σ (a − a₀)^i (b − b₀)^j for i, j ≤ 4.

    Sums over disjoint subsets add; removing a subset subtracts. The shift (a₀, b₀) must
    be shared by every operand.
    """

    n: int
    sums: np.ndarray
    shift: tuple[float, float] = (0.0, 0.0)

    @classmethod
    def from_data(cls, a: np.ndarray, b: np.ndarray, shift: tuple[float, float] = (0.0, 0.0)) -> "PowerSums":
        powers = np.arange(MAX_POWER + 1)
        pa = (np.asarray(a) - shift[0])[:, None] ** powers
        pb = (np.asarray(b) - shift[1])[:, None] ** powers
        return cls(len(a), pa.T @ pb, shift)

    def _check(self, other: "PowerSums") -> None:
        if self.shift != other.shift:
            raise InvalidParameterError("Power sums with different shifts cannot be combined")

    def __add__(self, other: "PowerSums") -> "PowerSums":
        self._check(other)
        return PowerSums(self.n + other.n, self.sums + other.sums, self.shift)

    def __sub__(self, other: "PowerSums") -> "PowerSums":
        self._check(other)
        return PowerSums(self.n - other.n, self.sums - other.sums, self.shift)

    def linear_sums(self, g: float, h: float) -> tuple[float, float, float, float]:
        """Power sums s₁..s₄ of g·a + h·b (about the shifted origin)."""
        return tuple(
            sum(
                math.comb(order, i) * g**i * h ** (order - i) * self.sums[i, order - i]
                for i in range(order + 1)
            )
            for order in range(1, 5)
        )

    def k_statistics(self, g: float = 1.0, h: float = 0.0) -> tuple[float, float, float]:
        """
        Fisher k-statistics k₂, k₃, k₄ of g·a + h·b.

        Raises:
            InvalidParameterError: With fewer than four samples
        """
        n = self.n
        if n < 4:
            raise InvalidParameterError(f"k-statistics need at least 4 samples, got {n}")
        s1, s2, s3, s4 = self.linear_sums(g, h)
        k2 = (n * s2 - s1**2) / (n * (n - 1))
        k3 = (2 * s1**3 - 3 * n * s1 * s2 + n * n * s3) / (n * (n - 1) * (n - 2))
        k4 = (
            -6 * s1**4
            + 12 * n * s1**2 * s2
            - 3 * n * (n - 1) * s2**2
            - 4 * n * (n + 1) * s1 * s3
            + n * n * (n + 1) * s4
        ) / (n * (n - 1) * (n - 2) * (n - 3))
        return k2, k3, k4

    def central_moment(self, i: int, j: int) -> float:
        """Plug-in central moment m_ij = (1/n)·Σ (a − ā)^i (b − b̄)^j."""
        da = self.sums[1, 0] / self.n
        db = self.sums[0, 1] / self.n
        total = 0.0
        for k in range(i + 1):
            for m in range(j + 1):
                total += (
                    math.comb(i, k)
                    * math.comb(j, m)
                    * self.sums[k, m]
                    * (-da) ** (i - k)
                    * (-db) ** (j - m)
                )
        return total / self.n

    def joint_cumulant_22(self) -> float:
        """Plug-in κ₂,₂ = m₂₂ − m₂₀m₀₂ − 2m₁₁²."""
        m11 = self.central_moment(1, 1)
        return self.central_moment(2, 2) - self.central_moment(2, 0) * self.central_moment(0, 2) - 2 * m11**2


def block_power_sums(samples: QuadratureSamples, blocks: int = JACKKNIFE_BLOCKS) -> list[PowerSums]:
    """Power sums of contiguous blocks, shifted by the global sample mean."""
    shift = (float(np.mean(samples.a)), float(np.mean(samples.b)))
    return [
        PowerSums.from_data(chunk[:, 0], chunk[:, 1], shift)
        for chunk in np.array_split(samples.data, blocks)
    ]


def _fields_from_sums(
    xx: PowerSums, pp: PowerSums, het1: PowerSums, het2: PowerSums, pair: EprOperatorPair
) -> dict[str, float]:
    k2_u, k3_u, k4_u = xx.k_statistics(pair.g1, pair.g2)
    k2_v, k3_v, k4_v = pp.k_statistics(pair.h1, pair.h2)
    return {
        "k2_u": k2_u,
        "k4_u": k4_u,
        "k2_v": k2_v,
        "k4_v": k4_v,
        "k22_m1": het1.joint_cumulant_22(),
        "k22_m2": het2.joint_cumulant_22(),
        "k2_x1": xx.k_statistics(1.0, 0.0)[0],
        "k2_x2": xx.k_statistics(0.0, 1.0)[0],
        "k2_p1": pp.k_statistics(1.0, 0.0)[0],
        "k2_p2": pp.k_statistics(0.0, 1.0)[0],
        "k3_u": k3_u,
        "k3_v": k3_v,
    }


def _check_layouts(xx, pp, het1, het2) -> None:
    for samples, layout in ((xx, Layout.XX), (pp, Layout.PP), (het1, Layout.HET1), (het2, Layout.HET2)):
        if samples.layout is not layout:
            raise InvalidParameterError(f"Expected {layout.value} samples, got {samples.layout.value}")


@dataclass(frozen=True)
class EstimatedCumulantSet:
    """
    Cumulants estimated from data, with a jackknife standard error per field.

    Attributes:
        cumulants: Point estimates as a CumulantSet
        errors: Standard error per witness field
        sample_sizes: Sample count per layout
        margin_errors: Jackknife standard error of each criterion margin
    """

    cumulants: CumulantSet
    errors: dict[str, float]
    sample_sizes: dict[str, int] = field(default_factory=dict)
    margin_errors: dict[str, float] = field(default_factory=dict)

    def fourth_order(self) -> WitnessReport:
        return fourth_order_witness(self.cumulants)

    def duan(self) -> WitnessReport:
        """Duan report; the pair must belong to the Duan family."""
        return duan_witness(self.cumulants, self.cumulants.pair.g1)

    def relative_error(self, name: str) -> float:
        return self.errors[name] / abs(getattr(self.cumulants, name))


def point_estimates(
    xx: QuadratureSamples,
    pp: QuadratureSamples,
    het1: QuadratureSamples,
    het2: QuadratureSamples,
    pair: EprOperatorPair = DEFAULT_PAIR,
) -> CumulantSet:
    """Cumulant estimates without error bars or a sample-size floor."""
    _check_layouts(xx, pp, het1, het2)
    sums = [
        PowerSums.from_data(s.a, s.b, (float(np.mean(s.a)), float(np.mean(s.b))))
        for s in (xx, pp, het1, het2)
    ]
    return CumulantSet(pair=pair, **_fields_from_sums(*sums, pair))


def estimate_cumulant_set(
    xx: QuadratureSamples,
    pp: QuadratureSamples,
    het1: QuadratureSamples,
    het2: QuadratureSamples,
    pair: EprOperatorPair = DEFAULT_PAIR,
) -> EstimatedCumulantSet:
    """
    Estimate every witness cumulant with jackknife standard errors.

    Args:
        xx, pp: Joint homodyne samples of (x₁, x₂) and (p₁, p₂)
        het1, het2: Heterodyne samples of each mode
        pair: Operator pair forming u and v

    Returns:
        EstimatedCumulantSet

    Raises:
        InvalidParameterError: If a layout is wrong or any set has fewer than 10⁴ samples
    """
    _check_layouts(xx, pp, het1, het2)
    for samples in (xx, pp, het1, het2):
        if samples.size < MIN_SAMPLES:
            raise InvalidParameterError(
                f"{samples.layout.value} has {samples.size} samples; jackknife over "
                f"{JACKKNIFE_BLOCKS} blocks needs at least {MIN_SAMPLES}"
            )

    blocks = [block_power_sums(s) for s in (xx, pp, het1, het2)]
    totals = [sum(b[1:], b[0]) for b in blocks]
    estimate = _fields_from_sums(*totals, pair)

    rows = []
    for j in range(JACKKNIFE_BLOCKS):
        fields = _fields_from_sums(*(t - b[j] for t, b in zip(totals, blocks, strict=True)), pair)
        margin = fourth_order_witness(CumulantSet(pair=pair, **fields)).margin
        rows.append([*fields.values(), margin, fields["k2_u"] + fields["k2_v"]])
    replicates = np.array(rows)
    spread = replicates - replicates.mean(axis=0)
    factor = (JACKKNIFE_BLOCKS - 1) / JACKKNIFE_BLOCKS
    errors_all = np.sqrt(factor * np.sum(spread**2, axis=0))
    errors = {
        name: float(err)
        for name, err in zip(estimate, errors_all[:-2], strict=True)
        if name in CumulantSet.FIELDS
    }

    result = EstimatedCumulantSet(
        CumulantSet(pair=pair, **estimate),
        errors,
        {s.layout.value: s.size for s in (xx, pp, het1, het2)},
        {
            Criterion.FOURTH_ORDER.value: float(errors_all[-2]),
            Criterion.DUAN.value: float(errors_all[-1]),
        },
    )
    logger.debug(
        "Estimated cumulants: "
        + ", ".join(f"{k}={v:.5g}±{errors[k]:.2g}" for k, v in result.cumulants.values().items())
    )
    return result


def sample_all(
    state: GaussianSumState,
    size: int,
    seed: int,
    *,
    descriptor: str = "",
    chunk_size: int | None = None,
    workers: int = 1,
) -> tuple[QuadratureSamples, QuadratureSamples, QuadratureSamples, QuadratureSamples]:
    """
    Draw the four sample sets the estimator needs, each from its own seed stream.

    Returns:
        (xx, pp, het1, het2)
    """
    seeds = np.random.SeedSequence(seed).generate_state(4, np.uint64)
    options = {"descriptor": descriptor, "workers": workers}
    if chunk_size is not None:
        options["chunk_size"] = chunk_size
    return (
        sample_homodyne_pair(state, Layout.XX, size, int(seeds[0]), **options),
        sample_homodyne_pair(state, Layout.PP, size, int(seeds[1]), **options),
        sample_heterodyne(state, 0, size, int(seeds[2]), **options),
        sample_heterodyne(state, 1, size, int(seeds[3]), **options),
    )


@dataclass(frozen=True)
class ScalingStudy:
    """
    Empirical estimator variance against sample size.

    Attributes:
        sizes: Sample sizes S
        variances: Field -> variance across repeats at each S
        slopes: Field -> log–log slope of variance against S
    """

    sizes: tuple[int, ...]
    variances: dict[str, np.ndarray]
    slopes: dict[str, float]


def variance_scaling_study(
    state: GaussianSumState,
    pair: EprOperatorPair = DEFAULT_PAIR,
    sizes: tuple[int, ...] = (1_000, 10_000, 100_000, 1_000_000),
    repeats: int = 50,
    seed: int = 0,
    *,
    chunk_size: int | None = None,
    workers: int = 1,
) -> ScalingStudy:
    """
    Repeat the estimation at several sample sizes and fit Var ∝ S^slope per field.

    Raises:
        InvalidParameterError: If the sizes span less than two decades or repeats < 2
    """
    if max(sizes) / min(sizes) < 100:
        raise InvalidParameterError("Sample sizes must span at least two decades")
    if repeats < 2:
        raise InvalidParameterError("At least two repeats are needed to estimate a variance")

    rows: dict[str, list[float]] = {name: [] for name in CumulantSet.FIELDS}
    for size_index, size in enumerate(sizes):
        estimates = []
        for repeat in range(repeats):
            run_seed = int(np.random.SeedSequence([seed, size_index, repeat]).generate_state(1, np.uint64)[0])
            samples = sample_all(state, size, run_seed, chunk_size=chunk_size, workers=workers)
            estimates.append(point_estimates(*samples, pair).values())
        for name in CumulantSet.FIELDS:
            rows[name].append(float(np.var([e[name] for e in estimates], ddof=1)))
        logger.debug(f"Scaling study: finished S={size}")

    log_sizes = np.log(np.asarray(sizes, dtype=float))
    variances = {name: np.asarray(values) for name, values in rows.items()}
    slopes = {
        name: float(np.polyfit(log_sizes, np.log(values), 1)[0])
        for name, values in variances.items()
        if np.all(values > 0)
    }
    return ScalingStudy(tuple(sizes), variances, slopes)
