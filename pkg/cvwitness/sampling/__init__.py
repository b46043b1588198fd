"""
cvwitness Sampling

Exact rejection sampling of homodyne and heterodyne data, and cumulant estimators with
jackknife error bars.
"""

from cvwitness.sampling.estimators import (
    JACKKNIFE_BLOCKS,
    MIN_SAMPLES,
    EstimatedCumulantSet,
    PowerSums,
    ScalingStudy,
    estimate_cumulant_set,
    point_estimates,
    sample_all,
    variance_scaling_study,
)
from cvwitness.sampling.sample_io import read_samples, write_samples
from cvwitness.sampling.sampler import (
    Layout,
    QuadratureSamples,
    SignedMixture,
    histogram_chi2,
    husimi_mixture,
    marginal_mixture,
    sample_heterodyne,
    sample_homodyne_pair,
    sample_signed_mixture,
)

__all__ = [
    "JACKKNIFE_BLOCKS",
    "MIN_SAMPLES",
    "EstimatedCumulantSet",
    "Layout",
    "PowerSums",
    "QuadratureSamples",
    "ScalingStudy",
    "SignedMixture",
    "estimate_cumulant_set",
    "histogram_chi2",
    "husimi_mixture",
    "marginal_mixture",
    "point_estimates",
    "read_samples",
    "sample_all",
    "sample_heterodyne",
    "sample_homodyne_pair",
    "sample_signed_mixture",
    "variance_scaling_study",
    "write_samples",
]
