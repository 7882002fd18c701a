"""
Analysis Package
Null and non-null distributions of the Rao statistic, mismatch
analysis and one-bit covariance estimation.
"""

from shared.analysis.null import (
    upsilon1_sq,
    pfa_mismatched,
    threshold_mismatched,
    avg_pfa,
)
from shared.analysis.nonnull import (
    pattern_probabilities,
    nonnull_moments,
    pd_exact,
    pd_low_snr,
    pd_low_snr_mismatched,
)
from shared.analysis.imhof import imhof_cdf
from shared.analysis.estimation import (
    circular_projection,
    composite_to_complex,
    estimate_cov_one_bit,
    nearest_coherence,
)

__all__ = [
    # Null / mismatch
    "upsilon1_sq",
    "pfa_mismatched",
    "threshold_mismatched",
    "avg_pfa",

    # Non-null
    "pattern_probabilities",
    "nonnull_moments",
    "pd_exact",
    "pd_low_snr",
    "pd_low_snr_mismatched",
    "imhof_cdf",

    # Estimation
    "circular_projection",
    "composite_to_complex",
    "estimate_cov_one_bit",
    "nearest_coherence",
]
