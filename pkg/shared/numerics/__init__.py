"""
Numerics Package
Linear algebra, random streams, QMC points and normal distribution helpers.
"""

from shared.numerics.linalg import (
    check_hermitian,
    check_psd,
    complex_to_composite,
    composite_mean,
    coherence_from_sigma,
    jitter_cholesky,
    mvn_sample,
)
from shared.numerics.rng import RngStream
from shared.numerics.qmc import qmc_points
from shared.numerics.normal import std_normal_cdf, std_normal_quantile

__all__ = [
    # Linear algebra
    "check_hermitian",
    "check_psd",
    "complex_to_composite",
    "composite_mean",
    "coherence_from_sigma",
    "jitter_cholesky",
    "mvn_sample",

    # Randomness
    "RngStream",
    "qmc_points",

    # Normal law
    "std_normal_cdf",
    "std_normal_quantile",
]
