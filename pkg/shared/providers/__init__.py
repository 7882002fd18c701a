"""
Providers Package
Pluggable covariance priors for mismatch analysis.
"""

from shared.providers.base import BaseCovariancePrior
from shared.providers.perturbation import FixedPrior, PerturbationPrior

__all__ = [
    "BaseCovariancePrior",
    "FixedPrior",
    "PerturbationPrior",
]
