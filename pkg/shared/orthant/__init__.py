"""
Orthant Package
Multivariate normal orthant probabilities and their derivatives.
"""

from shared.orthant.probability import (
    DEFAULT_TOL,
    MAX_POINTS,
    bivariate_cdf,
    orthant_prob,
)
from shared.orthant.gradients import (
    orthant_grad_mean,
    orthant_grad_corr,
    orthant_grad_corr_all,
    vech_upper,
)

__all__ = [
    "DEFAULT_TOL",
    "MAX_POINTS",
    "bivariate_cdf",
    "orthant_prob",
    "orthant_grad_mean",
    "orthant_grad_corr",
    "orthant_grad_corr_all",
    "vech_upper",
]
