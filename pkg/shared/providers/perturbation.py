"""
Perturbation Priors
Gaussian off-diagonal perturbation law and a fixed point-mass prior.
"""

import numpy as np

from shared.numerics.linalg import check_psd
from shared.numerics.rng import RngStream
from shared.providers.base import BaseCovariancePrior
from shared.radar.scenario import perturb_cov


class PerturbationPrior(BaseCovariancePrior):
    """Sigma' = Sigma_N + Delta with N(0, rho^2) Hermitian off-diagonal entries."""

    def __init__(self, sigma_n: np.ndarray, rho: float):
        """
        Initialize perturbation prior.

        Args:
            sigma_n: Nominal complex covariance
            rho: Perturbation standard deviation (>= 0)
        """
        super().__init__(sigma_n)
        self.rho = float(rho)

    def sample_complex(self, rng: RngStream) -> np.ndarray:
        return perturb_cov(self.sigma_n, self.rho, rng)

    def describe(self) -> str:
        return f"perturbation(rho={self.rho:g})"


class FixedPrior(BaseCovariancePrior):
    """Point mass at a single covariance (sigma_n itself by default)."""

    def __init__(self, sigma_n: np.ndarray, sigma_true: np.ndarray = None):
        super().__init__(sigma_n)
        target = self.sigma_n if sigma_true is None else np.asarray(sigma_true, dtype=complex)
        self.sigma_true = check_psd(target, "sigma_true")

    def sample_complex(self, rng: RngStream) -> np.ndarray:
        return self.sigma_true.copy()

    def describe(self) -> str:
        return "fixed"
