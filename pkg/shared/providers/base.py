"""
Base Covariance Prior
Abstract base class for samplers of the true noise covariance Sigma'.

The averaged false-alarm analysis integrates over an uncertainty law
for the covariance the detector did not know; every law implements
this interface.
"""

from abc import ABC, abstractmethod

import numpy as np

from shared.models.covariance import CompositeCovariance
from shared.numerics.linalg import complex_to_composite
from shared.numerics.rng import RngStream


class BaseCovariancePrior(ABC):
    """
    Abstract base class for covariance priors.

    All priors must implement:
    - sample_complex(): Draw one m x m complex covariance
    - describe(): Human-readable label for outputs
    """

    def __init__(self, sigma_n: np.ndarray):
        """
        Initialize base prior.

        Args:
            sigma_n: Nominal (assumed) complex noise covariance
        """
        self.sigma_n = np.asarray(sigma_n, dtype=complex)

    @property
    def m(self) -> int:
        return self.sigma_n.shape[0]

    @abstractmethod
    def sample_complex(self, rng: RngStream) -> np.ndarray:
        """Draw one complex covariance (advances rng)."""
        pass

    @abstractmethod
    def describe(self) -> str:
        """Short label, e.g. 'perturbation(rho=0.02)'."""
        pass

    def sample(self, rng: RngStream) -> CompositeCovariance:
        """Draw one covariance in composite form."""
        return complex_to_composite(self.sample_complex(rng))
