"""
Detector Models
Sign patterns and the precomputed tables that define the Rao statistic.
"""

from functools import cached_property
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


def pattern_weights(m: int) -> np.ndarray:
    """Bit weights of a 2m sign vector; the last element is least significant."""
    return 2 ** np.arange(2 * m - 1, -1, -1, dtype=np.int64)


class SignPattern(BaseModel):
    """One of the 2^{2m} possible composite sign vectors."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    index: int = Field(
        ...,
        description="0-based position in ascending binary order",
        ge=0
    )

    tau: np.ndarray = Field(..., description="+-1 vector of length 2m")

    orbit_id: int = Field(
        ...,
        description="Index of the smallest pattern in this pattern's rotation orbit",
        ge=0
    )

    @field_validator("tau", mode="before")
    @classmethod
    def as_sign_vector(cls, v):
        tau = np.asarray(v, dtype=float)
        if not np.all(np.abs(tau) == 1.0):
            raise ValueError("tau entries must be +-1")
        return tau

    @property
    def gamma(self) -> np.ndarray:
        """Diagonal matrix form diag(tau)."""
        return np.diag(self.tau)


class NoiseTables(BaseModel):
    """
    Signal-independent part of the detector: orthant probabilities O_j
    and mean-derivative vectors d_j for every sign pattern.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    m: int = Field(..., description="Receive antennas", ge=1, le=6)
    c: np.ndarray = Field(..., description="2m x 2m coherence matrix the tables were built on")
    o: np.ndarray = Field(..., description="kappa orthant probabilities O_j")
    d: np.ndarray = Field(..., description="kappa x 2m matrix, row j is d_j")
    orbits: List[List[int]] = Field(
        ...,
        description="Rotation orbits [j, j1, j2, j3], representative first"
    )
    tol: float = Field(..., description="Orthant tolerance used", gt=0)

    @property
    def kappa(self) -> int:
        return self.o.shape[0]

    def pattern_index(self, signs: np.ndarray) -> np.ndarray:
        """
        Map composite sign vectors to pattern indices.

        Args:
            signs: Array with the 2m sign components on the last axis

        Returns:
            Integer array of indices
        """
        signs = np.asarray(signs)
        bits = (signs > 0).astype(np.int64)
        return bits @ pattern_weights(self.m)


class DetectorTables(BaseModel):
    """Everything the Rao statistic needs for a given scenario."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    noise: NoiseTables = Field(..., description="Orthant/derivative tables")

    d_diag: np.ndarray = Field(..., description="Assumed composite variances D")

    signal_cols: np.ndarray = Field(..., description="n x 2m rows [u_i; v_i]")
    a_cols: np.ndarray = Field(..., description="n x 2m rows a_i = D^{-1/2}[u_i; v_i]")
    b_cols: np.ndarray = Field(..., description="n x 2m rows b_i = D^{-1/2}[-v_i; u_i]")

    delta1: np.ndarray = Field(..., description="n x kappa matrix a_i^T d_j")
    delta2: np.ndarray = Field(..., description="n x kappa matrix b_i^T d_j")

    upsilon_sq: float = Field(..., description="Fisher information scale", gt=0)

    @property
    def o(self) -> np.ndarray:
        return self.noise.o

    @property
    def d(self) -> np.ndarray:
        return self.noise.d

    @property
    def n(self) -> int:
        return self.delta1.shape[0]

    @property
    def upsilon(self) -> float:
        return float(np.sqrt(self.upsilon_sq))

    @cached_property
    def score1(self) -> np.ndarray:
        """n x kappa per-sample contributions Delta1 / O."""
        return self.delta1 / self.noise.o

    @cached_property
    def score2(self) -> np.ndarray:
        """n x kappa per-sample contributions Delta2 / O."""
        return self.delta2 / self.noise.o

    def pattern_index(self, signs: np.ndarray) -> np.ndarray:
        """Pattern lookup; see NoiseTables.pattern_index."""
        return self.noise.pattern_index(signs)
