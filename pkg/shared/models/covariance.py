"""
Covariance Models
Real composite covariance of a circular complex Gaussian snapshot.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class CompositeCovariance(BaseModel):
    """
    The 2m x 2m real covariance of [Re x; Im x] with its diagonal and
    coherence (unit-diagonal) matrix.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sigma: np.ndarray = Field(
        ...,
        description="2m x 2m real symmetric PSD covariance"
    )

    d: np.ndarray = Field(
        ...,
        description="Diagonal of sigma (per-component variances)"
    )

    c: np.ndarray = Field(
        ...,
        description="Coherence matrix d^{-1/2} sigma d^{-1/2}"
    )

    @field_validator("sigma", "d", "c", mode="before")
    @classmethod
    def as_float_array(cls, v):
        """Coerce inputs to float arrays."""
        return np.asarray(v, dtype=float)

    @model_validator(mode="after")
    def check_shapes(self):
        """Ensure the three parts describe the same dimension."""
        k = self.d.shape[0]
        if self.sigma.shape != (k, k) or self.c.shape != (k, k):
            raise ValueError("sigma, d and c dimensions disagree")
        if k % 2 != 0:
            raise ValueError("composite dimension must be even (2m)")
        if np.any(self.d <= 0):
            raise ValueError("variances must be strictly positive")
        return self

    @property
    def m(self) -> int:
        """Number of complex channels."""
        return self.d.shape[0] // 2

    @classmethod
    def from_coherence(cls, c: np.ndarray, d: np.ndarray = None) -> "CompositeCovariance":
        """
        Build from a coherence matrix and (optional) diagonal.

        Args:
            c: Unit-diagonal coherence matrix
            d: Variances (default: all ones)
        """
        c = np.asarray(c, dtype=float)
        d = np.ones(c.shape[0]) if d is None else np.asarray(d, dtype=float)
        root = np.sqrt(d)
        return cls(sigma=c * np.outer(root, root), d=d, c=c)
