"""
Analysis Models
Quantities describing the statistic's distribution under covariance
mismatch and under the signal-present hypothesis.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class MismatchAnalysis(BaseModel):
    """
    Variance terms when the detector is built on C but the data follow C'.

    With C' = C, upsilon1_sq and both varsigma terms equal upsilon_sq.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    g: np.ndarray = Field(..., description="kappa weights O'_j / O_j^2")
    o_prime: np.ndarray = Field(..., description="kappa orthant probabilities under C'")

    upsilon_sq: float = Field(..., description="Matched variance scale", gt=0)
    upsilon1_sq: float = Field(..., description="Null variance of upsilon * w_l under C'", gt=0)

    varsigma1_sq: float = Field(..., description="Low-SNR mean scale of w_1")
    varsigma2_sq: float = Field(..., description="Low-SNR mean scale of w_2")

    @field_validator("g", "o_prime", mode="before")
    @classmethod
    def as_float_array(cls, v):
        return np.asarray(v, dtype=float)

    @field_validator("g")
    @classmethod
    def check_positive(cls, v: np.ndarray) -> np.ndarray:
        if np.any(v <= 0):
            raise ValueError("g entries must be positive")
        return v

    @property
    def variance_ratio(self) -> float:
        """upsilon1^2 / upsilon^2, the null variance inflation."""
        return self.upsilon1_sq / self.upsilon_sq


class NonNullMoments(BaseModel):
    """
    Mean and covariance of w = (w1, w2) under the signal-present
    hypothesis, plus the weighted noncentral chi-square decomposition
    T = sum_l lambda_l (nu_l + m_l)^2.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u_w: np.ndarray = Field(..., description="Mean of w (2-vector)")
    sigma_w: np.ndarray = Field(..., description="2 x 2 covariance of w")
    lam: np.ndarray = Field(..., description="Eigenvalues of sigma_w")
    m_noncentral: np.ndarray = Field(..., description="Offsets m = Lambda^{-1/2} P u_w")

    @field_validator("u_w", "sigma_w", "lam", "m_noncentral", mode="before")
    @classmethod
    def as_float_array(cls, v):
        return np.asarray(v, dtype=float)

    @model_validator(mode="after")
    def check_pd(self):
        if self.sigma_w.shape != (2, 2) or np.any(self.lam <= 0):
            raise ValueError("sigma_w must be a 2 x 2 positive definite matrix")
        return self

    @property
    def noncentrality(self) -> np.ndarray:
        """Per-term noncentrality m_l^2."""
        return self.m_noncentral ** 2
