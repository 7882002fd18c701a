"""
Scenario Models
Colocated MIMO radar scenario and one-bit quantized observations.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from shared.models.covariance import CompositeCovariance


class Scenario(BaseModel):
    """
    Known quantities of the detection problem.

    The target echo is beta * w with w = a_r(phi) a_t(phi)^T s; the
    noise columns are i.i.d. CN(0, sigma_n).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    # ===== DIMENSIONS =====
    m: int = Field(..., description="Receive antennas", ge=1, le=6)
    p: int = Field(..., description="Transmit antennas", ge=1)
    n: int = Field(..., description="Snapshots", ge=1)

    # ===== GEOMETRY =====
    phi: float = Field(
        ...,
        description="Target angle in radians",
        examples=[0.5235987755982988]
    )

    theta: float = Field(
        0.0,
        description="Waveform angle parameter in radians"
    )

    # ===== SIGNALS =====
    waveform: np.ndarray = Field(..., description="p x n transmitted waveform S")
    w: np.ndarray = Field(..., description="m x n target matrix W")

    # ===== NOISE =====
    sigma_n: np.ndarray = Field(..., description="m x m complex noise covariance")
    composite: CompositeCovariance = Field(
        ...,
        description="Real composite form of sigma_n"
    )

    @field_validator("waveform", "w", "sigma_n", mode="before")
    @classmethod
    def as_complex_array(cls, v):
        """Coerce inputs to complex arrays."""
        return np.asarray(v, dtype=complex)

    @property
    def stacked_columns(self) -> np.ndarray:
        """n x 2m array whose row i is [Re w_i; Im w_i]."""
        return np.concatenate([self.w.real, self.w.imag], axis=0).T


class QuantizedData(BaseModel):
    """One-bit observations Y = sign(Re X) + i sign(Im X)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    y: np.ndarray = Field(..., description="m x n matrix with entries in {+-1 +- i}")

    @field_validator("y", mode="before")
    @classmethod
    def validate_signs(cls, v):
        """Ensure every real and imaginary part is +-1."""
        y = np.asarray(v, dtype=complex)
        if y.ndim != 2:
            raise ValueError("y must be an m x n matrix")
        parts = np.concatenate([y.real.ravel(), y.imag.ravel()])
        if not np.all(np.abs(parts) == 1.0):
            raise ValueError("quantized entries must have real/imag parts in {-1, +1}")
        return y

    @property
    def m(self) -> int:
        return self.y.shape[0]

    @property
    def n(self) -> int:
        return self.y.shape[1]

    @property
    def composite(self) -> np.ndarray:
        """2m x n real sign matrix; column i is the composite snapshot."""
        return np.concatenate([self.y.real, self.y.imag], axis=0)
