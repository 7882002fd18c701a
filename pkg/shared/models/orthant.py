"""
Orthant Models
Result container for orthant probability evaluations.
"""

from pydantic import BaseModel, ConfigDict, Field


class OrthantResult(BaseModel):
    """Value of Pr{x > 0} for a Gaussian vector, with its error estimate."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(
        ...,
        description="Orthant probability",
        ge=0.0,
        le=1.0
    )

    err_estimate: float = Field(
        0.0,
        description="QMC standard error (0 for closed forms)",
        ge=0.0
    )

    n_points: int = Field(
        0,
        description="Integration points used (0 for closed forms)",
        ge=0
    )
