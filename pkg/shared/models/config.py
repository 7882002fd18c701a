"""
Experiment Configuration
Pydantic models for simulator runs and plot rendering.

Configuration comes from a flat JSON file with CLI overrides; the
resolved model is written next to every run's outputs.
"""

import json
import math
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from shared.errors import ConfigError


OUTPUT_ENV_VAR = "ONEBIT_RAO_OUTPUT"
HOME_ENV_VAR = "ONEBIT_RAO_HOME"


def default_output_dir() -> str:
    """Output directory from the environment, else ./results."""
    return os.environ.get(OUTPUT_ENV_VAR, "results")


def default_home() -> Path:
    """Cache home from the environment, else ~/.onebit_rao."""
    return Path(os.environ.get(HOME_ENV_VAR, Path.home() / ".onebit_rao"))


class ExperimentConfig(BaseModel):
    """
    Parameters of a Monte Carlo experiment.

    Defaults describe the desk-scale scenario (m = p = 2, n = 500).
    """

    # ===== ARRAY & WAVEFORM =====
    m: int = Field(2, description="Receive antennas", ge=1, le=6)
    p: int = Field(2, description="Transmit antennas", ge=1)
    n: int = Field(500, description="Snapshots", ge=1)
    phi: float = Field(math.pi / 6, description="Target angle (radians)")
    theta: float = Field(math.pi / 6, description="LFM waveform angle parameter (radians)")

    # ===== NOISE =====
    alpha: float = Field(1.0, description="Noise correlation scale", ge=0)
    rho: List[float] = Field(
        default_factory=lambda: [0.0],
        description="Covariance mismatch levels",
        examples=[[0.0, 0.1, 0.2]]
    )

    # ===== SIGNAL =====
    snr_db: List[float] = Field(
        default_factory=lambda: [-10.0],
        description="SNR levels in dB",
        examples=[[-15.0, -10.0]]
    )
    phase: float = Field(0.0, description="Phase of the target amplitude (radians)")

    # ===== MONTE CARLO =====
    n_trials: int = Field(100_000, description="Monte Carlo trials per curve", ge=1)
    K: int = Field(1000, description="Prior draws for the averaged false alarm", ge=1)
    seed: int = Field(2024, description="Master seed", ge=0, lt=2**64)
    batch_size: int = Field(1000, description="Trials per random stream / work item", ge=1)
    threads: int = Field(1, description="Worker threads", ge=1)

    # ===== TRAINING SPLIT =====
    n1: Optional[int] = Field(None, description="Training (noise-only) snapshots", ge=1)
    n2: Optional[int] = Field(None, description="Detection snapshots", ge=1)
    splits: List[Tuple[int, int]] = Field(
        default_factory=list,
        description="Extra (n1, n2) splits for the training experiment",
        examples=[[[100, 400], [250, 250]]]
    )
    n_estimates: int = Field(
        10,
        description="Independent covariance estimates per training split",
        ge=1
    )

    # ===== NUMERICS & OUTPUT =====
    n_gamma: int = Field(20, description="Threshold grid size", ge=2)
    tol: float = Field(1e-7, description="Orthant tolerance for table builds", gt=0)
    output_dir: str = Field(default_factory=default_output_dir, description="Output directory")
    table_cache: bool = Field(True, description="Reuse detector tables across runs")
    quiet: bool = Field(False, description="Suppress progress output")

    @field_validator("rho")
    @classmethod
    def validate_rho(cls, v: List[float]) -> List[float]:
        """Mismatch levels must be non-negative."""
        if not v:
            raise ValueError("at least one rho level is required")
        if any(r < 0 for r in v):
            raise ValueError("rho levels must be >= 0")
        return v

    @field_validator("snr_db")
    @classmethod
    def validate_snr(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("at least one SNR level is required")
        return v

    @model_validator(mode="after")
    def validate_splits(self):
        """Every training split must use exactly n snapshots."""
        if (self.n1 is None) != (self.n2 is None):
            raise ValueError("n1 and n2 must be given together")
        for n1, n2 in self.training_splits():
            if n1 < 1 or n2 < 1 or n1 + n2 != self.n:
                raise ValueError(f"split ({n1}, {n2}) must be positive and sum to n = {self.n}")
        return self

    def training_splits(self) -> List[Tuple[int, int]]:
        """All (n1, n2) splits, the single n1/n2 pair first."""
        splits = []
        if self.n1 is not None:
            splits.append((self.n1, self.n2))
        splits.extend((int(a), int(b)) for a, b in self.splits)
        return splits

    @classmethod
    def load(cls, path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> "ExperimentConfig":
        """
        Load a JSON config file and apply overrides.

        Args:
            path: JSON file (flat key/value object); None uses defaults only
            overrides: Values that replace file entries (None values ignored)

        Returns:
            Validated configuration

        Raises:
            ConfigError: On unreadable files or invalid values
        """
        data: Dict[str, Any] = {}
        if path:
            try:
                data = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as e:
                raise ConfigError(f"cannot read config {path}: {e}") from e
            if not isinstance(data, dict):
                raise ConfigError("config file must contain a JSON object")

        for key, value in (overrides or {}).items():
            if value is not None:
                data[key] = value

        try:
            return cls(**data)
        except ValidationError as e:
            raise ConfigError(str(e)) from e

    def write_resolved(self, directory: Path) -> Path:
        """Write config.resolved.json into directory and return its path."""
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / "config.resolved.json"
        path.write_text(self.model_dump_json(indent=2))
        return path


class PlotSpec(BaseModel):
    """How to draw one CSV file as a line plot."""

    x: str = Field(..., description="Column for the horizontal axis", examples=["gamma"])
    y: List[str] = Field(..., description="Columns drawn as lines", examples=[["pfa_theory", "pfa_empirical"]])
    log_x: bool = Field(False, description="Logarithmic horizontal axis")
    log_y: bool = Field(False, description="Logarithmic vertical axis")
    title: Optional[str] = Field(None, description="Figure title")
    xlabel: Optional[str] = Field(None, description="Axis label (default: column name)")
    ylabel: Optional[str] = Field(None, description="Axis label")

    @field_validator("y")
    @classmethod
    def validate_y(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("at least one y column is required")
        return v
