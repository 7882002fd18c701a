"""
Models Package
Pydantic models and state definitions for the one-bit Rao detector.
"""

from shared.models.covariance import CompositeCovariance
from shared.models.orthant import OrthantResult
from shared.models.scenario import Scenario, QuantizedData
from shared.models.detector import SignPattern, NoiseTables, DetectorTables, pattern_weights
from shared.models.analysis import MismatchAnalysis, NonNullMoments
from shared.models.config import ExperimentConfig, PlotSpec
from shared.models.state import ExperimentState, create_initial_state

__all__ = [
    # Covariance
    "CompositeCovariance",

    # Orthant
    "OrthantResult",

    # Radar
    "Scenario",
    "QuantizedData",

    # Detector
    "SignPattern",
    "NoiseTables",
    "DetectorTables",
    "pattern_weights",

    # Analysis
    "MismatchAnalysis",
    "NonNullMoments",

    # Configuration
    "ExperimentConfig",
    "PlotSpec",

    # State
    "ExperimentState",
    "create_initial_state",
]
