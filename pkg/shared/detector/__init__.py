"""
Detector Package
Sign patterns, Rao-test tables and the test statistic.
"""

from shared.detector.patterns import (
    enumerate_patterns,
    orbit_partition,
    pattern_taus,
    rotate,
    rotation_matrix,
)
from shared.detector.tables import (
    BUILD_TOL,
    build_noise_tables,
    build_signal_tables,
    build_tables,
    check_noise_tables,
    coherence_hash,
    orbit_orthants,
    white_noise_tables,
    white_upsilon_sq,
)
from shared.detector.statistic import (
    pfa_for_threshold,
    rao_from_bits,
    rao_scores,
    rao_statistic,
    threshold_for_pfa,
    threshold_grid,
)

__all__ = [
    # Patterns
    "enumerate_patterns",
    "orbit_partition",
    "pattern_taus",
    "rotate",
    "rotation_matrix",

    # Tables
    "BUILD_TOL",
    "build_noise_tables",
    "build_signal_tables",
    "build_tables",
    "check_noise_tables",
    "coherence_hash",
    "orbit_orthants",
    "white_noise_tables",
    "white_upsilon_sq",

    # Statistic
    "pfa_for_threshold",
    "rao_from_bits",
    "rao_scores",
    "rao_statistic",
    "threshold_for_pfa",
    "threshold_grid",
]
