"""
Rao Statistic
Test statistic, batch scoring and CFAR thresholds.

T_R = w1^2 + w2^2 with w1 = (1/upsilon) sum_i a_i^T d_j(i) / O_j(i)
and w2 likewise with b_i; j(i) is the sign pattern of snapshot i.
Under the noise-only hypothesis T_R is asymptotically chi-square with
two degrees of freedom.
"""

import math
from typing import Tuple, Union

import numpy as np

from shared.errors import InvalidInputError
from shared.models.detector import DetectorTables
from shared.models.scenario import QuantizedData

ArrayLike = Union[float, np.ndarray]


def rao_scores(tables: DetectorTables, indices: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Normalized scores (w1, w2) for pattern-index arrays.

    Args:
        tables: Detector tables
        indices: Integer array (..., n) of per-snapshot pattern indices

    Returns:
        Tuple (w1, w2), each of shape indices.shape[:-1]
    """
    indices = np.asarray(indices)
    if indices.shape[-1] != tables.n:
        raise InvalidInputError(f"expected {tables.n} snapshots, got {indices.shape[-1]}")
    rows = np.arange(tables.n)
    w1 = tables.score1[rows, indices].sum(axis=-1) / tables.upsilon
    w2 = tables.score2[rows, indices].sum(axis=-1) / tables.upsilon
    return w1, w2


def rao_from_bits(tables: DetectorTables, bits: np.ndarray) -> np.ndarray:
    """T_R for boolean sign bits shaped (trials, n, 2m)."""
    w1, w2 = rao_scores(tables, tables.pattern_index(bits))
    return w1 ** 2 + w2 ** 2


def rao_statistic(tables: DetectorTables, data: QuantizedData) -> float:
    """
    Rao statistic of one quantized observation.

    Args:
        tables: Detector tables for the scenario
        data: m x n one-bit observations

    Returns:
        T_R >= 0
    """
    if data.m != tables.noise.m:
        raise InvalidInputError(f"data has m = {data.m}, tables expect {tables.noise.m}")
    indices = tables.pattern_index(data.composite.T)
    w1, w2 = rao_scores(tables, indices)
    return float(w1 ** 2 + w2 ** 2)


def threshold_for_pfa(pfa: ArrayLike) -> ArrayLike:
    """gamma = -2 ln(pfa)."""
    pfa_arr = np.asarray(pfa, dtype=float)
    if np.any(~((pfa_arr > 0) & (pfa_arr < 1))):
        raise InvalidInputError("pfa must lie in (0, 1)")
    return -2.0 * np.log(pfa)


def pfa_for_threshold(gamma: ArrayLike) -> ArrayLike:
    """Pfa = exp(-gamma / 2)."""
    return np.exp(-0.5 * np.asarray(gamma, dtype=float)) if np.ndim(gamma) else math.exp(-0.5 * gamma)


def threshold_grid(n_gamma: int, ratio: float = 1.0, pfa_floor: float = 1e-3) -> np.ndarray:
    """
    Thresholds from 0 to -2 ln(pfa_floor) * ratio.

    ratio is the largest variance inflation upsilon1^2 / upsilon^2 among
    the curves sharing the grid, so every theory curve reaches pfa_floor.
    """
    return np.linspace(0.0, -2.0 * math.log(pfa_floor) * max(ratio, 1.0), n_gamma)
