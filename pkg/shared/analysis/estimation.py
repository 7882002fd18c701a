"""
One-Bit Covariance Estimation
Coherence estimate from noise-only sign data through the arcsine law.
"""

import math

import numpy as np

from shared.errors import InvalidInputError
from shared.models.covariance import CompositeCovariance
from shared.models.scenario import QuantizedData

EIGEN_FLOOR = 1e-8


def circular_projection(c: np.ndarray) -> np.ndarray:
    """Nearest matrix of the circular form [[A, -B], [B, A]] (A symmetric, B skew)."""
    m = c.shape[0] // 2
    a = 0.5 * (c[:m, :m] + c[m:, m:])
    b = 0.5 * (c[m:, :m] - c[:m, m:])
    a = 0.5 * (a + a.T)
    b = 0.5 * (b - b.T)
    return np.block([[a, -b], [b, a]])


def nearest_coherence(c: np.ndarray, floor: float = EIGEN_FLOOR) -> np.ndarray:
    """Clip eigenvalues at floor and rescale to a unit diagonal."""
    eigvals, vectors = np.linalg.eigh(0.5 * (c + c.T))
    clipped = (vectors * np.maximum(eigvals, floor)) @ vectors.T
    scale = 1.0 / np.sqrt(np.diag(clipped))
    out = clipped * np.outer(scale, scale)
    np.fill_diagonal(out, 1.0)
    return 0.5 * (out + out.T)


def estimate_cov_one_bit(noise_only: QuantizedData, d_assumed: np.ndarray) -> CompositeCovariance:
    """
    Estimate the composite covariance from noise-only one-bit snapshots.

    The sample sign correlation r maps to C = sin(pi r / 2); the result
    is projected onto the circular structure and onto unit-diagonal PSD
    matrices, then combined with the assumed variances (one-bit data
    carry no scale).

    Args:
        noise_only: m x n1 quantized noise snapshots
        d_assumed: 2m positive composite variances

    Raises:
        InvalidInputError: If n1 < 2m or d_assumed is invalid
    """
    signs = noise_only.composite
    k, n1 = signs.shape
    if n1 < k:
        raise InvalidInputError(f"need at least {k} snapshots, got {n1}")
    d_assumed = np.asarray(d_assumed, dtype=float)
    if d_assumed.shape != (k,) or np.any(d_assumed <= 0):
        raise InvalidInputError("d_assumed must hold 2m positive variances")

    r_hat = signs @ signs.T / n1
    c_hat = np.sin(0.5 * math.pi * r_hat)
    np.fill_diagonal(c_hat, 1.0)
    c_hat = nearest_coherence(circular_projection(c_hat))
    return CompositeCovariance.from_coherence(c_hat, d_assumed)


def composite_to_complex(cov: CompositeCovariance) -> np.ndarray:
    """Invert the composite embedding: Sigma_N = 2 (A + iB)."""
    m = cov.m
    return 2.0 * (cov.sigma[:m, :m] + 1j * cov.sigma[m:, :m])
