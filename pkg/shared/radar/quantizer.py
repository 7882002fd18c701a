"""
One-Bit Quantizer
Simulation of sign-quantized MIMO radar snapshots.
"""

from typing import Optional

import numpy as np

from shared.errors import InvalidInputError
from shared.models.scenario import QuantizedData, Scenario
from shared.numerics.linalg import complex_to_composite, composite_mean, jitter_cholesky, mvn_sample
from shared.numerics.rng import RngStream


def quantize(x: np.ndarray) -> np.ndarray:
    """Q(x) = sign(Re x) + i sign(Im x) with sign(0) = +1."""
    x = np.asarray(x, dtype=complex)
    re = np.where(x.real >= 0, 1.0, -1.0)
    im = np.where(x.imag >= 0, 1.0, -1.0)
    return re + 1j * im


def _snapshot_mean(scenario: Scenario, beta: complex, n_snapshots: int) -> np.ndarray:
    if beta == 0:
        return np.zeros((2 * scenario.m, n_snapshots))
    if n_snapshots != scenario.n:
        raise InvalidInputError(
            f"signal-present simulation needs n_snapshots = {scenario.n}, got {n_snapshots}"
        )
    return composite_mean(scenario.w, beta)


def simulate_quantized(
    scenario: Scenario,
    beta: complex,
    rng: RngStream,
    n_snapshots: Optional[int] = None,
    sigma_n: Optional[np.ndarray] = None
) -> QuantizedData:
    """
    Draw Y = Q(beta W + N) with noise columns i.i.d. CN(0, sigma_n).

    Args:
        scenario: Known scenario (W and default noise covariance)
        beta: Target amplitude (0 for noise only)
        rng: Stream to draw from (advanced)
        n_snapshots: Snapshot count (default scenario.n; any value when beta = 0)
        sigma_n: True noise covariance if it differs from the scenario's

    Returns:
        QuantizedData
    """
    n = scenario.n if n_snapshots is None else n_snapshots
    composite = scenario.composite if sigma_n is None else complex_to_composite(sigma_n)
    m = scenario.m

    mean = _snapshot_mean(scenario, beta, n)
    noise = mvn_sample(np.zeros(2 * m), composite.sigma, rng, size=n).T
    x = mean + noise
    y = np.where(x[:m] >= 0, 1.0, -1.0) + 1j * np.where(x[m:] >= 0, 1.0, -1.0)
    return QuantizedData(y=y)


def simulate_sign_batch(
    mean: np.ndarray,
    sigma: np.ndarray,
    n_trials: int,
    rng: RngStream
) -> np.ndarray:
    """
    Composite sign bits of many independent trials.

    Args:
        mean: 2m x n composite means (columns per snapshot)
        sigma: 2m x 2m composite noise covariance
        n_trials: Number of trials
        rng: Stream to draw from (advanced)

    Returns:
        Boolean array (n_trials, n, 2m), True where the component is positive
    """
    mean = np.asarray(mean, dtype=float)
    factor = jitter_cholesky(np.asarray(sigma, dtype=float))
    k, n = mean.shape
    z = rng.generator.standard_normal((n_trials, n, k))
    return (z @ factor.T + mean.T) >= 0
