"""
Monte Carlo Harness
Batched simulation of Rao statistics with reproducible per-batch streams.

Trials are split into fixed-size batches; batch b always draws from
rng.child(b), so results do not depend on the number of threads.
"""

import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from shared.detector.statistic import rao_from_bits
from shared.models.detector import DetectorTables
from shared.numerics.linalg import jitter_cholesky
from shared.numerics.rng import RngStream
from shared.providers.base import BaseCovariancePrior
from shared.radar.quantizer import simulate_sign_batch


# ===== Stream ids =====

NOISE_STREAM = 1
MISMATCH_STREAM = 2
TABLE_STREAM = 3
TRIAL_STREAM = 4
PRIOR_STREAM = 5
THEORY_STREAM = 6
TRAINING_STREAM = 7


def batch_plan(n_trials: int, batch_size: int) -> List[Tuple[int, int]]:
    """(batch_index, size) pairs covering n_trials."""
    n_batches = math.ceil(n_trials / batch_size)
    return [
        (b, min(batch_size, n_trials - b * batch_size))
        for b in range(n_batches)
    ]


def run_batches(
    func: Callable[[int, int], list],
    n_trials: int,
    batch_size: int,
    threads: int = 1,
    desc: str = "trials",
    quiet: bool = False
) -> list:
    """
    Evaluate func(batch_index, size) over all batches, in batch order.

    Returns:
        List of per-batch results
    """
    plan = batch_plan(n_trials, batch_size)
    return Parallel(n_jobs=threads, prefer="threads")(
        delayed(func)(b, size)
        for b, size in tqdm(plan, desc=desc, disable=quiet, leave=False)
    )


def _prior_bits(
    mean: np.ndarray,
    prior: BaseCovariancePrior,
    size: int,
    rng: RngStream
) -> np.ndarray:
    factors = np.stack([
        jitter_cholesky(prior.sample(rng.child(1, t)).sigma) for t in range(size)
    ])
    k, n = mean.shape
    z = rng.generator.standard_normal((size, n, k))
    return (np.einsum("tnk,tjk->tnj", z, factors) + mean.T) >= 0


def simulate_statistics(
    tables_list: Sequence[DetectorTables],
    mean: np.ndarray,
    rng: RngStream,
    n_trials: int,
    sigma: Optional[np.ndarray] = None,
    prior: Optional[BaseCovariancePrior] = None,
    batch_size: int = 1000,
    threads: int = 1,
    desc: str = "trials",
    quiet: bool = False
) -> List[np.ndarray]:
    """
    Rao statistics of several detectors on common simulated data.

    Args:
        tables_list: Detectors scored on the same trials
        mean: 2m x n composite snapshot means (zero for noise only)
        rng: Base stream; batch b uses rng.child(b)
        n_trials: Number of trials
        sigma: Fixed true composite covariance (2m x 2m)
        prior: Covariance prior drawing a fresh Sigma' per trial instead
        batch_size: Trials per batch
        threads: Worker threads
        desc: Progress-bar label
        quiet: Disable the progress bar

    Returns:
        One array of n_trials statistics per detector
    """
    if (sigma is None) == (prior is None):
        raise ValueError("exactly one of sigma and prior is required")

    def batch(b: int, size: int) -> List[np.ndarray]:
        stream = rng.child(b)
        if prior is None:
            bits = simulate_sign_batch(mean, sigma, size, stream)
        else:
            bits = _prior_bits(mean, prior, size, stream)
        return [rao_from_bits(tables, bits) for tables in tables_list]

    results = run_batches(batch, n_trials, batch_size, threads, desc, quiet)
    return [
        np.concatenate([res[idx] for res in results])
        for idx in range(len(tables_list))
    ]


# ===== Empirical summaries =====

def exceedance(statistics: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """Fraction of statistics strictly above each threshold."""
    ordered = np.sort(statistics)
    above = ordered.size - np.searchsorted(ordered, gammas, side="right")
    return above / ordered.size


def binomial_ci(p_hat: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """3-sigma binomial bounds clipped to [0, 1]."""
    half = 3.0 * np.sqrt(np.asarray(p_hat) * (1.0 - np.asarray(p_hat)) / n)
    return np.clip(p_hat - half, 0.0, 1.0), np.clip(p_hat + half, 0.0, 1.0)


def roc_curve(h0: np.ndarray, h1: np.ndarray, pfa_grid: np.ndarray) -> np.ndarray:
    """Pd at empirical thresholds that give each false alarm rate on h0."""
    thresholds = np.quantile(h0, 1.0 - pfa_grid)
    return exceedance(h1, thresholds)
