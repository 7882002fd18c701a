"""
Detector Tables
Orthant probabilities O_j, mean derivatives d_j and the per-sample
projections that define the Rao statistic.

Only one pattern per rotation orbit is evaluated: O is constant on an
orbit and d rotates with it (d_{j1} = T1 d_j).
"""

import hashlib
import math
from typing import List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from shared.detector.patterns import pattern_taus, rotate, orbits_from_taus
from shared.errors import InvalidInputError, TableConsistencyError
from shared.models.detector import DetectorTables, NoiseTables
from shared.models.scenario import Scenario
from shared.numerics.linalg import check_psd
from shared.numerics.rng import RngStream
from shared.orthant import orthant_grad_mean, orthant_prob


BUILD_TOL = 1e-7
UPSILON_REL_TOL = 1e-6
CIRCULAR_TOL = 1e-9


def validate_coherence(c: np.ndarray) -> np.ndarray:
    """
    Check a 2m x 2m coherence matrix of a circular complex vector.

    Raises:
        InvalidInputError: Wrong shape, non-unit diagonal or a matrix that
            is not invariant under the T1 rotation
    """
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] % 2:
        raise InvalidInputError(f"coherence must be 2m x 2m, got {c.shape}")
    if np.max(np.abs(np.diag(c) - 1.0)) > 1e-10:
        raise InvalidInputError("coherence must have a unit diagonal")
    c = check_psd(c, "coherence")
    rotated = rotate(rotate(c).T).T
    if np.max(np.abs(rotated - c)) > CIRCULAR_TOL:
        raise InvalidInputError("coherence is not that of a circular complex vector")
    return c


def coherence_hash(c: np.ndarray) -> str:
    """Stable SHA-256 of a coherence matrix rounded to 12 decimals."""
    rounded = np.round(np.asarray(c, dtype=float), 12) + 0.0
    return hashlib.sha256(rounded.tobytes()).hexdigest()


def _orbit_entry(
    tau: np.ndarray,
    c: np.ndarray,
    tol: float,
    rng: RngStream
) -> Tuple[float, float, np.ndarray]:
    c_j = c * np.outer(tau, tau)
    k = tau.shape[0]
    result = orthant_prob(np.zeros(k), c_j, tol=tol, rng=rng.child(0))
    grads = np.array([
        orthant_grad_mean(np.zeros(k), c_j, idx, tol=tol, rng=rng.child(1 + idx))
        for idx in range(k)
    ])
    return result.value, result.err_estimate, tau * grads


def check_noise_tables(o: np.ndarray, d: np.ndarray, bound: float):
    """
    Consistency of noise tables: the O_j are positive and sum to one, and
    the d_j sum to the zero vector (the O_j sum to one for every mean).

    Raises:
        TableConsistencyError: If either sum is off by more than bound
    """
    if np.any(o <= 0):
        raise TableConsistencyError("an orthant probability evaluated to zero")
    if abs(o.sum() - 1.0) > bound:
        raise TableConsistencyError(
            f"orthant probabilities sum to {o.sum():.10f}, outside 1 +- {bound:.2e}"
        )
    drift = float(np.max(np.abs(d.sum(axis=0))))
    if drift > bound:
        raise TableConsistencyError(
            f"mean derivatives sum to {drift:.3e} instead of zero (bound {bound:.2e})"
        )


def build_noise_tables(
    c: np.ndarray,
    tol: float = BUILD_TOL,
    rng: Optional[RngStream] = None,
    threads: int = 1
) -> NoiseTables:
    """
    Orthant probabilities and mean derivatives for all sign patterns.

    Args:
        c: 2m x 2m coherence matrix
        tol: Orthant tolerance
        rng: Stream for QMC scrambles (default seed 0)
        threads: Worker threads over orbits

    Returns:
        NoiseTables

    Raises:
        TableConsistencyError: If the O_j do not sum to one or the d_j
            do not sum to zero
    """
    c = validate_coherence(c)
    m = c.shape[0] // 2
    rng = rng or RngStream(seed=0)
    taus = pattern_taus(m)
    orbits = orbits_from_taus(taus)

    entries = Parallel(n_jobs=threads, prefer="threads")(
        delayed(_orbit_entry)(taus[orbit[0]], c, tol, rng.child(idx))
        for idx, orbit in enumerate(orbits)
    )

    kappa = taus.shape[0]
    o = np.zeros(kappa)
    d = np.zeros((kappa, 2 * m))
    total_err = 0.0
    for orbit, (value, err, d_rep) in zip(orbits, entries):
        vec = d_rep
        for idx in orbit:
            o[idx] = value
            d[idx] = vec
            vec = rotate(vec)
        total_err += len(orbit) * err

    check_noise_tables(o, d, 5.0 * total_err + kappa * tol)
    return NoiseTables(m=m, c=c, o=o, d=d, orbits=orbits, tol=tol)


def build_signal_tables(
    scenario: Scenario,
    noise_tables: NoiseTables,
    d_diag: Optional[np.ndarray] = None
) -> DetectorTables:
    """
    Project the scenario's columns on the noise tables.

    a_i = D^{-1/2}[u_i; v_i], b_i = D^{-1/2}[-v_i; u_i],
    Delta1 = (a_i^T d_j), Delta2 = (b_i^T d_j) and
    upsilon^2 = sum Delta1^2 / O = sum Delta2^2 / O.

    Args:
        scenario: Scenario supplying W
        noise_tables: Tables built on the assumed coherence matrix
        d_diag: Assumed composite variances (default: the scenario's)

    Raises:
        TableConsistencyError: If the two upsilon^2 expressions disagree
    """
    if noise_tables.m != scenario.m:
        raise InvalidInputError(f"tables are for m = {noise_tables.m}, scenario has m = {scenario.m}")
    d_diag = scenario.composite.d if d_diag is None else np.asarray(d_diag, dtype=float)
    if d_diag.shape != (2 * scenario.m,) or np.any(d_diag <= 0):
        raise InvalidInputError("d_diag must hold 2m positive variances")

    m = scenario.m
    stacked = scenario.stacked_columns
    scale = 1.0 / np.sqrt(d_diag)
    a_cols = stacked * scale
    b_cols = np.concatenate([-stacked[:, m:], stacked[:, :m]], axis=1) * scale

    delta1 = a_cols @ noise_tables.d.T
    delta2 = b_cols @ noise_tables.d.T
    upsilon_sq = float(np.sum(delta1 ** 2 / noise_tables.o))
    upsilon_sq_alt = float(np.sum(delta2 ** 2 / noise_tables.o))

    if not upsilon_sq > 0:
        raise TableConsistencyError("upsilon^2 is zero; the target matrix carries no signal")
    if abs(upsilon_sq - upsilon_sq_alt) > UPSILON_REL_TOL * upsilon_sq:
        raise TableConsistencyError(
            f"upsilon^2 expressions disagree: {upsilon_sq:.12g} vs {upsilon_sq_alt:.12g}"
        )

    return DetectorTables(
        noise=noise_tables,
        d_diag=d_diag,
        signal_cols=stacked,
        a_cols=a_cols,
        b_cols=b_cols,
        delta1=delta1,
        delta2=delta2,
        upsilon_sq=upsilon_sq,
    )


def build_tables(
    scenario: Scenario,
    tol: float = BUILD_TOL,
    rng: Optional[RngStream] = None,
    threads: int = 1
) -> DetectorTables:
    """Noise and signal tables on the scenario's own covariance."""
    noise = build_noise_tables(scenario.composite.c, tol=tol, rng=rng, threads=threads)
    return build_signal_tables(scenario, noise)


def white_noise_tables(scenario: Scenario) -> DetectorTables:
    """
    Baseline detector that ignores noise correlation (coherence forced to I).

    With C = I every orthant and derivative is a closed form, so the
    build is exact.
    """
    noise = build_noise_tables(np.eye(2 * scenario.m))
    return build_signal_tables(scenario, noise)


def white_upsilon_sq(scenario: Scenario) -> float:
    """(2 / pi) sum_i ||a_i||^2, the white-noise Fisher scale."""
    a = scenario.stacked_columns / np.sqrt(scenario.composite.d)
    return 2.0 / math.pi * float(np.sum(a ** 2))


def orbit_orthants(
    c: np.ndarray,
    tol: float = BUILD_TOL,
    rng: Optional[RngStream] = None,
    threads: int = 1
) -> np.ndarray:
    """
    Zero-mean orthant probabilities P(0, Gamma_j C Gamma_j) for all
    patterns, one evaluation per orbit.
    """
    c = validate_coherence(c)
    m = c.shape[0] // 2
    rng = rng or RngStream(seed=0)
    taus = pattern_taus(m)
    orbits = orbits_from_taus(taus)

    values = Parallel(n_jobs=threads, prefer="threads")(
        delayed(orthant_prob)(
            np.zeros(2 * m), c * np.outer(taus[orbit[0]], taus[orbit[0]]), tol, rng.child(idx, 0)
        )
        for idx, orbit in enumerate(orbits)
    )

    o = np.zeros(taus.shape[0])
    for orbit, result in zip(orbits, values):
        o[orbit] = result.value
    return o
