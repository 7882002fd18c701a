"""
Null Distribution Under Mismatch
Variance inflation when the detector's covariance differs from the
truth, the resulting false alarm law, and its average over a
covariance prior (exact per draw or first-order Taylor).
"""

import math
from typing import Optional, Union

import numpy as np
from joblib import Parallel, delayed

from shared.detector.patterns import pattern_taus
from shared.detector.tables import BUILD_TOL, build_noise_tables, orbit_orthants
from shared.errors import InvalidInputError, NumericalError, TableConsistencyError
from shared.models.analysis import MismatchAnalysis
from shared.models.covariance import CompositeCovariance
from shared.models.detector import DetectorTables
from shared.numerics.rng import RngStream
from shared.orthant import orthant_grad_corr_all, vech_upper
from shared.providers.base import BaseCovariancePrior

ArrayLike = Union[float, np.ndarray]

UPSILON1_REL_TOL = 1e-5


def upsilon1_sq(
    tables: DetectorTables,
    c_prime: Union[CompositeCovariance, np.ndarray],
    tol: float = BUILD_TOL,
    rng: Optional[RngStream] = None,
    threads: int = 1
) -> MismatchAnalysis:
    """
    Mismatch variance terms for data whose true coherence is C'.

    upsilon1^2 = sum_ij Delta1(i,j)^2 O'_j / O_j^2 (equal with Delta2),
    and varsigma_l^2 = sum_ij Delta_l(i,j) Delta'_l(i,j) / O_j where
    Delta' is built from the true variances and C'.

    Args:
        tables: Detector tables built on the assumed covariance
        c_prime: True covariance (composite) or coherence matrix; a bare
            coherence matrix keeps the assumed variances
        tol: Orthant tolerance
        rng: Stream for the orthant evaluations
        threads: Worker threads

    Raises:
        TableConsistencyError: If the two upsilon1^2 traces disagree
    """
    if isinstance(c_prime, CompositeCovariance):
        c, d_true = c_prime.c, c_prime.d
    else:
        c, d_true = np.asarray(c_prime, dtype=float), tables.d_diag

    noise_prime = build_noise_tables(c, tol=tol, rng=rng, threads=threads)
    o = tables.o
    g = noise_prime.o / o ** 2

    ups1 = float(np.sum(tables.delta1 ** 2 * g))
    ups1_alt = float(np.sum(tables.delta2 ** 2 * g))
    if abs(ups1 - ups1_alt) > UPSILON1_REL_TOL * ups1:
        raise TableConsistencyError(
            f"upsilon1^2 expressions disagree: {ups1:.12g} vs {ups1_alt:.12g}"
        )

    m = noise_prime.m
    scale = 1.0 / np.sqrt(d_true)
    stacked = tables.signal_cols
    a_prime = stacked * scale
    b_prime = np.concatenate([-stacked[:, m:], stacked[:, :m]], axis=1) * scale
    delta1_prime = a_prime @ noise_prime.d.T
    delta2_prime = b_prime @ noise_prime.d.T

    return MismatchAnalysis(
        g=g,
        o_prime=noise_prime.o,
        upsilon_sq=tables.upsilon_sq,
        upsilon1_sq=ups1,
        varsigma1_sq=float(np.sum(tables.delta1 * delta1_prime / o)),
        varsigma2_sq=float(np.sum(tables.delta2 * delta2_prime / o)),
    )


def pfa_mismatched(gamma: ArrayLike, upsilon_sq: float, upsilon1_sq: float) -> ArrayLike:
    """Pfa = exp(-upsilon^2 gamma / (2 upsilon1^2))."""
    if upsilon_sq <= 0 or upsilon1_sq <= 0:
        raise InvalidInputError("variances must be positive")
    return np.exp(-upsilon_sq * np.asarray(gamma, dtype=float) / (2.0 * upsilon1_sq))


def threshold_mismatched(pfa: float, upsilon_sq: float, upsilon1_sq: float) -> float:
    """gamma = -(2 upsilon1^2 / upsilon^2) ln(pfa), restoring the nominal Pfa."""
    if not 0 < pfa < 1:
        raise InvalidInputError("pfa must lie in (0, 1)")
    if upsilon_sq <= 0 or upsilon1_sq <= 0:
        raise InvalidInputError("variances must be positive")
    return -(2.0 * upsilon1_sq / upsilon_sq) * math.log(pfa)


# ===== Averaged false alarm =====

def _draw_upsilon1_direct(
    tables: DetectorTables,
    weights: np.ndarray,
    c_prime: np.ndarray,
    tol: float,
    rng: RngStream
) -> float:
    o_prime = orbit_orthants(c_prime, tol=tol, rng=rng)
    return float(np.sum(weights * o_prime / tables.o ** 2))


def avg_pfa(
    gamma: ArrayLike,
    tables: DetectorTables,
    prior_sampler: BaseCovariancePrior,
    K: int,
    mode: str = "taylor",
    rng: Optional[RngStream] = None,
    tol: float = 1e-6,
    threads: int = 1
) -> ArrayLike:
    """
    False alarm probability averaged over K prior draws of Sigma'.

    Each draw i gives upsilon1_i^2 = sum_j s_j O'_{j,i} / O_j^2 with
    s_j = sum_i Delta1(i,j)^2. In 'direct' mode O' is evaluated per
    draw; in 'taylor' mode O'_j = O_j + grad_c P(0, C_j) . (c'_j - c_j)
    using correlation derivatives computed once per orbit.

    Args:
        gamma: Threshold(s)
        tables: Detector tables on the assumed covariance
        prior_sampler: Covariance prior
        K: Number of draws
        mode: 'direct' or 'taylor'
        rng: Stream; draw i uses rng.child(0, i) in both modes
        tol: Orthant tolerance
        threads: Worker threads

    Returns:
        Averaged Pfa with the shape of gamma
    """
    if K < 1:
        raise InvalidInputError(f"K must be >= 1, got {K}")
    if mode not in ("direct", "taylor"):
        raise InvalidInputError(f"mode must be 'direct' or 'taylor', got {mode!r}")
    rng = rng or RngStream(seed=0)

    weights = np.sum(tables.delta1 ** 2, axis=0)
    coherences = [prior_sampler.sample(rng.child(0, i)).c for i in range(K)]

    if mode == "direct":
        ups1 = np.array(Parallel(n_jobs=threads, prefer="threads")(
            delayed(_draw_upsilon1_direct)(tables, weights, c, tol, rng.child(1, i))
            for i, c in enumerate(coherences)
        ))
    else:
        ups1 = _taylor_upsilon1(tables, weights, coherences, tol, rng.child(2), threads)

    if np.any(ups1 <= 0):
        raise NumericalError("first-order expansion produced a non-positive variance")

    gamma_arr = np.asarray(gamma, dtype=float)
    pfa = np.exp(-tables.upsilon_sq * gamma_arr[..., None] / (2.0 * ups1)).mean(axis=-1)
    return float(pfa) if np.ndim(gamma) == 0 else pfa


def _taylor_upsilon1(
    tables: DetectorTables,
    weights: np.ndarray,
    coherences: list,
    tol: float,
    rng: RngStream,
    threads: int
) -> np.ndarray:
    c = tables.noise.c
    taus = pattern_taus(tables.noise.m)
    orbits = tables.noise.orbits
    reps = [taus[orbit[0]] for orbit in orbits]

    grads = Parallel(n_jobs=threads, prefer="threads")(
        delayed(orthant_grad_corr_all)(c * np.outer(tau, tau), tol, rng.child(idx))
        for idx, tau in enumerate(reps)
    )

    base = tables.upsilon_sq
    ups1 = np.empty(len(coherences))
    for i, c_prime in enumerate(coherences):
        shift = 0.0
        for orbit, tau, grad in zip(orbits, reps, grads):
            sign = np.outer(tau, tau)
            delta_o = float(grad @ (vech_upper(c_prime * sign) - vech_upper(c * sign)))
            shift += delta_o * float(np.sum(weights[orbit] / tables.o[orbit] ** 2))
        ups1[i] = base + shift
    return ups1
