"""
Non-Null Distribution
Moments of (w1, w2) when a target is present, the exact detection
probability through the weighted noncentral chi-square law, and the
low-SNR approximations.
"""

import math
from typing import Optional, Union

import numpy as np
from joblib import Parallel, delayed
from scipy.stats import chi2, ncx2

from shared.analysis.imhof import imhof_cdf
from shared.detector.patterns import pattern_taus
from shared.detector.tables import orbit_orthants
from shared.errors import InvalidInputError, NotPositiveDefiniteError
from shared.models.analysis import MismatchAnalysis, NonNullMoments
from shared.models.covariance import CompositeCovariance
from shared.models.detector import DetectorTables
from shared.models.scenario import Scenario
from shared.numerics.linalg import composite_mean
from shared.numerics.rng import RngStream
from shared.orthant import orthant_prob

ArrayLike = Union[float, np.ndarray]


def _pattern_row(
    nu: np.ndarray,
    c: np.ndarray,
    taus: np.ndarray,
    tol: float,
    rng: RngStream
) -> np.ndarray:
    return np.array([
        orthant_prob(tau * nu, c * np.outer(tau, tau), tol=tol, rng=rng.child(j)).value
        for j, tau in enumerate(taus)
    ])


def pattern_probabilities(
    tables: DetectorTables,
    scenario: Scenario,
    beta: complex,
    true_cov: Optional[CompositeCovariance] = None,
    tol: float = 1e-6,
    rng: Optional[RngStream] = None,
    threads: int = 1
) -> np.ndarray:
    """
    Q(i, j) = P(Gamma_j nu_i, Gamma_j C Gamma_j), the probability that
    snapshot i falls in pattern j under the signal-present hypothesis.

    Rows are computed once per distinct nu_i; a zero mean reuses the
    orbit-reduced noise orthants.

    Returns:
        n x kappa matrix whose rows sum to one
    """
    rng = rng or RngStream(seed=0)
    if true_cov is None:
        c, d, o_zero = tables.noise.c, tables.d_diag, tables.o
    else:
        c, d, o_zero = true_cov.c, true_cov.d, None

    nu = (composite_mean(scenario.w, beta) / np.sqrt(d)[:, None]).T
    distinct, inverse = np.unique(np.round(nu, 14), axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    taus = pattern_taus(tables.noise.m)

    def row(u: int, mean: np.ndarray) -> np.ndarray:
        if not np.any(mean):
            return o_zero if o_zero is not None else orbit_orthants(c, tol=tol, rng=rng.child(0, u))
        return _pattern_row(mean, c, taus, tol, rng.child(1, u))

    rows = Parallel(n_jobs=threads, prefer="threads")(
        delayed(row)(u, mean) for u, mean in enumerate(distinct)
    )
    return np.asarray(rows)[inverse]


def nonnull_moments(
    tables: DetectorTables,
    scenario: Scenario,
    beta: complex,
    true_cov: Optional[CompositeCovariance] = None,
    tol: float = 1e-6,
    rng: Optional[RngStream] = None,
    threads: int = 1
) -> NonNullMoments:
    """
    Mean and covariance of w = (w1, w2) under the signal-present hypothesis.

    With E_l = Delta_l / O and Q from pattern_probabilities:
    u_w = (1/upsilon) [sum Q E1, sum Q E2] and
    sigma_l^2 = (1/upsilon^2) sum_i [sum_j Q E_l^2 - (sum_j Q E_l)^2]
    (cross term alike). sigma_w = P^T Lambda P gives lambda and the
    offsets m = Lambda^{-1/2} P u_w.

    Args:
        tables: Detector tables on the assumed covariance
        scenario: Scenario supplying W
        beta: Target amplitude
        true_cov: True covariance when it differs from the assumed one
        tol: Orthant tolerance
        rng: Stream for the orthant evaluations
        threads: Worker threads

    Raises:
        NotPositiveDefiniteError: If sigma_w is not positive definite
    """
    q = pattern_probabilities(tables, scenario, beta, true_cov, tol, rng, threads)
    e1, e2 = tables.score1, tables.score2
    ups = tables.upsilon

    row1 = np.sum(q * e1, axis=1)
    row2 = np.sum(q * e2, axis=1)
    u_w = np.array([row1.sum(), row2.sum()]) / ups

    s11 = (np.sum(q * e1 * e1) - np.sum(row1 * row1)) / ups ** 2
    s22 = (np.sum(q * e2 * e2) - np.sum(row2 * row2)) / ups ** 2
    s12 = (np.sum(q * e1 * e2) - np.sum(row1 * row2)) / ups ** 2
    sigma_w = np.array([[s11, s12], [s12, s22]])

    lam, vectors = np.linalg.eigh(sigma_w)
    if np.any(lam <= 0):
        raise NotPositiveDefiniteError(
            f"covariance of w is not positive definite (eigenvalues {lam}); tighten the orthant tolerance"
        )
    m_noncentral = (vectors.T @ u_w) / np.sqrt(lam)

    return NonNullMoments(u_w=u_w, sigma_w=sigma_w, lam=lam, m_noncentral=m_noncentral)


def pd_exact(gamma: ArrayLike, moments: NonNullMoments) -> ArrayLike:
    """Pd = 1 - Imhof CDF of sum_l lambda_l chi2_1(m_l^2) at gamma."""
    gammas = np.atleast_1d(np.asarray(gamma, dtype=float))
    pd = np.array([
        1.0 - imhof_cdf(moments.lam, moments.noncentrality, float(g)) for g in gammas
    ])
    return float(pd[0]) if np.ndim(gamma) == 0 else pd


def _chi2_2_tail(x: ArrayLike, noncentrality: float) -> ArrayLike:
    if noncentrality == 0:
        return chi2.sf(x, 2)
    return ncx2.sf(x, 2, noncentrality)


def pd_low_snr(gamma: ArrayLike, upsilon_sq: float, beta: complex) -> ArrayLike:
    """Upper tail of chi2_2(delta^2) at gamma with delta^2 = upsilon^2 |beta|^2."""
    if upsilon_sq <= 0:
        raise InvalidInputError("upsilon_sq must be positive")
    return _chi2_2_tail(np.asarray(gamma, dtype=float), upsilon_sq * abs(beta) ** 2)


def pd_low_snr_mismatched(gamma: ArrayLike, analysis: MismatchAnalysis, beta: complex) -> ArrayLike:
    """
    Low-SNR Pd under mismatch: upper tail of chi2_2(delta'^2) at
    (upsilon^2 / upsilon1^2) gamma, delta'^2 = (a^2 varsigma1^4 + b^2 varsigma2^4) / upsilon1^2.
    """
    a, b = complex(beta).real, complex(beta).imag
    delta_sq = (a * a * analysis.varsigma1_sq ** 2 + b * b * analysis.varsigma2_sq ** 2) / analysis.upsilon1_sq
    scaled = np.asarray(gamma, dtype=float) / analysis.variance_ratio
    return _chi2_2_tail(scaled, delta_sq)
