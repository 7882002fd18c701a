"""
Orthant Derivatives
Derivatives of P(mu, sigma) with respect to mean entries and to
correlation coefficients.
"""

import math
from typing import Optional

import numpy as np

from shared.errors import InvalidInputError, NotPositiveDefiniteError, SingularCorrelationError
from shared.numerics.rng import RngStream
from shared.orthant.probability import DEFAULT_TOL, orthant_prob, validate_problem


CORRELATION_POLE = 1e-10
UNIT_DIAGONAL_TOL = 1e-10


def conditional_reduction(sigma: np.ndarray, j: int) -> np.ndarray:
    """
    R(sigma, j): sigma without row/column j minus r_j r_j^T / sigma_jj,
    the covariance of the other entries given entry j.
    """
    rest = [i for i in range(sigma.shape[0]) if i != j]
    r = sigma[rest, j]
    reduced = sigma[np.ix_(rest, rest)] - np.outer(r, r) / sigma[j, j]
    return 0.5 * (reduced + reduced.T)


def orthant_grad_mean(
    mu,
    sigma,
    j: int,
    tol: float = DEFAULT_TOL,
    rng: Optional[RngStream] = None
) -> float:
    """
    Derivative of P(mu, sigma) with respect to mu_j.

    Evaluates (2 pi sigma_jj)^{-1/2} P(omega, R(sigma, j)) where omega is
    mu with entry j removed. This is exact at mu = 0; away from zero the
    conditional-mean shift and the Gaussian density factor in mu_j are
    not applied.

    Args:
        mu: Mean k-vector
        sigma: k x k covariance
        j: 0-based entry index
        tol: Orthant tolerance
        rng: Stream for the (k-1)-dimensional orthant evaluation

    Returns:
        The derivative as a float
    """
    mu, sigma = validate_problem(mu, sigma, tol)
    k = mu.shape[0]
    if not 0 <= j < k:
        raise InvalidInputError(f"index {j} out of range for k = {k}")

    scale = 1.0 / math.sqrt(2.0 * math.pi * sigma[j, j])
    if k == 1:
        return scale

    reduced = conditional_reduction(sigma, j)
    if np.any(np.diag(reduced) <= 0):
        raise NotPositiveDefiniteError(f"conditional covariance R(sigma, {j}) is singular")
    omega = np.delete(mu, j)
    return scale * orthant_prob(omega, reduced, tol=tol, rng=rng).value


def _validate_coherence(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] < 2:
        raise InvalidInputError(f"coherence matrix must be square with k >= 2, got {c.shape}")
    if np.max(np.abs(np.diag(c) - 1.0)) > UNIT_DIAGONAL_TOL:
        raise InvalidInputError("coherence matrix must have a unit diagonal")
    _, c = validate_problem(np.zeros(c.shape[0]), c, DEFAULT_TOL)
    return c


def orthant_grad_corr(
    c,
    r: int,
    s: int,
    tol: float = DEFAULT_TOL,
    rng: Optional[RngStream] = None
) -> float:
    """
    Derivative of P(0, C) with respect to the correlation c_rs.

    Equals P(0, C_bar) / (2 pi sqrt(1 - c_rs^2)), where C_bar is the
    covariance of the remaining entries given entries r and s (the
    inverse of C^{-1} with rows/columns r, s removed).

    Args:
        c: Unit-diagonal PSD coherence matrix
        r: 0-based first index
        s: 0-based second index, r < s
        tol: Orthant tolerance
        rng: Stream for the (k-2)-dimensional orthant evaluation

    Raises:
        SingularCorrelationError: If |c_rs| is within 1e-10 of 1
    """
    c = _validate_coherence(c)
    k = c.shape[0]
    if not 0 <= r < s < k:
        raise InvalidInputError(f"need 0 <= r < s < {k}, got r={r}, s={s}")

    c_rs = c[r, s]
    if abs(c_rs) >= 1.0 - CORRELATION_POLE:
        raise SingularCorrelationError(f"|c[{r}, {s}]| = {abs(c_rs):.12f} is too close to 1")

    pole = 1.0 / (2.0 * math.pi * math.sqrt(1.0 - c_rs * c_rs))
    if k == 2:
        return pole

    pair = [r, s]
    rest = [i for i in range(k) if i not in pair]
    cross = c[np.ix_(rest, pair)]
    c_bar = c[np.ix_(rest, rest)] - cross @ np.linalg.solve(c[np.ix_(pair, pair)], cross.T)
    c_bar = 0.5 * (c_bar + c_bar.T)
    if np.any(np.diag(c_bar) <= 0):
        raise NotPositiveDefiniteError(f"conditional coherence given ({r}, {s}) is singular")

    return pole * orthant_prob(np.zeros(k - 2), c_bar, tol=tol, rng=rng).value


def orthant_grad_corr_all(
    c,
    tol: float = DEFAULT_TOL,
    rng: Optional[RngStream] = None
) -> np.ndarray:
    """
    All correlation derivatives in vech order (0,1), (0,2), ..., (k-2,k-1).

    Returns:
        Vector of length k(k-1)/2
    """
    c = _validate_coherence(c)
    rng = rng or RngStream(seed=0)
    rows, cols = np.triu_indices(c.shape[0], 1)
    return np.array([
        orthant_grad_corr(c, int(r), int(s), tol=tol, rng=rng.child(idx))
        for idx, (r, s) in enumerate(zip(rows, cols))
    ])


def vech_upper(matrix: np.ndarray) -> np.ndarray:
    """Strict upper triangle of a square matrix in the same vech order."""
    rows, cols = np.triu_indices(matrix.shape[0], 1)
    return np.asarray(matrix)[rows, cols]
