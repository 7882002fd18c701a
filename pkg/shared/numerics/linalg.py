"""
Linear Algebra Helpers
Small dense-matrix routines: validation, the complex-to-real composite
embedding, coherence normalization and Gaussian sampling.
"""

from typing import Optional, Tuple

import numpy as np

from shared.errors import InvalidInputError, NotPositiveDefiniteError
from shared.models.covariance import CompositeCovariance
from shared.numerics.rng import RngStream


# ===== Tolerances =====

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
JITTER_SCALE = 1e-12


# ===== Validation =====

def _square(matrix: np.ndarray, name: str) -> np.ndarray:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidInputError(f"{name} must be a square matrix, got shape {matrix.shape}")
    return matrix


def check_hermitian(matrix: np.ndarray, name: str = "matrix") -> np.ndarray:
    """
    Validate that a (complex or real) matrix is Hermitian.

    Args:
        matrix: Square matrix
        name: Label used in error messages

    Returns:
        The matrix with its Hermitian part enforced exactly

    Raises:
        InvalidInputError: If the asymmetry exceeds HERMITIAN_TOL
    """
    matrix = _square(matrix, name)
    scale = max(1.0, float(np.max(np.abs(matrix))) if matrix.size else 1.0)
    if matrix.size and np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOL * scale:
        raise InvalidInputError(f"{name} is not Hermitian")
    return 0.5 * (matrix + matrix.conj().T)


def check_psd(matrix: np.ndarray, name: str = "matrix") -> np.ndarray:
    """
    Validate that a Hermitian matrix is positive semi-definite.

    Raises:
        NotPositiveDefiniteError: If an eigenvalue falls below -PSD_TOL (relative to scale)
    """
    matrix = check_hermitian(matrix, name)
    if matrix.size == 0:
        return matrix
    eigvals = np.linalg.eigvalsh(matrix)
    scale = max(1.0, float(np.max(np.abs(eigvals))))
    if eigvals[0] < -PSD_TOL * scale:
        raise NotPositiveDefiniteError(
            f"{name} is not positive semi-definite (min eigenvalue {eigvals[0]:.3e})"
        )
    return matrix


# ===== Composite embedding =====

def coherence_from_sigma(sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split a real covariance into its diagonal and coherence matrix.

    Returns:
        Tuple (d, c) with c = d^{-1/2} sigma d^{-1/2} and unit diagonal
    """
    d = np.diag(sigma).astype(float).copy()
    if np.any(d <= 0):
        raise InvalidInputError("covariance diagonal must be strictly positive")
    scale = 1.0 / np.sqrt(d)
    c = sigma * np.outer(scale, scale)
    np.fill_diagonal(c, 1.0)
    return d, np.clip(c, -1.0, 1.0)


def complex_to_composite(sigma_n: np.ndarray) -> CompositeCovariance:
    """
    Embed a circular complex covariance into its 2m x 2m real form.

    sigma = 1/2 [[Re S, -Im S], [Im S, Re S]] describes the stacked
    vector [Re x; Im x] of x ~ CN(0, S).

    Args:
        sigma_n: Complex Hermitian PSD m x m matrix

    Returns:
        CompositeCovariance with sigma, d and c
    """
    sigma_n = check_psd(np.asarray(sigma_n, dtype=complex), "sigma_n")
    re, im = sigma_n.real, sigma_n.imag
    sigma = 0.5 * np.block([[re, -im], [im, re]])
    sigma = 0.5 * (sigma + sigma.T)
    d, c = coherence_from_sigma(sigma)
    return CompositeCovariance(sigma=sigma, d=d, c=c)


def composite_mean(w_i: np.ndarray, beta: complex) -> np.ndarray:
    """
    Mean of the stacked real snapshot [Re x_i; Im x_i] for x_i = beta w_i + n_i.

    Accepts a single m-vector or an (m, n) matrix of columns; the result
    has 2m rows in the same layout.
    """
    w = np.asarray(w_i, dtype=complex)
    product = complex(beta) * w
    return np.concatenate([product.real, product.imag], axis=0)


# ===== Sampling =====

def jitter_cholesky(sigma: np.ndarray, name: str = "sigma") -> np.ndarray:
    """
    Lower Cholesky factor, retrying with diagonal jitter on semi-definite input.

    The jitter is JITTER_SCALE * trace / k. An all-zero matrix returns
    the zero factor.

    Raises:
        NotPositiveDefiniteError: If the matrix is not PSD even after jitter
    """
    sigma = np.asarray(sigma, dtype=float)
    k = sigma.shape[0]
    if k == 0 or not np.any(sigma):
        return np.zeros_like(sigma)
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        pass

    jitter = JITTER_SCALE * max(float(np.trace(sigma)), 1e-300) / k
    try:
        return np.linalg.cholesky(sigma + jitter * np.eye(k))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"{name} is not positive semi-definite") from exc


def mvn_sample(
    mu: np.ndarray,
    sigma: np.ndarray,
    rng: RngStream,
    size: Optional[int] = None
) -> np.ndarray:
    """
    Draw from N(mu, sigma) through a (jittered) Cholesky factor.

    Args:
        mu: Mean k-vector
        sigma: k x k PSD covariance
        rng: Stream to draw from (advanced)
        size: Number of draws; None returns a single k-vector

    Returns:
        Array of shape (k,) or (size, k)
    """
    mu = np.asarray(mu, dtype=float)
    sigma = _square(np.asarray(sigma, dtype=float), "sigma")
    if sigma.shape[0] != mu.shape[0]:
        raise InvalidInputError("mu and sigma dimensions differ")

    factor = jitter_cholesky(sigma)
    shape = (mu.shape[0],) if size is None else (size, mu.shape[0])
    z = rng.generator.standard_normal(shape)
    return mu + z @ factor.T
