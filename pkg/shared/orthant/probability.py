"""
Orthant Probabilities
Pr{x > 0} for x ~ N(mu, sigma), the building block of the one-bit
likelihood.

Closed forms cover k <= 2 and the zero-mean trivariate case; a general
trivariate mean uses one-dimensional quadrature of the bivariate CDF;
k >= 4 uses Genz's separation of variables with variable reordering
and randomized (scrambled Sobol) QMC batches.
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri, owens_t

from shared.errors import InvalidInputError, NumericalError
from shared.models.orthant import OrthantResult
from shared.numerics.linalg import check_psd
from shared.numerics.qmc import qmc_points
from shared.numerics.rng import RngStream


# ===== Defaults =====

DEFAULT_TOL = 1e-6
MAX_POINTS = 2 ** 20
N_BATCHES = 8
INITIAL_BATCH_POINTS = 2 ** 9
DEGENERATE_VAR = 1e-12
_TINY = np.finfo(float).tiny
_UNIT = 1.0 - 1e-16


# ===== Input handling =====

def validate_problem(mu, sigma, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Check an orthant problem and return float copies of (mu, sigma).

    Raises:
        InvalidInputError: Shape mismatch, tol <= 0 or non-positive diagonal
        NotPositiveDefiniteError: If sigma has a negative eigenvalue
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float)) if mu.size else np.zeros((0, 0))
    k = mu.shape[0]
    if mu.ndim != 1 or sigma.shape != (k, k):
        raise InvalidInputError(f"mu {mu.shape} and sigma {sigma.shape} are inconsistent")
    if not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    if k and np.any(np.diag(sigma) <= 0):
        raise InvalidInputError("sigma must have a strictly positive diagonal")
    return mu, check_psd(sigma, "sigma")


def standardize(mu: np.ndarray, sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Return (h, r): standardized mean mu/sd and correlation matrix."""
    sd = np.sqrt(np.diag(sigma))
    r = sigma / np.outer(sd, sd)
    np.fill_diagonal(r, 1.0)
    return mu / sd, np.clip(r, -1.0, 1.0)


# ===== Closed forms =====

def _owen_term(x: float, y: float, rho: float, s: float) -> float:
    # T(x, (y - rho x) / (x s)), with the x = 0 limit T(0, +-inf) = +-1/4
    if x == 0.0:
        return 0.25 * math.copysign(1.0, y)
    return float(owens_t(x, (y - rho * x) / (x * s)))


def bivariate_cdf(h: float, k: float, rho: float) -> float:
    """
    Standard bivariate normal CDF Phi_2(h, k; rho) via Owen's T function.

    The orthant probability of (h + z1, k + z2) equals Phi_2(h, k; rho).
    """
    if rho >= 1.0 - 1e-15:
        return float(ndtr(min(h, k)))
    if rho <= -1.0 + 1e-15:
        return float(max(0.0, ndtr(h) + ndtr(k) - 1.0))
    if h == 0.0 and k == 0.0:
        return 0.25 + math.asin(rho) / (2.0 * math.pi)

    s = math.sqrt(1.0 - rho * rho)
    beta = 0.5 if (h * k < 0.0 or (h * k == 0.0 and h + k < 0.0)) else 0.0
    value = (
        0.5 * ndtr(h) + 0.5 * ndtr(k)
        - _owen_term(h, k, rho, s)
        - _owen_term(k, h, rho, s)
        - beta
    )
    return float(min(1.0, max(0.0, value)))


def _trivariate_zero_mean(r: np.ndarray) -> float:
    total = math.asin(r[0, 1]) + math.asin(r[0, 2]) + math.asin(r[1, 2])
    return 0.125 + total / (4.0 * math.pi)


def _trivariate(h: np.ndarray, r: np.ndarray) -> Optional[OrthantResult]:
    """Condition on the least correlated variable and integrate the bivariate CDF."""
    pivot = int(np.argmin([max(abs(r[i, j]) for j in range(3) if j != i) for i in range(3)]))
    others = [i for i in range(3) if i != pivot]
    r1 = r[pivot, others]
    if np.max(np.abs(r1)) > 1.0 - 1e-9:
        return None

    s = np.sqrt(1.0 - r1 ** 2)
    rho_c = (r[others[0], others[1]] - r1[0] * r1[1]) / (s[0] * s[1])
    rho_c = float(np.clip(rho_c, -1.0, 1.0))
    hp, ho = h[pivot], h[others]

    def integrand(u: float) -> float:
        t = ndtri(u)
        return bivariate_cdf(
            (ho[0] + r1[0] * t) / s[0],
            (ho[1] + r1[1] * t) / s[1],
            rho_c
        )

    lower = float(ndtr(-hp))
    if lower >= 1.0:
        return OrthantResult(value=0.0)
    value, abserr = integrate.quad(integrand, lower, 1.0, epsabs=1e-13, epsrel=1e-11, limit=200)
    return OrthantResult(value=float(np.clip(value, 0.0, 1.0)), err_estimate=float(abserr))


# ===== Genz separation of variables =====

def permuted_cholesky(b: np.ndarray, r: np.ndarray, reorder: bool = True):
    """
    Cholesky factor of r with Genz-Bretz variable reordering for the
    upper-limit problem Pr{z < b}.

    At each step the variable with the smallest conditional probability
    Phi(b_tilde) is placed next; expected values of the truncated
    variables propagate into later conditional limits.

    Returns:
        Tuple (b_perm, L, perm)
    """
    k = b.shape[0]
    b = b.copy()
    r = r.copy()
    L = np.zeros((k, k))
    y = np.zeros(k)
    perm = np.arange(k)

    for i in range(k):
        if reorder and i < k - 1:
            scores = []
            for j in range(i, k):
                var = r[j, j] - L[j, :i] @ L[j, :i]
                if var <= DEGENERATE_VAR:
                    scores.append(2.0)
                else:
                    scores.append(ndtr((b[j] - L[j, :i] @ y[:i]) / math.sqrt(var)))
            j = i + int(np.argmin(scores))
            if j != i:
                b[[i, j]] = b[[j, i]]
                r[[i, j], :] = r[[j, i], :]
                r[:, [i, j]] = r[:, [j, i]]
                L[[i, j], :] = L[[j, i], :]
                perm[[i, j]] = perm[[j, i]]

        var = r[i, i] - L[i, :i] @ L[i, :i]
        if var <= DEGENERATE_VAR:
            continue
        L[i, i] = math.sqrt(var)
        L[i + 1:, i] = (r[i + 1:, i] - L[i + 1:, :i] @ L[i, :i]) / L[i, i]
        bi = (b[i] - L[i, :i] @ y[:i]) / L[i, i]
        mass = ndtr(bi)
        y[i] = -math.exp(-0.5 * bi * bi) / math.sqrt(2.0 * math.pi) / mass if mass > 1e-300 else bi

    return b, L, perm


def _genz_integrand(b: np.ndarray, L: np.ndarray, points: np.ndarray) -> np.ndarray:
    k = b.shape[0]
    n = points.shape[0]
    e = np.full(n, ndtr(b[0] / L[0, 0]))
    f = e.copy()
    y = np.zeros((n, k))
    for i in range(1, k):
        y[:, i - 1] = ndtri(np.clip(points[:, i - 1] * e, _TINY, _UNIT))
        shift = y[:, :i] @ L[i, :i]
        if L[i, i] > 0.0:
            e = ndtr((b[i] - shift) / L[i, i])
        else:
            e = (b[i] - shift >= 0.0).astype(float)
        f *= e
    return f


def _genz(
    h: np.ndarray,
    r: np.ndarray,
    tol: float,
    rng: RngStream,
    max_points: int,
    reorder: bool
) -> OrthantResult:
    # Pr{h + z > 0} = Pr{-z < h}, and -z has the same correlation
    b, L, _ = permuted_cholesky(h, r, reorder=reorder)
    k = h.shape[0]

    n = INITIAL_BATCH_POINTS
    while True:
        level = int(math.log2(n))
        estimates = np.array([
            _genz_integrand(b, L, qmc_points(k - 1, n, rng.child(level, batch))).mean()
            for batch in range(N_BATCHES)
        ])
        mean = float(estimates.mean())
        stderr = float(estimates.std(ddof=1) / math.sqrt(N_BATCHES))
        if not np.isfinite(mean):
            raise NumericalError("orthant integrand produced a non-finite value")
        if stderr <= tol or 2 * n * N_BATCHES > max_points:
            return OrthantResult(
                value=float(np.clip(mean, 0.0, 1.0)),
                err_estimate=stderr,
                n_points=n * N_BATCHES
            )
        n *= 2


# ===== Public API =====

def orthant_prob(
    mu,
    sigma,
    tol: float = DEFAULT_TOL,
    rng: Optional[RngStream] = None,
    max_points: int = MAX_POINTS,
    reorder: bool = True
) -> OrthantResult:
    """
    Orthant probability P(mu, sigma) = Pr{x > 0}, x ~ N(mu, sigma).

    Args:
        mu: Mean k-vector (k may be 0)
        sigma: k x k PSD covariance with positive diagonal
        tol: Target absolute standard error for the QMC path
        rng: Stream that fixes the QMC scrambles (default: seed 0);
            only derived sub-streams are used, so equal streams give
            equal results
        max_points: Hard budget of integration points
        reorder: Apply Genz-Bretz variable reordering

    Returns:
        OrthantResult
    """
    mu, sigma = validate_problem(mu, sigma, tol)
    k = mu.shape[0]
    if k == 0:
        return OrthantResult(value=1.0)

    h, r = standardize(mu, sigma)
    if k == 1:
        return OrthantResult(value=float(ndtr(h[0])))

    off_diagonal = r - np.eye(k)
    if np.max(np.abs(off_diagonal)) < 1e-15:
        return OrthantResult(value=float(np.prod(ndtr(h))))

    if k == 2:
        return OrthantResult(value=bivariate_cdf(h[0], h[1], r[0, 1]))

    if k == 3:
        if not np.any(h):
            value = _trivariate_zero_mean(r)
            return OrthantResult(value=float(np.clip(value, 0.0, 1.0)))
        result = _trivariate(h, r)
        if result is not None:
            return result

    return _genz(h, r, tol, rng or RngStream(seed=0), max_points, reorder)
