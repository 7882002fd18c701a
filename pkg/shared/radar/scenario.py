"""
Radar Scenario
Steering vectors, LFM waveform, target matrix, colored noise
covariances, covariance perturbations and SNR bookkeeping.
"""

import math
from typing import Optional

import numpy as np

from shared.errors import InvalidInputError, PerturbationError
from shared.models.scenario import Scenario
from shared.numerics.linalg import check_psd, complex_to_composite
from shared.numerics.rng import RngStream


MAX_PERTURBATION_TRIES = 100


# ===== Array geometry & waveform =====

def ula_steering(phi: float, count: int) -> np.ndarray:
    """
    Half-wavelength uniform linear array steering vector.

    Entry k (0-based) is exp(i pi k sin phi).
    """
    if count < 1:
        raise InvalidInputError(f"count must be >= 1, got {count}")
    return np.exp(1j * math.pi * np.arange(count) * math.sin(phi))


def lfm_waveform(p: int, n: int, theta: float) -> np.ndarray:
    """
    Orthogonal LFM waveform S (p x n).

    S[k, l] = exp{(i/n) [2 pi l + pi l^2 + k sin theta]} / sqrt(p)
    with 0-based k, l.
    """
    if p < 1 or n < 1:
        raise InvalidInputError(f"p and n must be >= 1, got p={p}, n={n}")
    k = np.arange(p)[:, None]
    l = np.arange(n)[None, :]
    phase = (2.0 * math.pi * l + math.pi * l ** 2 + k * math.sin(theta)) / n
    return np.exp(1j * phase) / math.sqrt(p)


def make_scenario(
    m: int,
    p: int,
    n: int,
    phi: float,
    theta: float,
    sigma_n: np.ndarray,
    waveform: Optional[np.ndarray] = None
) -> Scenario:
    """
    Assemble a scenario with W = a_r(phi) a_t(phi)^T S.

    Args:
        m: Receive antennas
        p: Transmit antennas
        n: Snapshots
        phi: Target angle (radians)
        theta: LFM angle parameter (radians)
        sigma_n: m x m complex Hermitian PSD noise covariance
        waveform: Optional p x n waveform replacing the LFM default

    Returns:
        Scenario with its composite covariance cached
    """
    sigma_n = np.asarray(sigma_n, dtype=complex)
    if sigma_n.shape != (m, m):
        raise InvalidInputError(f"sigma_n has shape {sigma_n.shape}, expected ({m}, {m})")
    composite = complex_to_composite(sigma_n)

    s = lfm_waveform(p, n, theta) if waveform is None else np.asarray(waveform, dtype=complex)
    if s.shape != (p, n):
        raise InvalidInputError(f"waveform has shape {s.shape}, expected ({p}, {n})")

    a_r = ula_steering(phi, m)
    a_t = ula_steering(phi, p)
    w = np.outer(a_r, a_t @ s)

    return Scenario(
        m=m, p=p, n=n, phi=phi, theta=theta,
        waveform=s, w=w,
        sigma_n=0.5 * (sigma_n + sigma_n.conj().T),
        composite=composite
    )


def with_noise(scenario: Scenario, sigma_n: np.ndarray) -> Scenario:
    """Copy of a scenario with a different noise covariance."""
    return make_scenario(
        scenario.m, scenario.p, scenario.n, scenario.phi, scenario.theta,
        sigma_n, waveform=scenario.waveform
    )


def with_snapshots(scenario: Scenario, n: int) -> Scenario:
    """Same geometry and noise with an n-snapshot LFM waveform."""
    return make_scenario(scenario.m, scenario.p, n, scenario.phi, scenario.theta, scenario.sigma_n)


# ===== Noise covariances =====

def random_noise_cov(m: int, alpha: float, rng: RngStream) -> np.ndarray:
    """
    Colored noise covariance alpha H H^H + I with H i.i.d. CN(0, 1).

    Args:
        m: Dimension
        alpha: Correlation scale (>= 0)
        rng: Stream to draw H from (advanced)
    """
    if alpha < 0:
        raise InvalidInputError(f"alpha must be >= 0, got {alpha}")
    gen = rng.generator
    h = (gen.standard_normal((m, m)) + 1j * gen.standard_normal((m, m))) / math.sqrt(2.0)
    sigma = alpha * (h @ h.conj().T) + np.eye(m)
    return 0.5 * (sigma + sigma.conj().T)


def perturb_cov(sigma_n: np.ndarray, rho: float, rng: RngStream) -> np.ndarray:
    """
    Perturb the free off-diagonal entries of a Hermitian covariance.

    Each upper-triangle entry receives N(0, rho^2) real and imaginary
    parts (mirrored conjugate below the diagonal); the diagonal is left
    untouched. Draws are repeated until the result is positive definite.

    Raises:
        PerturbationError: After MAX_PERTURBATION_TRIES rejections
    """
    if rho < 0:
        raise InvalidInputError(f"rho must be >= 0, got {rho}")
    sigma_n = check_psd(np.asarray(sigma_n, dtype=complex), "sigma_n")
    if rho == 0:
        return sigma_n.copy()

    m = sigma_n.shape[0]
    rows, cols = np.triu_indices(m, 1)
    gen = rng.generator
    for _ in range(MAX_PERTURBATION_TRIES):
        delta = np.zeros((m, m), dtype=complex)
        delta[rows, cols] = rho * (gen.standard_normal(rows.size) + 1j * gen.standard_normal(rows.size))
        delta = delta + delta.conj().T
        candidate = sigma_n + delta
        try:
            np.linalg.cholesky(candidate)
        except np.linalg.LinAlgError:
            continue
        return candidate

    raise PerturbationError(
        f"no positive definite perturbation after {MAX_PERTURBATION_TRIES} draws (rho={rho})"
    )


# ===== SNR =====

def snr_db(beta: complex, p: int, sigma_n: np.ndarray) -> float:
    """SNR = 10 log10(p |beta|^2 / tr(sigma_n))."""
    trace = float(np.real(np.trace(sigma_n)))
    return 10.0 * math.log10(p * abs(beta) ** 2 / trace)


def beta_for_snr(snr: float, p: int, sigma_n: np.ndarray, phase: float = 0.0) -> complex:
    """Amplitude with the requested SNR (dB) and phase."""
    trace = float(np.real(np.trace(sigma_n)))
    modulus = math.sqrt(10.0 ** (snr / 10.0) * trace / p)
    return modulus * complex(math.cos(phase), math.sin(phase))
