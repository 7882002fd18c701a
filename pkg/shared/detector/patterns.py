"""
Sign Patterns
Enumeration of composite sign vectors and their rotation orbits.

Patterns are listed in ascending binary order (bit = (1 + tau) / 2,
last element least significant). The rotation T1 = [[0, I], [-I, 0]]
multiplies the complex snapshot by -i; circular noise makes orthant
probabilities constant along its orbits.
"""

from typing import List, Sequence

import numpy as np

from shared.errors import InvalidInputError
from shared.models.detector import SignPattern, pattern_weights


MAX_ANTENNAS = 6


def rotation_matrix(m: int) -> np.ndarray:
    """T1 = [[0, I_m], [-I_m, 0]]."""
    eye = np.eye(m)
    zero = np.zeros((m, m))
    return np.block([[zero, eye], [-eye, zero]])


def rotate(vectors: np.ndarray) -> np.ndarray:
    """Apply T1 to the last axis of an array of 2m-vectors."""
    vectors = np.asarray(vectors)
    m = vectors.shape[-1] // 2
    return np.concatenate([vectors[..., m:], -vectors[..., :m]], axis=-1)


def pattern_taus(m: int) -> np.ndarray:
    """kappa x 2m matrix of sign vectors in ascending binary order."""
    if not 1 <= m <= MAX_ANTENNAS:
        raise InvalidInputError(f"m must be in 1..{MAX_ANTENNAS}, got {m}")
    shifts = np.arange(2 * m - 1, -1, -1)
    bits = (np.arange(4 ** m)[:, None] >> shifts) & 1
    return 2.0 * bits - 1.0


def orbits_from_taus(taus: np.ndarray) -> List[List[int]]:
    m = taus.shape[1] // 2
    weights = pattern_weights(m)
    seen = np.zeros(taus.shape[0], dtype=bool)
    orbits = []
    for j in range(taus.shape[0]):
        if seen[j]:
            continue
        orbit = []
        tau = taus[j]
        for _ in range(4):
            idx = int((tau > 0).astype(np.int64) @ weights)
            if idx in orbit:
                break
            orbit.append(idx)
            tau = rotate(tau)
        seen[orbit] = True
        orbits.append(orbit)
    return orbits


def enumerate_patterns(m: int) -> List[SignPattern]:
    """
    All 4^m sign patterns with their orbit ids.

    Args:
        m: Receive antennas (1..6)

    Returns:
        List of SignPattern ordered by index
    """
    taus = pattern_taus(m)
    orbit_of = np.zeros(taus.shape[0], dtype=int)
    for orbit in orbits_from_taus(taus):
        orbit_of[orbit] = orbit[0]
    return [
        SignPattern(index=j, tau=taus[j], orbit_id=int(orbit_of[j]))
        for j in range(taus.shape[0])
    ]


def orbit_partition(patterns: Sequence[SignPattern]) -> List[List[int]]:
    """
    Group pattern indices into orbits [j, j1, j2, j3] with
    tau_{j_k} = T1^k tau_j and j the smallest index.
    """
    taus = np.array([p.tau for p in sorted(patterns, key=lambda p: p.index)])
    return orbits_from_taus(taus)
