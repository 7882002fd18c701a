"""
Quasi-Monte Carlo Points
Scrambled Sobol point sets for randomized QMC integration.
"""

import math

import numpy as np
from scipy.stats import qmc

from shared.errors import InvalidInputError
from shared.numerics.rng import RngStream


def qmc_points(dim: int, n_points: int, shift: RngStream) -> np.ndarray:
    """
    Generate a digit-scrambled Sobol point set.

    The scramble is derived from a fresh generator of ``shift`` so two
    calls with equal streams return identical points.

    Args:
        dim: Dimension of the unit cube (>= 1)
        n_points: Number of points; rounded up to a power of two
        shift: Stream that fixes the scramble

    Returns:
        Array of shape (2**ceil(log2(n_points)), dim) in [0, 1)
    """
    if dim < 1:
        raise InvalidInputError(f"dim must be >= 1, got {dim}")
    if n_points < 1:
        raise InvalidInputError(f"n_points must be >= 1, got {n_points}")

    exponent = max(0, math.ceil(math.log2(n_points)))
    seed = np.random.default_rng(shift.int_seed())
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    return sampler.random_base2(exponent)
