"""
Standard Normal
Cumulative distribution and quantile of N(0, 1).
"""

from typing import Union

import numpy as np
from scipy.special import ndtr, ndtri

from shared.errors import InvalidInputError

ArrayLike = Union[float, np.ndarray]


def std_normal_cdf(x: ArrayLike) -> ArrayLike:
    """Standard normal CDF Phi(x)."""
    return ndtr(x)


def std_normal_quantile(p: ArrayLike) -> ArrayLike:
    """
    Standard normal quantile Phi^{-1}(p).

    Args:
        p: Probability or array of probabilities in (0, 1)

    Returns:
        Quantile(s), same shape as p

    Raises:
        InvalidInputError: If any p lies outside (0, 1)
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0.0) & (p_arr < 1.0))):
        raise InvalidInputError("quantile requires p in (0, 1)")
    return ndtri(p)
